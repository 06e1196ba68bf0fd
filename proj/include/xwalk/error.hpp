#pragma once

#include <stdexcept>
#include <string>

namespace xwalk {

// Base for every error raised by the library. The CLI maps subclasses onto
// process exit codes (see tools/xwalk.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument, policy, matrix, config value or input file content.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Observation pushed with a timestamp earlier than the previous one.
class OrderingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

// Model or metadata missing, malformed or inconsistent.
class BackendLoadError : public Error {
 public:
  using Error::Error;
};

// A single frame could not be classified; callers may recover.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

class EndOfStream : public Error {
 public:
  EndOfStream() : Error("end of stream") {}
};

}  // namespace xwalk
