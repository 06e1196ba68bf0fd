#pragma once

#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include "xwalk/decision_engine.hpp"
#include "xwalk/event_log.hpp"

namespace xwalk {

// Receives every triggered record, in push order.
class TriggerSink {
 public:
  virtual ~TriggerSink() = default;
  virtual void on_trigger(const EventRecord& record, const WindowPolicy& policy) = 0;
  // Blocks until queued deliveries are done.
  virtual void flush() {}
};

class LogSink final : public TriggerSink {
 public:
  explicit LogSink(std::ostream& out) : out_(out) {}
  void on_trigger(const EventRecord& record, const WindowPolicy& policy) override;

 private:
  std::ostream& out_;
};

// Terminal bell, one BEL per trigger.
class BellSink final : public TriggerSink {
 public:
  explicit BellSink(std::ostream& out) : out_(out) {}
  void on_trigger(const EventRecord&, const WindowPolicy&) override;

 private:
  std::ostream& out_;
};

// Body of the webhook POST.
std::string webhook_body(const EventRecord& record, const WindowPolicy& policy);

/// POSTs a small JSON notification per trigger from a background thread.
/// Deliveries keep event order; failures are logged and dropped.
class WebhookSink final : public TriggerSink {
 public:
  // Throws ValidationError on a malformed URL.
  explicit WebhookSink(const std::string& url, double timeout_seconds = 2.0);
  ~WebhookSink() override;

  void on_trigger(const EventRecord& record, const WindowPolicy& policy) override;
  void flush() override;

  std::size_t delivered() const;
  std::size_t failed() const;

 private:
  void worker();

  std::string host_;
  int port_ = 80;
  std::string path_;
  double timeout_seconds_;

  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::condition_variable idle_cv_;
  std::deque<std::string> queue_;
  bool busy_ = false;
  bool stopping_ = false;
  std::size_t delivered_ = 0;
  std::size_t failed_ = 0;
  std::thread thread_;
};

}  // namespace xwalk
