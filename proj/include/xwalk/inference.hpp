#pragma once

#include <filesystem>
#include <memory>
#include <string_view>

#include <opencv2/core.hpp>

#include "xwalk/classifier.hpp"
#include "xwalk/preprocess.hpp"

namespace xwalk {

// Sidecar written next to an exported model: `key = value` lines carrying
// exactly input_w, input_h, mean and std. mean/std hold one value or three
// comma-separated per-channel values.
struct ModelMetadata {
  int input_w = 100;
  int input_h = 100;
  std::array<float, 3> mean = {0.5f, 0.5f, 0.5f};
  std::array<float, 3> std = {0.5f, 0.5f, 0.5f};

  PreprocessSpec preprocess_spec() const;
};

// Throws BackendLoadError on missing/unknown keys or bad values.
ModelMetadata parse_model_metadata(std::string_view text);
ModelMetadata load_model_metadata(const std::filesystem::path& path);

/// Exported-model backend: decodes the frame image, preprocesses it with the
/// sidecar constants and runs the ONNX network. The network must emit three
/// values in street, pedestrian, biker order; raw logits are soft-maxed.
class ModelBackend final : public ClassifierBackend {
 public:
  // Throws BackendLoadError when either file is missing or malformed, or the
  // network rejects an input of the metadata's size.
  ModelBackend(const std::filesystem::path& model_path, const std::filesystem::path& metadata_path);
  ~ModelBackend() override;
  ModelBackend(ModelBackend&&) noexcept;
  ModelBackend& operator=(ModelBackend&&) noexcept;

  // Throws ClassificationError when the image cannot be read or inference fails.
  Observation classify(const Frame& frame) override;
  ClassScores scores(const cv::Mat& rgb);

  std::string_view name() const noexcept override { return "model"; }
  const ModelMetadata& metadata() const noexcept { return metadata_; }

 private:
  struct Net;
  std::unique_ptr<Net> net_;
  ModelMetadata metadata_;
};

}  // namespace xwalk
