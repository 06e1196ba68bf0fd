#include "xwalk/inference.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <opencv2/dnn.hpp>

#include "xwalk/error.hpp"
#include "xwalk/text.hpp"

namespace xwalk {

namespace {

std::array<float, 3> parse_channels(const std::string& key, const std::string& value) {
  std::vector<float> parts;
  for (const auto& item : split(value, ',')) {
    auto v = parse_double(trim(item));
    if (!v) throw BackendLoadError("model metadata: bad number in '" + key + "'");
    parts.push_back(static_cast<float>(*v));
  }
  if (parts.size() == 1) return {parts[0], parts[0], parts[0]};
  if (parts.size() == 3) return {parts[0], parts[1], parts[2]};
  throw BackendLoadError("model metadata: '" + key + "' needs 1 or 3 values");
}

int parse_dimension(const std::string& key, const std::string& value) {
  auto v = parse_int(value);
  if (!v || *v < 1) throw BackendLoadError("model metadata: '" + key + "' must be a positive integer");
  return static_cast<int>(*v);
}

ClassScores to_scores(const cv::Mat& out) {
  if (out.total() != 3) {
    throw ClassificationError("model produced " + std::to_string(out.total()) +
                              " outputs, expected 3");
  }
  cv::Mat flat = out.reshape(1, 1);
  std::array<double, 3> v{};
  for (int i = 0; i < 3; ++i) v[i] = flat.at<float>(0, i);
  for (double x : v) {
    if (!std::isfinite(x)) throw ClassificationError("model produced a non-finite output");
  }
  const bool probabilities = std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0 && x <= 1.0; }) &&
                             std::abs(v[0] + v[1] + v[2] - 1.0) < 1e-4;
  if (!probabilities) {
    const double mx = *std::max_element(v.begin(), v.end());
    for (double& x : v) x = std::exp(x - mx);
  }
  const double sum = v[0] + v[1] + v[2];
  return ClassScores{v[0] / sum, v[1] / sum, v[2] / sum};
}

}  // namespace

PreprocessSpec ModelMetadata::preprocess_spec() const {
  PreprocessSpec spec;
  spec.width = input_w;
  spec.height = input_h;
  spec.mean = mean;
  spec.std = std;
  return spec;
}

ModelMetadata parse_model_metadata(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw BackendLoadError("model metadata line " + std::to_string(line_no) + ": expected key = value");
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key != "input_w" && key != "input_h" && key != "mean" && key != "std") {
      throw BackendLoadError("model metadata: unknown key '" + key + "'");
    }
    if (!kv.emplace(key, value).second) throw BackendLoadError("model metadata: duplicate key '" + key + "'");
  }
  for (const char* required : {"input_w", "input_h", "mean", "std"}) {
    if (!kv.count(required)) throw BackendLoadError(std::string("model metadata: missing key '") + required + "'");
  }
  ModelMetadata md;
  md.input_w = parse_dimension("input_w", kv["input_w"]);
  md.input_h = parse_dimension("input_h", kv["input_h"]);
  md.mean = parse_channels("mean", kv["mean"]);
  md.std = parse_channels("std", kv["std"]);
  for (float s : md.std) {
    if (!(s > 0.0f)) throw BackendLoadError("model metadata: std must be > 0");
  }
  return md;
}

ModelMetadata load_model_metadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BackendLoadError("cannot open model metadata: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_metadata(buf.str());
}

struct ModelBackend::Net {
  cv::dnn::Net net;
};

ModelBackend::ModelBackend(const std::filesystem::path& model_path,
                           const std::filesystem::path& metadata_path)
    : net_(std::make_unique<Net>()), metadata_(load_model_metadata(metadata_path)) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(model_path, ec)) {
    throw BackendLoadError("model file not found: " + model_path.string());
  }
  try {
    net_->net = cv::dnn::readNetFromONNX(model_path.string());
  } catch (const cv::Exception& e) {
    throw BackendLoadError("cannot load model " + model_path.string() + ": " + e.what());
  }
  if (net_->net.empty()) throw BackendLoadError("model is empty: " + model_path.string());

  // Dry run at the advertised input size catches metadata/model mismatches at load time.
  try {
    cv::Mat probe(metadata_.input_h, metadata_.input_w, CV_8UC3, cv::Scalar(127, 127, 127));
    scores(probe);
  } catch (const std::exception& e) {
    throw BackendLoadError("model rejects " + std::to_string(metadata_.input_w) + "x" +
                           std::to_string(metadata_.input_h) + " input from metadata: " + e.what());
  }
}

ModelBackend::~ModelBackend() = default;
ModelBackend::ModelBackend(ModelBackend&&) noexcept = default;
ModelBackend& ModelBackend::operator=(ModelBackend&&) noexcept = default;

ClassScores ModelBackend::scores(const cv::Mat& rgb) {
  const Tensor input = preprocess(rgb, metadata_.preprocess_spec());
  const int shape[] = {1, input.channels, input.height, input.width};
  cv::Mat blob(4, shape, CV_32F, const_cast<float*>(input.data.data()));
  try {
    net_->net.setInput(blob);
    return to_scores(net_->net.forward());
  } catch (const cv::Exception& e) {
    throw ClassificationError(std::string("inference failed: ") + e.what());
  }
}

Observation ModelBackend::classify(const Frame& frame) {
  cv::Mat rgb;
  try {
    rgb = decode_image(frame.path);
  } catch (const Error& e) {
    throw ClassificationError(e.what());
  }
  return make_observation(0.0, scores(rgb));
}

}  // namespace xwalk
