#include "xwalk/preprocess.hpp"

#include <cmath>
#include <string>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "xwalk/error.hpp"

namespace xwalk {

namespace {

int interpolation_flag(Resampling r) {
  switch (r) {
    case Resampling::Bilinear: return cv::INTER_LINEAR;
    case Resampling::Area: return cv::INTER_AREA;
    case Resampling::Nearest: return cv::INTER_NEAREST;
  }
  return cv::INTER_LINEAR;
}

// Largest centered region with the target aspect ratio.
cv::Rect center_crop(int w, int h, int target_w, int target_h) {
  const double target_aspect = static_cast<double>(target_w) / target_h;
  int crop_w = w;
  int crop_h = static_cast<int>(std::lround(w / target_aspect));
  if (crop_h > h) {
    crop_h = h;
    crop_w = static_cast<int>(std::lround(h * target_aspect));
  }
  crop_w = std::max(1, std::min(crop_w, w));
  crop_h = std::max(1, std::min(crop_h, h));
  return cv::Rect((w - crop_w) / 2, (h - crop_h) / 2, crop_w, crop_h);
}

cv::Mat to_rgb(const cv::Mat& decoded) {
  cv::Mat rgb;
  switch (decoded.channels()) {
    case 1: cv::cvtColor(decoded, rgb, cv::COLOR_GRAY2RGB); break;
    case 3: cv::cvtColor(decoded, rgb, cv::COLOR_BGR2RGB); break;
    case 4: cv::cvtColor(decoded, rgb, cv::COLOR_BGRA2RGB); break;
    default: throw DecodeError("unsupported channel count " + std::to_string(decoded.channels()));
  }
  return rgb;
}

}  // namespace

void validate(const PreprocessSpec& spec) {
  if (spec.width < 1 || spec.height < 1) {
    throw ValidationError("preprocess target dimensions must be >= 1");
  }
  for (float s : spec.std) {
    if (!(s > 0.0f)) throw ValidationError("preprocess normalization std must be > 0");
  }
}

Tensor preprocess(const cv::Mat& rgb, const PreprocessSpec& spec) {
  validate(spec);
  if (rgb.empty() || rgb.cols < 1 || rgb.rows < 1) {
    throw ValidationError("cannot preprocess an empty image");
  }
  if (rgb.type() != CV_8UC3) throw ValidationError("preprocess expects an 8-bit 3-channel image");

  cv::Mat cropped = rgb(center_crop(rgb.cols, rgb.rows, spec.width, spec.height));
  cv::Mat scaled;
  if (cropped.cols == spec.width && cropped.rows == spec.height) {
    scaled = cropped;
  } else {
    cv::resize(cropped, scaled, cv::Size(spec.width, spec.height), 0, 0,
               interpolation_flag(spec.resampling));
  }

  Tensor out;
  out.channels = 3;
  out.height = spec.height;
  out.width = spec.width;
  out.data.resize(static_cast<std::size_t>(3) * spec.height * spec.width);
  const std::size_t plane = static_cast<std::size_t>(spec.height) * spec.width;
  for (int y = 0; y < spec.height; ++y) {
    const auto* row = scaled.ptr<cv::Vec3b>(y);
    for (int x = 0; x < spec.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        const float v = row[x][c] / 255.0f;
        out.data[c * plane + static_cast<std::size_t>(y) * spec.width + x] =
            (v - spec.mean[c]) / spec.std[c];
      }
    }
  }
  return out;
}

cv::Mat decode_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw IoError("image not found: " + path.string());
  }
  cv::Mat decoded = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (decoded.empty()) throw DecodeError("cannot decode image: " + path.string());
  if (decoded.depth() != CV_8U) decoded.convertTo(decoded, CV_8U, 1.0 / 257.0);
  return to_rgb(decoded);
}

cv::Mat decode_image(const std::vector<unsigned char>& encoded) {
  if (encoded.empty()) throw DecodeError("cannot decode an empty buffer");
  cv::Mat decoded = cv::imdecode(encoded, cv::IMREAD_UNCHANGED);
  if (decoded.empty()) throw DecodeError("cannot decode image buffer");
  if (decoded.depth() != CV_8U) decoded.convertTo(decoded, CV_8U, 1.0 / 257.0);
  return to_rgb(decoded);
}

}  // namespace xwalk
