#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include <opencv2/core.hpp>

namespace xwalk {

enum class Resampling { Bilinear, Area, Nearest };

// Center-crop to the target aspect ratio, scale to width x height, then
// normalize each channel as (pixel / 255 - mean) / std.
struct PreprocessSpec {
  int width = 100;
  int height = 100;
  Resampling resampling = Resampling::Bilinear;
  std::array<float, 3> mean = {0.5f, 0.5f, 0.5f};
  std::array<float, 3> std = {0.5f, 0.5f, 0.5f};
};

void validate(const PreprocessSpec& spec);

// Planar float tensor, channel-major (C x H x W), channels in RGB order.
struct Tensor {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  float at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
};

// `rgb` must be CV_8UC3 in RGB channel order.
Tensor preprocess(const cv::Mat& rgb, const PreprocessSpec& spec);

// Decodes an image file to an RGB CV_8UC3 raster. Throws IoError when the
// file is missing and DecodeError when it cannot be decoded.
cv::Mat decode_image(const std::filesystem::path& path);

cv::Mat decode_image(const std::vector<unsigned char>& encoded);

}  // namespace xwalk
