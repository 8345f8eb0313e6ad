#pragma once

#include <cstddef>
#include <vector>

#include "rigorbench/parallel.hpp"

namespace rigorbench {

/// H x W x C feature map stored channel-last: value(y, x, c) at
/// ((y * W) + x) * C + c.
class FeatureMap {
 public:
  FeatureMap(std::size_t height, std::size_t width, std::size_t channels, std::vector<double> values);
  FeatureMap(std::size_t height, std::size_t width, std::size_t channels, double fill = 0.0);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t positions() const noexcept { return height_ * width_; }

  double& at(std::size_t y, std::size_t x, std::size_t c) { return values_[(y * width_ + x) * channels_ + c]; }
  double at(std::size_t y, std::size_t x, std::size_t c) const { return values_[(y * width_ + x) * channels_ + c]; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t height_;
  std::size_t width_;
  std::size_t channels_;
  std::vector<double> values_;
};

struct ChannelMoments {
  std::vector<double> mean;
  std::vector<double> stddev;  // population, divisor H * W
};

ChannelMoments channel_moments(const FeatureMap& map, Execution exec = Execution::parallel);

inline constexpr double kDefaultSwapEpsilon = 1e-5;

// Re-normalizes every content channel to the style map's channel mean and
// standard deviation. The content std in the denominator is floored at
// `epsilon`, so a constant channel maps to the style mean.
FeatureMap stat_swap(const FeatureMap& content, const FeatureMap& style, double epsilon = kDefaultSwapEpsilon,
                     Execution exec = Execution::parallel);

}  // namespace rigorbench
