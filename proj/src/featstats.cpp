#include "rigorbench/featstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "rigorbench/error.hpp"

namespace rigorbench {

FeatureMap::FeatureMap(std::size_t height, std::size_t width, std::size_t channels, std::vector<double> values)
    : height_(height), width_(width), channels_(channels), values_(std::move(values)) {
  if (height_ < 1 || width_ < 1 || channels_ < 1) throw InputError("feature map dimensions must be >= 1");
  if (values_.size() != height_ * width_ * channels_) throw InputError("feature map size does not match H*W*C");
  for (double v : values_)
    if (!std::isfinite(v)) throw InputError("feature map contains a non-finite value");
}

FeatureMap::FeatureMap(std::size_t height, std::size_t width, std::size_t channels, double fill)
    : FeatureMap(height, width, channels, std::vector<double>(height * width * channels, fill)) {}

ChannelMoments channel_moments(const FeatureMap& map, Execution exec) {
  const std::size_t channels = map.channels();
  const std::size_t positions = map.positions();
  const double* data = map.values().data();
  ChannelMoments out{std::vector<double>(channels), std::vector<double>(channels)};
  const bool parallel = exec == Execution::parallel;
  (void)parallel;
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(channels); ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    double sum = 0.0;
    for (std::size_t p = 0; p < positions; ++p) sum += data[p * channels + c];
    const double mean = sum / static_cast<double>(positions);
    double ss = 0.0;
    for (std::size_t p = 0; p < positions; ++p) {
      const double d = data[p * channels + c] - mean;
      ss += d * d;
    }
    out.mean[c] = mean;
    out.stddev[c] = std::sqrt(ss / static_cast<double>(positions));
  }
  return out;
}

FeatureMap stat_swap(const FeatureMap& content, const FeatureMap& style, double epsilon, Execution exec) {
  if (content.channels() != style.channels())
    throw InputError("stat_swap: content has " + std::to_string(content.channels()) + " channels, style has " +
                     std::to_string(style.channels()));
  if (!(epsilon > 0.0)) throw InputError("stat_swap: epsilon must be > 0");
  const auto src = channel_moments(content, exec);
  const auto dst = channel_moments(style, exec);
  const std::size_t channels = content.channels();

  std::vector<double> scale(channels);
  for (std::size_t c = 0; c < channels; ++c) scale[c] = dst.stddev[c] / std::max(src.stddev[c], epsilon);

  std::vector<double> values(content.values().size());
  const double* in = content.values().data();
  const auto total = static_cast<std::int64_t>(values.size());
  const bool parallel = exec == Execution::parallel;
  (void)parallel;
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t k = 0; k < total; ++k) {
    const auto c = static_cast<std::size_t>(k) % channels;
    values[static_cast<std::size_t>(k)] = scale[c] * (in[k] - src.mean[c]) + dst.mean[c];
  }
  return FeatureMap(content.height(), content.width(), channels, std::move(values));
}

}  // namespace rigorbench
