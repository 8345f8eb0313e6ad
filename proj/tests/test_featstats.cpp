#include <doctest.h>

#include <cmath>

#include "rigorbench/error.hpp"
#include "rigorbench/featstats.hpp"

using namespace rigorbench;

namespace {

FeatureMap random_map(std::size_t h, std::size_t w, std::size_t c, std::uint64_t seed, double scale, double shift) {
  CounterRng rng(seed, 0);
  std::vector<double> values(h * w * c);
  for (auto& v : values) v = scale * rng.normal() + shift;
  return FeatureMap(h, w, c, values);
}

// Flat two-pass recomputation, one channel at a time.
ChannelMoments naive_moments(const FeatureMap& map) {
  ChannelMoments out;
  const double n = static_cast<double>(map.positions());
  for (std::size_t c = 0; c < map.channels(); ++c) {
    double sum = 0;
    for (std::size_t y = 0; y < map.height(); ++y)
      for (std::size_t x = 0; x < map.width(); ++x) sum += map.at(y, x, c);
    const double mean = sum / n;
    double ss = 0;
    for (std::size_t y = 0; y < map.height(); ++y)
      for (std::size_t x = 0; x < map.width(); ++x) ss += (map.at(y, x, c) - mean) * (map.at(y, x, c) - mean);
    out.mean.push_back(mean);
    out.stddev.push_back(std::sqrt(ss / n));
  }
  return out;
}

}  // namespace

TEST_CASE("channel_moments basics") {
  const auto constant = channel_moments(FeatureMap(3, 4, 2, 3.0));
  CHECK(constant.mean == std::vector<double>{3, 3});
  CHECK(constant.stddev == std::vector<double>{0, 0});

  const auto pair = channel_moments(FeatureMap(1, 2, 1, std::vector<double>{0.0, 2.0}));
  CHECK(pair.mean[0] == 1.0);
  CHECK(pair.stddev[0] == 1.0);
}

TEST_CASE("channel_moments matches a flat recomputation") {
  const auto map = random_map(8, 8, 4, 3, 2.0, -1.0);
  const auto got = channel_moments(map);
  const auto want = naive_moments(map);
  for (std::size_t c = 0; c < 4; ++c) {
    CHECK(std::abs(got.mean[c] - want.mean[c]) <= 1e-12);
    CHECK(std::abs(got.stddev[c] - want.stddev[c]) <= 1e-12);
  }
}

TEST_CASE("FeatureMap invariants") {
  CHECK_THROWS_AS(FeatureMap(0, 2, 2), InputError);
  CHECK_THROWS_AS(FeatureMap(1, 1, 2, std::vector<double>{1.0}), InputError);
  CHECK_THROWS_AS(FeatureMap(1, 1, 1, std::vector<double>{std::nan("")}), InputError);
}

TEST_CASE("stat_swap identity and constant channels") {
  const auto content = random_map(6, 5, 3, 7, 1.5, 0.5);
  const auto same = stat_swap(content, content);
  for (std::size_t i = 0; i < content.values().size(); ++i)
    CHECK(std::abs(same.values()[i] - content.values()[i]) <= 1e-9);

  const auto style = random_map(4, 4, 3, 8, 3.0, 10.0);
  const auto style_m = channel_moments(style);
  const auto flat = stat_swap(FeatureMap(6, 5, 3, 2.5), style);
  for (std::size_t y = 0; y < 6; ++y)
    for (std::size_t x = 0; x < 5; ++x)
      for (std::size_t c = 0; c < 3; ++c) CHECK(flat.at(y, x, c) == doctest::Approx(style_m.mean[c]));

  CHECK_THROWS_AS(stat_swap(content, random_map(2, 2, 4, 1, 1, 0)), InputError);
}

TEST_CASE("stat_swap transfers style moments") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto content = random_map(9, 7, 5, 100 + seed, 0.5 + seed, -2.0);
    const auto style = random_map(5, 11, 5, 200 + seed, 4.0, 3.0 * seed);
    const auto out = stat_swap(content, style);
    CHECK(out.height() == 9);
    CHECK(out.width() == 7);
    CHECK(out.channels() == 5);
    const auto got = naive_moments(out);
    const auto want = naive_moments(style);
    for (std::size_t c = 0; c < 5; ++c) {
      CHECK(std::abs(got.mean[c] - want.mean[c]) <= 1e-6);
      CHECK(std::abs(got.stddev[c] - want.stddev[c]) <= 10 * kDefaultSwapEpsilon * want.stddev[c]);
    }
    const auto twice = stat_swap(out, style);
    for (std::size_t i = 0; i < out.values().size(); ++i) CHECK(std::abs(twice.values()[i] - out.values()[i]) <= 1e-9);
  }
}

TEST_CASE("serial and parallel stat_swap are bit-identical") {
  const auto content = random_map(32, 32, 16, 1, 1.0, 0.0);
  const auto style = random_map(16, 16, 16, 2, 2.0, 1.0);
  CHECK(stat_swap(content, style, kDefaultSwapEpsilon, Execution::serial).values() ==
        stat_swap(content, style, kDefaultSwapEpsilon, Execution::parallel).values());
  const auto a = channel_moments(content, Execution::serial);
  const auto b = channel_moments(content, Execution::parallel);
  CHECK(a.mean == b.mean);
  CHECK(a.stddev == b.stddev);
}
