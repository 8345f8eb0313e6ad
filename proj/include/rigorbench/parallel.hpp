#pragma once

#include <cstdint>

namespace rigorbench {

// Every data-parallel kernel keeps a serial reference path. Both paths
// produce bit-identical results; tests compare them directly.
enum class Execution { serial, parallel };

// Number of worker threads the parallel paths will use.
int thread_count();

// Reads RIGORBENCH_THREADS and caps the OpenMP team size accordingly.
// Returns the cap that was applied, or 0 when the variable is unset.
int configure_threads_from_env();

// Counter-based generator: the stream for (seed, index) does not depend on
// which thread draws it or in which order indices are visited.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t index) noexcept;

  std::uint64_t next() noexcept;
  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;
  // Uniform in (0, 1).
  double uniform() noexcept;
  double normal() noexcept;

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace rigorbench
