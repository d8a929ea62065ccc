#pragma once

#include <array>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace enrich {

/// Splittable seed derivation. Bijective in job_index for a fixed global seed,
/// so distinct jobs never share a seed.
std::uint64_t derive_job_seed(std::uint64_t global_seed, std::uint64_t job_index);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Thin wrapper over mt19937_64 with hand-written distributions. The standard
/// distributions are implementation-defined, which would break cross-platform
/// reproducibility of sampled scenes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniformly distributed unit quaternion (w, x, y, z).
  std::array<double, 4> unit_quaternion();

 private:
  std::mt19937_64 engine_;
};

/// Stateless hash-based uniform in [0,1) keyed by a tuple; used where the
/// draw must not depend on evaluation order (per-pixel shadow jitter).
double hash_uniform(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);

}  // namespace enrich
