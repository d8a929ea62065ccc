#include "enrich/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace enrich {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_job_seed(std::uint64_t global_seed, std::uint64_t job_index) {
  // mix64 is a bijection and kGolden is odd, so the map job_index -> seed is
  // injective for any fixed global_seed.
  return mix64(mix64(global_seed) + kGolden * (job_index + 1));
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return lo + static_cast<std::int64_t>(r % span);
}

std::array<double, 4> Rng::unit_quaternion() {
  // Shoemake's subgroup algorithm.
  const double u1 = uniform();
  const double u2 = uniform() * 2.0 * std::numbers::pi;
  const double u3 = uniform() * 2.0 * std::numbers::pi;
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  return {a * std::cos(u2), a * std::sin(u2), b * std::sin(u3), b * std::cos(u3)};
}

double hash_uniform(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  std::uint64_t h = mix64(a + kGolden);
  h = mix64(h ^ (b + kGolden * 3));
  h = mix64(h ^ (c + kGolden * 5));
  h = mix64(h ^ (d + kGolden * 7));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace enrich
