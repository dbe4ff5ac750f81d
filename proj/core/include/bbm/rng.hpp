#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace bbm {

// splitmix64 finalizer, used as a counter hash.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of ensemble member i derived from a master seed. Members never
// depend on each other, so ensembles can be extended without resampling.
constexpr std::uint64_t member_seed(std::uint64_t master, std::uint64_t i) {
  return mix64(mix64(master) ^ mix64(i + 0x632be59bd9b4e019ULL));
}

// Uniform on (0, 1) determined by (seed, n, stream) only.
inline double counter_uniform(std::uint64_t seed, std::uint64_t n, std::uint64_t stream) {
  std::uint64_t h = mix64(seed ^ mix64(n * 0x9e3779b97f4a7c15ULL + stream));
  h = mix64(h + stream);
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Two independent standard normals from (seed, n) by Box-Muller.
inline std::pair<double, double> counter_normal_pair(std::uint64_t seed, std::uint64_t n) {
  double u1 = counter_uniform(seed, n, 1);
  double u2 = counter_uniform(seed, n, 2);
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace bbm
