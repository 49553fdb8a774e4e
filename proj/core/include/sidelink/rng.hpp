#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace sidelink {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed split: the result depends only on the master seed and
/// the key sequence, never on how many other streams were derived before.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = splitmix64(master);
  for (auto k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

/// Stream tags for the independent generators of one drop.
enum class Stream : std::uint64_t {
  placement = 1,
  shadowing = 2,
  los_state = 3,
  allocation = 4,
  reception = 5,
};

inline Rng make_rng(std::uint64_t drop_seed, Stream s) {
  return Rng{derive_seed(drop_seed, {static_cast<std::uint64_t>(s)})};
}

/// Uniform in the open interval (0, 1) from 53 high bits.
inline double to_unit_open(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal draw addressed by (seed, counter); Box-Muller on two
/// splitmix64 outputs.
inline double counter_normal(std::uint64_t seed, std::uint64_t counter) noexcept {
  const std::uint64_t a = splitmix64(seed ^ splitmix64(2 * counter));
  const std::uint64_t b = splitmix64(seed ^ splitmix64(2 * counter + 1));
  const double u1 = to_unit_open(a);
  const double u2 = to_unit_open(b);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept {
  return to_unit_open(splitmix64(seed ^ splitmix64(counter)));
}

}  // namespace sidelink
