#include "temgrid/rng.hpp"

#include <cmath>
#include <numbers>

namespace temgrid::rng {

namespace {
constexpr unsigned __int128 kMultiplier =
    (static_cast<unsigned __int128>(2549297995355413924ULL) << 64) | 4865540595714422341ULL;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Pcg64::Pcg64(std::uint64_t seed) {
  std::uint64_t s = seed;
  const std::uint64_t s_hi = splitmix64(s);
  const std::uint64_t s_lo = splitmix64(s);
  const std::uint64_t i_hi = splitmix64(s);
  const std::uint64_t i_lo = splitmix64(s);
  increment_ = ((static_cast<unsigned __int128>(i_hi) << 64) | i_lo) | 1U;
  state_ = 0;
  next_u64();
  state_ += (static_cast<unsigned __int128>(s_hi) << 64) | s_lo;
  next_u64();
}

std::uint64_t Pcg64::next_u64() {
  state_ = state_ * kMultiplier + increment_;
  const auto hi = static_cast<std::uint64_t>(state_ >> 64);
  const auto lo = static_cast<std::uint64_t>(state_);
  const unsigned rot = static_cast<unsigned>(hi >> 58);
  const std::uint64_t x = hi ^ lo;
  return (x >> rot) | (x << ((64U - rot) & 63U));
}

double Pcg64::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t Pcg64::below(std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double Pcg64::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace temgrid::rng
