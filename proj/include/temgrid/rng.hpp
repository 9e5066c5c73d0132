#pragma once

#include <cstdint>
#include <vector>

namespace temgrid::rng {

// splitmix64 step; used to expand a user seed into generator state.
std::uint64_t splitmix64(std::uint64_t& state);

// PCG64: 128-bit LCG state with the XSL-RR output permutation.
class Pcg64 {
 public:
  explicit Pcg64(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer on [0, bound); bound > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound);
  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

 private:
  unsigned __int128 state_ = 0;
  unsigned __int128 increment_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Fisher-Yates shuffle driven by `gen`, so results do not depend on the
// standard library's distribution implementations.
template <typename T>
void shuffle(std::vector<T>& items, Pcg64& gen) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(gen.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace temgrid::rng
