#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace recip {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3", SC'11). Pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Well-known substream ids. Arrivals and policy draws never share a stream,
// so a policy cannot perturb the arrival sequence of a run.
enum class Stream : std::uint64_t {
  kArrivals = 1,
  kPolicy = 2,
  kGenerator = 3,
  kAnalysis = 4,
};

// Counter-based 64-bit generator. The 64-bit seed is the Philox key, the
// stream id occupies the upper half of the 128-bit counter and the draw index
// the lower half. Satisfies UniformRandomBitGenerator.
//
// All derived draws (bounded integers, doubles, shuffles) are implemented here
// rather than through <random> distributions so results are identical across
// standard library implementations.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng() : CounterRng(0, 0) {}
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  CounterRng(std::uint64_t seed, Stream stream) : CounterRng(seed, static_cast<std::uint64_t>(stream)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on [0, bound); bound must be > 0. Lemire's multiply-shift with rejection.
  std::uint64_t uniform_index(std::uint64_t bound);
  // Uniform on [0, 1) with 53 bits of precision.
  double uniform01();
  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = uniform_index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t draws() const { return counter_ * 2 - (have_spare_ ? 1 : 0); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace recip
