#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hoplite {

using NodeId = std::uint32_t;

// Dense numerics are double throughout the training path.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

// Error hierarchy. The C API and the CLI map these onto stable codes:
// input/format problems (ParseError, IoError, FormatError) are distinguished
// from runtime failures (everything else).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct FormatError : Error {
  using Error::Error;
};
struct DimensionError : Error {
  using Error::Error;
};
struct InvalidArgument : Error {
  using Error::Error;
};
struct NumericError : Error {
  using Error::Error;
};
struct SamplingError : Error {
  using Error::Error;
};

// xoshiro256++ with splitmix64 seeding. Hand-rolled so that sampled batches
// are reproducible bit-for-bit across platforms and standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) s = splitmix64(x);
  }

  // Independent stream derived from (seed, counter), used to give every
  // batch / evaluation run its own deterministic stream.
  static Rng substream(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t x = seed;
    std::uint64_t a = splitmix64(x);
    x ^= counter * 0x9E3779B97F4A7C15ull;
    return Rng(a ^ splitmix64(x));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Unbiased draw from [0, n) by rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("uniform_below: n must be positive");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform in [0, 1).
  double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }

private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::uint64_t state_[4];
};

}  // namespace hoplite
