#pragma once

#include <cstdint>
#include <random>

namespace vropt {

// Deterministic stream of random draws. Identical (seed, stream_id) pairs
// produce identical sequences on every platform: mt19937_64 output is fully
// specified by the standard, and the bounded-index / real / normal mappings
// below avoid the implementation-defined std distributions.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  // Uniform index in [0, n); unbiased via rejection sampling. n >= 1.
  std::size_t uniform_index(std::size_t n);

  std::uint64_t bits();        // raw 64 engine bits
  double uniform_real();       // [0, 1), 53-bit resolution
  double normal();             // standard normal (Box-Muller)

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stateless 64-bit finalizer used for seeding and content hashing.
std::uint64_t mix64(std::uint64_t v);

}  // namespace vropt
