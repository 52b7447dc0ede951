#include "vropt/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace vropt {

std::uint64_t mix64(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id) {
  engine_.seed(mix64(mix64(seed) ^ mix64(~stream_id)));
}

std::uint64_t RandomStream::bits() { return engine_(); }

std::size_t RandomStream::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be >= 1");
  const std::uint64_t bound = n;
  // Accept only draws below the largest multiple of `bound`.
  const std::uint64_t cap =
      (std::numeric_limits<std::uint64_t>::max() / bound) * bound;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= cap);
  return static_cast<std::size_t>(r % bound);
}

double RandomStream::uniform_real() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller on the portable uniform; u1 shifted away from zero.
  double u1 = uniform_real();
  double u2 = uniform_real();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

}  // namespace vropt
