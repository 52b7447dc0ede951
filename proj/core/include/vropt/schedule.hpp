#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace vropt {

// Global step-length schedule eta_k = eta * sqrt(T) / sqrt(2T - k) for
// k = 1..T, shared across epochs. Values grow from just above eta/sqrt(2)
// up to exactly eta, and consecutive reciprocals satisfy
//   1/eta_k - 1/eta_{k+1} >= 1 / (2 sqrt(2) eta T).
class StepSchedule {
 public:
  StepSchedule(double base_eta, std::uint64_t total_iterations)
      : eta_(base_eta), total_(total_iterations) {
    if (!(base_eta > 0.0)) throw std::invalid_argument("StepSchedule: eta must be > 0");
    if (total_iterations == 0) throw std::invalid_argument("StepSchedule: T must be >= 1");
  }

  double base() const { return eta_; }
  std::uint64_t total() const { return total_; }
  std::uint64_t current() const { return k_; }

  double value_at(std::uint64_t k) const {
    if (k < 1 || k > total_) throw std::out_of_range("StepSchedule: k outside [1, T]");
    const double t = static_cast<double>(total_);
    return eta_ * std::sqrt(t) / std::sqrt(2.0 * t - static_cast<double>(k));
  }

  // Increments the counter, then returns the step for the new k.
  double next() {
    if (k_ >= total_) throw std::out_of_range("StepSchedule: exhausted");
    ++k_;
    return value_at(k_);
  }

 private:
  double eta_;
  std::uint64_t total_;
  std::uint64_t k_ = 0;
};

}  // namespace vropt
