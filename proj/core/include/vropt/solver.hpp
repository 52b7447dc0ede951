#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vropt/objective.hpp"
#include "vropt/schedule.hpp"
#include "vropt/vector.hpp"

namespace vropt {

enum class Algorithm { svrg, svrg_pp, svrg_auto, svrg_nc_pp, sgd, saga };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

// Snapshot averaging convention. Each listing is followed literally by
// default: inclusive averages the post-update iterates x_1..x_m (svrg,
// svrg_pp, svrg_auto); exclusive averages x_0..x_{m-1} (svrg_nc_pp).
enum class AveragingMode { per_algorithm, inclusive, exclusive };

struct SolverConfig {
  Algorithm algorithm = Algorithm::svrg_pp;
  double eta = 0.0;          // step length; must be > 0
  std::size_t m = 0;         // svrg epoch length; 0 -> 2n
  std::size_t m0 = 0;        // svrg_pp / svrg_nc_pp initial length; 0 -> ceil(n/4)
  std::size_t epochs = 1;    // S
  double epsilon = std::numeric_limits<double>::quiet_NaN();  // target accuracy
  double theta = std::numeric_limits<double>::quiet_NaN();    // ||x0 - x*||^2 bound
  double delta = std::numeric_limits<double>::quiet_NaN();    // F(x0) - F* bound
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  // parallel repetitions own distinct streams
  double max_passes = 1000.0;
  AveragingMode averaging = AveragingMode::per_algorithm;
  bool record_variance = false;        // enumerated variance at epoch rows
  std::size_t saga_table_cap_mb = 1024;
  // When known, traces carry suboptimality F(x) - reference_value.
  double reference_value = std::numeric_limits<double>::quiet_NaN();

  std::string to_json() const;
  static SolverConfig from_json(const std::string& text);
};

struct TraceRow {
  double pass = 0.0;       // effective passes of gradient work
  std::size_t epoch = 0;
  double objective = 0.0;
  double subopt = std::numeric_limits<double>::quiet_NaN();
  double variance = std::numeric_limits<double>::quiet_NaN();
};

struct RunTrace {
  std::vector<TraceRow> rows;
  SolverConfig config;
  std::string prng_id;
  std::uint64_t dataset_hash = 0;
  bool truncated = false;
  bool diverged = false;
  double total_passes = 0.0;
  std::size_t total_epochs = 0;
  Vector final_point;

  // CSV with header `pass,epoch,objective,subopt,variance`, shortest
  // round-trip decimal formatting, absent values as nan.
  std::string to_csv() const;
  // JSON envelope carrying config, metadata and rows.
  std::string to_json() const;
};

// Variance-reduced gradient xi = grad f_i(x) - grad f_i(x~) + mu where
// mu must equal full_grad(x~). Enumerating i averages exactly to full_grad(x).
Vector reduced_gradient(const CompositeObjective& obj, std::size_t i, const Vector& x,
                        const Vector& x_tilde, const Vector& mu);

// Test/audit hook observing states along a run.
class IterationObserver {
 public:
  virtual ~IterationObserver() = default;
  // Called after each inner update with the new iterate.
  virtual void on_iterate(std::size_t epoch, std::uint64_t t,
                          std::span<const double> x,
                          std::span<const double> x_snapshot) {}
  // Called at each epoch boundary with the new snapshot.
  virtual void on_snapshot(std::size_t epoch, std::span<const double> x_tilde) {}
};

RunTrace run_solver(const CompositeObjective& obj, const Vector& x0,
                    const SolverConfig& config, IterationObserver* observer = nullptr);

RunTrace run_svrg(const CompositeObjective&, const Vector& x0, const SolverConfig&);
RunTrace run_svrg_pp(const CompositeObjective&, const Vector& x0, const SolverConfig&);
RunTrace run_svrg_auto(const CompositeObjective&, const Vector& x0, const SolverConfig&);
RunTrace run_svrg_nc_pp(const CompositeObjective&, const Vector& x0, const SolverConfig&);
RunTrace run_sgd(const CompositeObjective&, const Vector& x0, const SolverConfig&);
RunTrace run_saga(const CompositeObjective&, const Vector& x0, const SolverConfig&);

struct TheoremConfig {
  double eta = 0.0;
  std::size_t m0 = 0;   // initial epoch length (or fixed m for svrg)
  std::size_t epochs = 0;
};

// Parameter choices backing the convergence statements:
//   svrg_pp:    eta = 1/(7L),  m0 = ceil(L Theta / Delta), S = ceil(log2(Delta/eps))
//   svrg_nc_pp: eta = min{1/(13L), eps/(312 sqrt(2) Theta L l)}, m0 = ceil(Theta/(eta Delta))
// eps >= Delta collapses to a single epoch.
TheoremConfig configure_from_bounds(Algorithm alg, double theta, double delta,
                                    double epsilon, double upper, double lower);

// Fixed-length SVRG defaults for sigma-strongly-convex instances:
//   l <= L: eta = min{1/(21L), sigma/(63 L l)}, m = ceil(10/(sigma eta))
//   l >  L: eta = sigma/(25 L l),               m = ceil(4/(sigma eta))
double theorem_step_svrg(double upper, double lower, double sigma);
std::size_t theorem_epoch_length_svrg(double upper, double lower, double sigma);

// Online epoch-termination rule: epochs 1 and 2 have forced lengths
// ceil(n/4) and ceil(n/2); later epochs end once the rolling mean of
// ||grad f_i(x_t) - grad f_i(x~)||^2 over the last ceil(n/4) iterations
// exceeds half of the previous epoch's mean, at minimum length ceil(n/4).
class AutoEpochRule {
 public:
  explicit AutoEpochRule(std::size_t n);

  std::size_t window() const { return window_; }
  std::size_t forced_length(std::size_t epoch) const;  // epochs 1, 2
  void begin_epoch(std::size_t epoch);
  // Records diff_t; returns true when the current epoch must terminate.
  bool record(double diff);
  void end_epoch();

 private:
  std::size_t n_ = 1;
  std::size_t window_ = 1;
  std::size_t epoch_ = 0;
  std::vector<double> ring_;
  std::size_t count_ = 0;
  double ring_sum_ = 0.0;
  double epoch_sum_ = 0.0;
  double prev_mean_ = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace vropt
