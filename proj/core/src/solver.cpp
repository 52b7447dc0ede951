#include "vropt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "vropt/random.hpp"
#include "vropt/version.hpp"

namespace vropt {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::svrg: return "svrg";
    case Algorithm::svrg_pp: return "svrg++";
    case Algorithm::svrg_auto: return "svrg-auto";
    case Algorithm::svrg_nc_pp: return "svrg++nc";
    case Algorithm::sgd: return "sgd";
    case Algorithm::saga: return "saga";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "svrg") return Algorithm::svrg;
  if (s == "svrg++" || s == "svrg_pp") return Algorithm::svrg_pp;
  if (s == "svrg-auto" || s == "svrg_auto") return Algorithm::svrg_auto;
  if (s == "svrg++nc" || s == "svrg_nc_pp") return Algorithm::svrg_nc_pp;
  if (s == "sgd") return Algorithm::sgd;
  if (s == "saga") return Algorithm::saga;
  throw std::invalid_argument("unknown algorithm: " + s);
}

Vector reduced_gradient(const CompositeObjective& obj, std::size_t i, const Vector& x,
                        const Vector& x_tilde, const Vector& mu) {
  if (x.dim() != obj.dim() || x_tilde.dim() != obj.dim() || mu.dim() != obj.dim()) {
    throw std::invalid_argument("reduced_gradient: dimension mismatch");
  }
  std::vector<double> g = mu.to_dense_values();
  const std::vector<double> xd = x.to_dense_values();
  const std::vector<double> td = x_tilde.to_dense_values();
  obj.add_component_grad(i, xd, 1.0, g);
  obj.add_component_grad(i, td, -1.0, g);
  return Vector::dense(std::move(g));
}

AutoEpochRule::AutoEpochRule(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("AutoEpochRule: empty dataset");
  window_ = (n + 3) / 4;
  ring_.assign(window_, 0.0);
}

std::size_t AutoEpochRule::forced_length(std::size_t epoch) const {
  if (epoch == 1) return (n_ + 3) / 4;
  if (epoch == 2) return (n_ + 1) / 2;
  return 0;
}

void AutoEpochRule::begin_epoch(std::size_t epoch) {
  epoch_ = epoch;
  count_ = 0;
  ring_sum_ = 0.0;
  epoch_sum_ = 0.0;
  std::fill(ring_.begin(), ring_.end(), 0.0);
}

bool AutoEpochRule::record(double diff) {
  epoch_sum_ += diff;
  const std::size_t pos = count_ % window_;
  ring_sum_ += diff - ring_[pos];
  ring_[pos] = diff;
  ++count_;
  if (epoch_ <= 2) return false;          // forced lengths
  if (count_ < window_) return false;     // minimum epoch length
  if (std::isnan(prev_mean_)) return false;
  return ring_sum_ / static_cast<double>(window_) > 0.5 * prev_mean_;
}

void AutoEpochRule::end_epoch() {
  prev_mean_ = count_ > 0 ? epoch_sum_ / static_cast<double>(count_)
                          : std::numeric_limits<double>::quiet_NaN();
}

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

class Runner {
 public:
  Runner(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg,
         IterationObserver* obs)
      : obj_(obj), cfg_(cfg), obs_(obs), rng_(cfg.seed, cfg.stream) {
    if (x0.dim() != obj.dim()) throw std::invalid_argument("run: x0 dimension mismatch");
    if (!x0.all_finite()) throw std::invalid_argument("run: x0 must be finite");
    if (!(cfg_.eta > 0.0) || !std::isfinite(cfg_.eta)) {
      throw std::invalid_argument("run: eta must be > 0");
    }
    if (cfg_.max_passes < 1.0) throw std::invalid_argument("run: max_passes must be >= 1");
    n_ = obj.n();
    d_ = obj.dim();
    x_ = x0.to_dense_values();
    snap_ = x_;
    mu_.assign(d_, 0.0);
    xi_.assign(d_, 0.0);
    acc_.assign(d_, 0.0);
    trace_.config = cfg_;
    trace_.prng_id = std::string(kPrngId);
    trace_.dataset_hash = obj.data_hash();
    f0_ = obj.value(x_);
    divergence_threshold_ = 10.0 * std::abs(f0_) + 10.0;
  }

  RunTrace run() {
    emit_row(objective_at(x_), 0);
    if (!stop_) {
      switch (cfg_.algorithm) {
        case Algorithm::svrg:
        case Algorithm::svrg_pp:
        case Algorithm::svrg_auto:
        case Algorithm::svrg_nc_pp:
          run_epoch_family();
          break;
        case Algorithm::sgd:
          run_sgd_loop();
          break;
        case Algorithm::saga:
          run_saga_loop();
          break;
      }
    }
    finish();
    return std::move(trace_);
  }

 private:
  double passes() const {
    return static_cast<double>(full_pass_units_) +
           static_cast<double>(inner_count_) / static_cast<double>(n_);
  }

  double objective_at(const std::vector<double>& x) const { return obj_.value(x); }

  void emit_row(double f, std::size_t epoch, double variance = std::numeric_limits<double>::quiet_NaN()) {
    TraceRow row;
    row.pass = passes();
    row.epoch = epoch;
    row.objective = f;
    row.subopt = std::isfinite(cfg_.reference_value)
                     ? f - cfg_.reference_value
                     : std::numeric_limits<double>::quiet_NaN();
    row.variance = variance;
    if (!trace_.rows.empty() && trace_.rows.back().pass == row.pass) {
      trace_.rows.back() = row;
    } else {
      trace_.rows.push_back(row);
    }
    if (!std::isfinite(f) || f > divergence_threshold_) {
      trace_.diverged = true;
      stop_ = true;
    }
  }

  // Emits a row whenever the integer part of the pass counter advanced.
  void emit_if_pass_crossed() {
    const double p = passes();
    if (std::floor(p) > emitted_floor_) {
      emitted_floor_ = std::floor(p);
      emit_row(objective_at(x_), completed_epochs_);
    }
  }

  void charge_full_pass() {
    ++full_pass_units_;
    emit_if_pass_crossed();
  }

  void charge_iteration() {
    ++inner_count_;
    emit_if_pass_crossed();
  }

  void assemble_reduced_gradient(std::size_t i) {
    std::memcpy(xi_.data(), mu_.data(), d_ * sizeof(double));
    obj_.add_component_grad(i, x_, 1.0, xi_);
    obj_.add_component_grad(i, snap_, -1.0, xi_);
  }

  // ||grad f_i(x) - grad f_i(x~)||^2 given xi_ = mu_ + that difference.
  double last_diff_sq() const {
    double s = 0.0;
    for (std::size_t j = 0; j < d_; ++j) {
      const double v = xi_[j] - mu_[j];
      s += v * v;
    }
    return s;
  }

  bool inclusive_averaging() const {
    switch (cfg_.averaging) {
      case AveragingMode::inclusive: return true;
      case AveragingMode::exclusive: return false;
      case AveragingMode::per_algorithm:
        return cfg_.algorithm != Algorithm::svrg_nc_pp;
    }
    return true;
  }

  void run_epoch_family() {
    const Algorithm alg = cfg_.algorithm;
    std::size_t m_fixed = cfg_.m;
    std::size_t m0 = cfg_.m0;
    if (alg == Algorithm::svrg && m_fixed == 0) m_fixed = 2 * n_;
    if ((alg == Algorithm::svrg_pp || alg == Algorithm::svrg_nc_pp) && m0 == 0) {
      m0 = ceil_div(n_, 4);
    }
    const std::size_t S = cfg_.epochs;
    if ((alg == Algorithm::svrg_pp || alg == Algorithm::svrg_nc_pp) && S > 40) {
      throw std::invalid_argument("run: doubling epoch count too large");
    }
    const bool inclusive = inclusive_averaging();

    std::optional<StepSchedule> schedule;
    if (alg == Algorithm::svrg_nc_pp && S > 0) {
      const std::uint64_t factor = (std::uint64_t{1} << (S + 1)) - 2;
      if (m0 > std::numeric_limits<std::uint64_t>::max() / factor) {
        throw std::invalid_argument("run: schedule length overflows");
      }
      schedule.emplace(cfg_.eta, factor * m0);
    }
    AutoEpochRule rule(n_);

    for (std::size_t s = 1; s <= S; ++s) {
      if (passes() >= cfg_.max_passes) {
        trace_.truncated = true;
        break;
      }
      obj_.full_grad_into(snap_, mu_);
      charge_full_pass();
      if (stop_) break;

      std::size_t target = 0;  // 0 = open-ended (auto epochs >= 3)
      switch (alg) {
        case Algorithm::svrg: target = m_fixed; break;
        case Algorithm::svrg_pp:
        case Algorithm::svrg_nc_pp: target = (std::size_t{1} << s) * m0; break;
        case Algorithm::svrg_auto: target = rule.forced_length(s); break;
        default: break;
      }

      rule.begin_epoch(s);
      std::fill(acc_.begin(), acc_.end(), 0.0);
      std::size_t applied = 0;
      bool budget_cut = false;
      for (std::uint64_t t = 0;; ++t) {
        if (target != 0 && t == target) break;
        if (target == 0 && t >= 1 && passes() >= cfg_.max_passes) {
          budget_cut = true;
          break;
        }
        if (!inclusive) {
          for (std::size_t j = 0; j < d_; ++j) acc_[j] += x_[j];
        }
        const std::size_t i = rng_.uniform_index(n_);
        assemble_reduced_gradient(i);
        const double diff = alg == Algorithm::svrg_auto ? last_diff_sq() : 0.0;
        const double step = schedule ? schedule->next() : cfg_.eta;
        prox_step_inplace(obj_.regularizer(), x_, xi_, step);
        if (inclusive) {
          for (std::size_t j = 0; j < d_; ++j) acc_[j] += x_[j];
        }
        ++applied;
        charge_iteration();
        if (obs_) obs_->on_iterate(s, t, x_, snap_);
        if (stop_) break;
        if (alg == Algorithm::svrg_auto) {
          const bool terminate = rule.record(diff);
          if (s >= 3 && terminate) break;
        }
      }
      if (stop_) break;
      rule.end_epoch();

      // Snapshot = epoch average; svrg restarts from it, the others keep
      // the last iterate as the next starting point.
      const double inv_m = 1.0 / static_cast<double>(applied);
      for (std::size_t j = 0; j < d_; ++j) snap_[j] = acc_[j] * inv_m;
      if (alg == Algorithm::svrg) x_ = snap_;
      completed_epochs_ = s;
      trace_.total_epochs = s;

      double variance = std::numeric_limits<double>::quiet_NaN();
      if (cfg_.record_variance) {
        variance = enumerated_variance_impl(snap_, prev_snapshot_);
      }
      emit_row(objective_at(snap_), s, variance);
      if (obs_) obs_->on_snapshot(s, snap_);
      if (stop_) break;
      if (budget_cut) {
        trace_.truncated = true;
        break;
      }
    }
    if (!stop_ && completed_epochs_ < S && !trace_.truncated && passes() >= cfg_.max_passes) {
      trace_.truncated = true;
    }
    if (completed_epochs_ < S && passes() >= cfg_.max_passes) trace_.truncated = true;
  }

  // Exact enumerated variance of the reduced gradient at (x, x~).
  double enumerated_variance_impl(const std::vector<double>& x,
                                  const std::vector<double>& x_tilde) {
    std::vector<double> mu_t(d_, 0.0), grad_x(d_, 0.0), g(d_, 0.0);
    obj_.full_grad_into(x_tilde, mu_t);
    obj_.full_grad_into(x, grad_x);
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      g = mu_t;
      obj_.add_component_grad(i, x, 1.0, g);
      obj_.add_component_grad(i, x_tilde, -1.0, g);
      double s = 0.0;
      for (std::size_t j = 0; j < d_; ++j) {
        const double v = g[j] - grad_x[j];
        s += v * v;
      }
      total += s;
    }
    return total / static_cast<double>(n_);
  }

  void run_sgd_loop() {
    while (passes() < cfg_.max_passes && !stop_) {
      const std::size_t i = rng_.uniform_index(n_);
      std::fill(xi_.begin(), xi_.end(), 0.0);
      obj_.add_component_grad(i, x_, 1.0, xi_);
      prox_step_inplace(obj_.regularizer(), x_, xi_, cfg_.eta);
      ++inner_count_;
      completed_epochs_ = static_cast<std::size_t>(std::floor(passes()));
      emit_if_pass_crossed();
    }
    snap_ = x_;
  }

  void run_saga_loop() {
    const std::size_t bytes = n_ * d_ * sizeof(double);
    if (bytes > cfg_.saga_table_cap_mb * std::size_t{1024} * 1024) {
      throw std::runtime_error("saga: gradient table exceeds configured memory cap");
    }
    std::vector<double> table(n_ * d_, 0.0);
    std::vector<double> mean(d_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      obj_.add_component_grad(i, x_, 1.0, {table.data() + i * d_, d_});
      for (std::size_t j = 0; j < d_; ++j) mean[j] += table[i * d_ + j];
    }
    const double inv_n = 1.0 / static_cast<double>(n_);
    for (double& v : mean) v *= inv_n;
    charge_full_pass();  // table construction costs one pass of gradient work

    std::vector<double> gi(d_, 0.0);
    std::uint64_t since_refresh = 0;
    while (passes() < cfg_.max_passes && !stop_) {
      const std::size_t i = rng_.uniform_index(n_);
      std::fill(gi.begin(), gi.end(), 0.0);
      obj_.add_component_grad(i, x_, 1.0, gi);
      double* row = table.data() + i * d_;
      for (std::size_t j = 0; j < d_; ++j) xi_[j] = gi[j] - row[j] + mean[j];
      prox_step_inplace(obj_.regularizer(), x_, xi_, cfg_.eta);
      for (std::size_t j = 0; j < d_; ++j) {
        mean[j] += (gi[j] - row[j]) * inv_n;
        row[j] = gi[j];
      }
      ++inner_count_;
      ++since_refresh;
      completed_epochs_ = static_cast<std::size_t>(std::floor(passes()));
      if (since_refresh >= n_) {
        // Kill incremental drift in the running mean once per pass.
        std::fill(mean.begin(), mean.end(), 0.0);
        for (std::size_t i2 = 0; i2 < n_; ++i2) {
          const double* r2 = table.data() + i2 * d_;
          for (std::size_t j = 0; j < d_; ++j) mean[j] += r2[j];
        }
        for (double& v : mean) v *= inv_n;
        since_refresh = 0;
      }
      emit_if_pass_crossed();
    }
    snap_ = x_;
  }

  void finish() {
    trace_.total_passes = passes();
    if (trace_.rows.empty() || trace_.rows.back().pass < trace_.total_passes) {
      emit_row(objective_at(snap_), completed_epochs_);
    }
    trace_.final_point = Vector::dense(snap_);
  }

  const CompositeObjective& obj_;
  SolverConfig cfg_;
  IterationObserver* obs_ = nullptr;
  RandomStream rng_;
  std::size_t n_ = 0, d_ = 0;
  std::vector<double> x_, snap_, prev_snapshot_, mu_, xi_, acc_;
  std::uint64_t inner_count_ = 0;
  std::uint64_t full_pass_units_ = 0;
  std::size_t completed_epochs_ = 0;
  double emitted_floor_ = 0.0;
  double f0_ = 0.0;
  double divergence_threshold_ = 0.0;
  bool stop_ = false;
  RunTrace trace_;
};

void require_algorithm(const SolverConfig& cfg, Algorithm a, const char* name) {
  if (cfg.algorithm != a) {
    throw std::invalid_argument(std::string(name) + ": config.algorithm mismatch");
  }
}

}  // namespace

RunTrace run_solver(const CompositeObjective& obj, const Vector& x0,
                    const SolverConfig& config, IterationObserver* observer) {
  Runner r(obj, x0, config, observer);
  return r.run();
}

RunTrace run_svrg(const CompositeObjective& obj, const Vector& x0, const SolverConfig& c) {
  require_algorithm(c, Algorithm::svrg, "run_svrg");
  return run_solver(obj, x0, c);
}

RunTrace run_svrg_pp(const CompositeObjective& obj, const Vector& x0, const SolverConfig& c) {
  require_algorithm(c, Algorithm::svrg_pp, "run_svrg_pp");
  return run_solver(obj, x0, c);
}

RunTrace run_svrg_auto(const CompositeObjective& obj, const Vector& x0, const SolverConfig& c) {
  require_algorithm(c, Algorithm::svrg_auto, "run_svrg_auto");
  return run_solver(obj, x0, c);
}

RunTrace run_svrg_nc_pp(const CompositeObjective& obj, const Vector& x0, const SolverConfig& c) {
  require_algorithm(c, Algorithm::svrg_nc_pp, "run_svrg_nc_pp");
  return run_solver(obj, x0, c);
}

RunTrace run_sgd(const CompositeObjective& obj, const Vector& x0, const SolverConfig& c) {
  require_algorithm(c, Algorithm::sgd, "run_sgd");
  return run_solver(obj, x0, c);
}

RunTrace run_saga(const CompositeObjective& obj, const Vector& x0, const SolverConfig& c) {
  require_algorithm(c, Algorithm::saga, "run_saga");
  return run_solver(obj, x0, c);
}

TheoremConfig configure_from_bounds(Algorithm alg, double theta, double delta,
                                    double epsilon, double upper, double lower) {
  if (!(theta > 0.0) || !(delta > 0.0) || !(epsilon > 0.0) || !(upper > 0.0) ||
      lower < 0.0) {
    throw std::invalid_argument("configure_from_bounds: arguments must be positive");
  }
  TheoremConfig out;
  out.epochs = epsilon >= delta
                   ? 1
                   : static_cast<std::size_t>(std::ceil(std::log2(delta / epsilon)));
  if (out.epochs == 0) out.epochs = 1;
  switch (alg) {
    case Algorithm::svrg_pp: {
      out.eta = 1.0 / (7.0 * upper);
      out.m0 = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(upper * theta / delta)));
      break;
    }
    case Algorithm::svrg_nc_pp: {
      out.eta = 1.0 / (13.0 * upper);
      if (lower > 0.0) {
        out.eta = std::min(out.eta, epsilon / (312.0 * std::sqrt(2.0) * theta * upper * lower));
      }
      out.m0 = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(theta / (out.eta * delta))));
      break;
    }
    default:
      throw std::invalid_argument("configure_from_bounds: use theorem_step_svrg for svrg");
  }
  return out;
}

double theorem_step_svrg(double upper, double lower, double sigma) {
  if (!(upper > 0.0) || !(sigma > 0.0) || lower < 0.0) {
    throw std::invalid_argument("theorem_step_svrg: need L > 0, sigma > 0, l >= 0");
  }
  if (lower <= upper) {
    double eta = 1.0 / (21.0 * upper);
    if (lower > 0.0) eta = std::min(eta, sigma / (63.0 * upper * lower));
    return eta;
  }
  return sigma / (25.0 * upper * lower);
}

std::size_t theorem_epoch_length_svrg(double upper, double lower, double sigma) {
  const double eta = theorem_step_svrg(upper, lower, sigma);
  const double c = lower <= upper ? 10.0 : 4.0;
  return static_cast<std::size_t>(std::ceil(c / (sigma * eta)));
}

}  // namespace vropt
