#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vropt/dataset.hpp"
#include "vropt/vector.hpp"

namespace vropt {

enum class LossKind { lasso, ridge, logistic, quadratic };

std::string to_string(LossKind k);
LossKind loss_kind_from_string(const std::string& s);

// Simple separable proximal term.
struct Regularizer {
  enum class Kind { none, l1, l2 };
  Kind kind = Kind::none;
  double weight = 0.0;

  static Regularizer none() { return {Kind::none, 0.0}; }
  static Regularizer l1(double w);
  static Regularizer l2(double w);

  double value(std::span<const double> x) const;
  double value(const Vector& x) const;
};

// Closed-form proximal update: argmin_y { (1/(2 eta)) ||x - eta xi - y||^2 + Psi(y) }
// written as the composite step from point x with gradient estimate xi.
//   none: x - eta xi
//   l1:   coordinatewise soft-threshold of (x - eta xi) at eta * weight
//   l2:   (x - eta xi) / (1 + eta * weight)
Vector prox_step(const Regularizer& reg, const Vector& x, const Vector& xi, double eta);
void prox_step_inplace(const Regularizer& reg, std::span<double> x,
                       std::span<const double> xi, double eta);
double soft_threshold(double v, double t);

struct SmoothnessBounds {
  double upper = 0.0;  // L: componentwise upper smoothness
  double lower = 0.0;  // l: componentwise lower smoothness (0 for convex f_i)
};

// F(x) = (1/n) sum_i f_i(x) + Psi(x) for the supported loss families:
//   lasso:     f_i = 0.5 (<a_i,x> - l_i)^2,                    Psi = w ||x||_1
//   ridge:     f_i = 0.5 (<a_i,x> - l_i)^2 + (w/2) ||x||^2,    Psi = 0
//   logistic:  f_i = log(1 + exp(-l_i <a_i,x>)),               Psi = w ||x||_1
//   quadratic: f_i = 0.5 x^T (a_i a_i^T + D_i) x + <b, x>,     Psi = 0
// Quadratic instances carry per-component diagonal perturbations D_i that sum
// to zero, so f(x) = 0.5 x^T A x + <b, x> with A = (1/n) sum a_i a_i^T.
class CompositeObjective {
 public:
  static CompositeObjective erm(LossKind kind, Dataset data, double reg_weight);
  static CompositeObjective quadratic(Dataset a_vectors,
                                      std::vector<std::vector<double>> diagonals,
                                      std::vector<double> linear);

  std::size_t n() const { return data_.n(); }
  std::size_t dim() const { return data_.dim(); }
  LossKind loss() const { return loss_; }
  const Regularizer& regularizer() const { return reg_; }
  const Dataset& data() const { return data_; }
  const std::vector<double>& linear_term() const { return linear_; }
  const std::vector<std::vector<double>>& diagonals() const { return diagonals_; }
  std::uint64_t data_hash() const { return data_hash_; }
  std::string identity() const;  // stable key for reference caching

  double component_value(std::size_t i, std::span<const double> x) const;
  // acc += coef * grad f_i(x)
  void add_component_grad(std::size_t i, std::span<const double> x, double coef,
                          std::span<double> acc) const;
  Vector component_grad(std::size_t i, const Vector& x) const;

  // (1/n) sum_i grad f_i(x), accumulated in ascending component order.
  Vector full_grad(const Vector& x) const;
  void full_grad_into(std::span<const double> x, std::span<double> out) const;

  double smooth_value(std::span<const double> x) const;  // (1/n) sum f_i
  double value(std::span<const double> x) const;         // F(x)
  double objective_value(const Vector& x) const;

  // Conservative per-component maxima; all theorem step lengths use these.
  SmoothnessBounds smoothness_bound() const;
  // ridge -> reg weight; quadratic -> lambda_min(A) by dense eigensolve
  // (dimension capped at 2000); lasso/logistic -> 0.
  double strong_convexity() const;

  // Manual overrides for experiments where tighter constants are known.
  void override_smoothness(SmoothnessBounds b) { smoothness_override_ = b; }
  void override_strong_convexity(double sigma) { sigma_override_ = sigma; }

 private:
  CompositeObjective() = default;
  void finalize();

  LossKind loss_ = LossKind::lasso;
  Dataset data_;
  Regularizer reg_;
  double ridge_weight_ = 0.0;
  std::vector<std::vector<double>> diagonals_;  // quadratic only, n x d
  std::vector<double> linear_;                  // quadratic only, length d
  std::vector<double> sq_norms_;                // ||a_i||^2 cache
  std::uint64_t data_hash_ = 0;
  std::optional<SmoothnessBounds> smoothness_override_;
  std::optional<double> sigma_override_;
  mutable std::optional<double> sigma_cache_;
};

inline constexpr std::size_t kEigenDimCap = 2000;

// Dense d x d matrix A = (1/n) sum_i a_i a_i^T in row-major order.
std::vector<double> gram_matrix(const Dataset& ds);
// Smallest eigenvalue of a symmetric row-major matrix (dense eigensolve).
double min_eigenvalue_sym(const std::vector<double>& m, std::size_t d);

}  // namespace vropt
