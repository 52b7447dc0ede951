#include "vropt/objective.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vropt {

namespace {

double sigmoid(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

// log(1 + exp(-z)) without overflow for large |z|.
double log1p_exp_neg(double z) {
  if (z >= 0.0) return std::log1p(std::exp(-z));
  return -z + std::log1p(std::exp(z));
}

}  // namespace

std::string to_string(LossKind k) {
  switch (k) {
    case LossKind::lasso: return "lasso";
    case LossKind::ridge: return "ridge";
    case LossKind::logistic: return "logistic";
    case LossKind::quadratic: return "quadratic";
  }
  return "?";
}

LossKind loss_kind_from_string(const std::string& s) {
  if (s == "lasso") return LossKind::lasso;
  if (s == "ridge") return LossKind::ridge;
  if (s == "logistic") return LossKind::logistic;
  if (s == "quadratic") return LossKind::quadratic;
  throw std::invalid_argument("unknown loss kind: " + s);
}

Regularizer Regularizer::l1(double w) {
  if (w < 0.0 || !std::isfinite(w)) throw std::invalid_argument("l1 weight must be >= 0");
  return {Kind::l1, w};
}

Regularizer Regularizer::l2(double w) {
  if (w < 0.0 || !std::isfinite(w)) throw std::invalid_argument("l2 weight must be >= 0");
  return {Kind::l2, w};
}

double Regularizer::value(std::span<const double> x) const {
  switch (kind) {
    case Kind::none: return 0.0;
    case Kind::l1: {
      double s = 0.0;
      for (double v : x) s += std::abs(v);
      return weight * s;
    }
    case Kind::l2: {
      double s = 0.0;
      for (double v : x) s += v * v;
      return 0.5 * weight * s;
    }
  }
  return 0.0;
}

double Regularizer::value(const Vector& x) const {
  if (!x.is_sparse()) return value(x.data());
  switch (kind) {
    case Kind::none: return 0.0;
    case Kind::l1: {
      double s = 0.0;
      for (double v : x.stored()) s += std::abs(v);
      return weight * s;
    }
    case Kind::l2: return 0.5 * weight * norm2_sq(x);
  }
  return 0.0;
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

void prox_step_inplace(const Regularizer& reg, std::span<double> x,
                       std::span<const double> xi, double eta) {
  if (eta <= 0.0 || !std::isfinite(eta)) {
    throw std::invalid_argument("prox_step: eta must be > 0");
  }
  if (x.size() != xi.size()) throw std::invalid_argument("prox_step: dimension mismatch");
  switch (reg.kind) {
    case Regularizer::Kind::none:
      for (std::size_t j = 0; j < x.size(); ++j) x[j] -= eta * xi[j];
      break;
    case Regularizer::Kind::l1: {
      const double t = eta * reg.weight;
      for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] = soft_threshold(x[j] - eta * xi[j], t);
      }
      break;
    }
    case Regularizer::Kind::l2: {
      const double c = 1.0 / (1.0 + eta * reg.weight);
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = c * (x[j] - eta * xi[j]);
      break;
    }
  }
}

Vector prox_step(const Regularizer& reg, const Vector& x, const Vector& xi, double eta) {
  if (x.dim() != xi.dim()) throw std::invalid_argument("prox_step: dimension mismatch");
  std::vector<double> out = x.to_dense_values();
  const std::vector<double> g = xi.to_dense_values();
  prox_step_inplace(reg, out, g, eta);
  return Vector::dense(std::move(out));
}

CompositeObjective CompositeObjective::erm(LossKind kind, Dataset data, double reg_weight) {
  if (kind == LossKind::quadratic) {
    throw std::invalid_argument("erm: use CompositeObjective::quadratic");
  }
  if (reg_weight < 0.0 || !std::isfinite(reg_weight)) {
    throw std::invalid_argument("erm: regularizer weight must be >= 0");
  }
  CompositeObjective obj;
  obj.loss_ = kind;
  obj.data_ = std::move(data);
  switch (kind) {
    case LossKind::lasso:
    case LossKind::logistic:
      obj.reg_ = reg_weight > 0.0 ? Regularizer::l1(reg_weight) : Regularizer::none();
      break;
    case LossKind::ridge:
      // The quadratic penalty lives inside each f_i; Psi stays zero.
      obj.reg_ = Regularizer::none();
      obj.ridge_weight_ = reg_weight;
      break;
    default: break;
  }
  obj.finalize();
  return obj;
}

CompositeObjective CompositeObjective::quadratic(Dataset a_vectors,
                                                 std::vector<std::vector<double>> diagonals,
                                                 std::vector<double> linear) {
  const std::size_t n = a_vectors.n();
  const std::size_t d = a_vectors.dim();
  if (diagonals.size() != n) {
    throw std::invalid_argument("quadratic: need one diagonal per component");
  }
  for (const auto& di : diagonals) {
    if (di.size() != d) throw std::invalid_argument("quadratic: diagonal length != d");
  }
  if (linear.size() != d) throw std::invalid_argument("quadratic: linear term length != d");
  CompositeObjective obj;
  obj.loss_ = LossKind::quadratic;
  obj.data_ = std::move(a_vectors);
  obj.diagonals_ = std::move(diagonals);
  obj.linear_ = std::move(linear);
  obj.reg_ = Regularizer::none();
  obj.finalize();
  return obj;
}

void CompositeObjective::finalize() {
  sq_norms_.resize(data_.n());
  for (std::size_t i = 0; i < data_.n(); ++i) sq_norms_[i] = norm2_sq(data_.example(i));
  data_hash_ = content_hash(data_);
}

std::string CompositeObjective::identity() const {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s|reg=%.17g|ridge=%.17g|hash=%016llx",
                to_string(loss_).c_str(), reg_.weight, ridge_weight_,
                static_cast<unsigned long long>(data_hash_));
  return buf;
}

double CompositeObjective::component_value(std::size_t i, std::span<const double> x) const {
  if (i >= n()) throw std::out_of_range("component_value: index out of range");
  const Vector& a = data_.example(i);
  switch (loss_) {
    case LossKind::lasso: {
      const double r = dot(a, x) - data_.label(i);
      return 0.5 * r * r;
    }
    case LossKind::ridge: {
      const double r = dot(a, x) - data_.label(i);
      return 0.5 * r * r + 0.5 * ridge_weight_ * norm2_sq(x);
    }
    case LossKind::logistic:
      return log1p_exp_neg(data_.label(i) * dot(a, x));
    case LossKind::quadratic: {
      const double ax = dot(a, x);
      double q = ax * ax;
      const auto& di = diagonals_[i];
      double lin = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        q += di[j] * x[j] * x[j];
        lin += linear_[j] * x[j];
      }
      return 0.5 * q + lin;
    }
  }
  return 0.0;
}

void CompositeObjective::add_component_grad(std::size_t i, std::span<const double> x,
                                            double coef, std::span<double> acc) const {
  if (i >= n()) throw std::out_of_range("component_grad: index out of range");
  const Vector& a = data_.example(i);
  switch (loss_) {
    case LossKind::lasso: {
      const double r = dot(a, x) - data_.label(i);
      add_scaled_into(coef * r, a, acc);
      break;
    }
    case LossKind::ridge: {
      const double r = dot(a, x) - data_.label(i);
      add_scaled_into(coef * r, a, acc);
      const double w = coef * ridge_weight_;
      for (std::size_t j = 0; j < x.size(); ++j) acc[j] += w * x[j];
      break;
    }
    case LossKind::logistic: {
      const double li = data_.label(i);
      const double c = -li * sigmoid(-li * dot(a, x));
      add_scaled_into(coef * c, a, acc);
      break;
    }
    case LossKind::quadratic: {
      const double ax = dot(a, x);
      add_scaled_into(coef * ax, a, acc);
      const auto& di = diagonals_[i];
      for (std::size_t j = 0; j < x.size(); ++j) {
        acc[j] += coef * (di[j] * x[j] + linear_[j]);
      }
      break;
    }
  }
}

Vector CompositeObjective::component_grad(std::size_t i, const Vector& x) const {
  if (x.dim() != dim()) throw std::invalid_argument("component_grad: dimension mismatch");
  const std::vector<double> xd = x.to_dense_values();
  std::vector<double> g(dim(), 0.0);
  add_component_grad(i, xd, 1.0, g);
  return Vector::dense(std::move(g));
}

void CompositeObjective::full_grad_into(std::span<const double> x,
                                        std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < n(); ++i) add_component_grad(i, x, 1.0, out);
  const double inv_n = 1.0 / static_cast<double>(n());
  for (double& v : out) v *= inv_n;
}

Vector CompositeObjective::full_grad(const Vector& x) const {
  if (x.dim() != dim()) throw std::invalid_argument("full_grad: dimension mismatch");
  const std::vector<double> xd = x.to_dense_values();
  std::vector<double> g(dim(), 0.0);
  full_grad_into(xd, g);
  return Vector::dense(std::move(g));
}

double CompositeObjective::smooth_value(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < n(); ++i) s += component_value(i, x);
  return s / static_cast<double>(n());
}

double CompositeObjective::value(std::span<const double> x) const {
  return smooth_value(x) + reg_.value(x);
}

double CompositeObjective::objective_value(const Vector& x) const {
  if (x.dim() != dim()) throw std::invalid_argument("objective_value: dimension mismatch");
  const std::vector<double> xd = x.to_dense_values();
  return value(xd);
}

SmoothnessBounds CompositeObjective::smoothness_bound() const {
  if (smoothness_override_) return *smoothness_override_;
  SmoothnessBounds b{0.0, 0.0};
  switch (loss_) {
    case LossKind::lasso:
      for (double s : sq_norms_) b.upper = std::max(b.upper, s);
      break;
    case LossKind::ridge:
      for (double s : sq_norms_) b.upper = std::max(b.upper, s + ridge_weight_);
      break;
    case LossKind::logistic:
      for (double s : sq_norms_) b.upper = std::max(b.upper, 0.25 * s);
      break;
    case LossKind::quadratic:
      // Hessian_i = a_i a_i^T + D_i: eigenvalues within
      // [min_j D_ij, ||a_i||^2 + max_j D_ij].
      for (std::size_t i = 0; i < n(); ++i) {
        const auto& di = diagonals_[i];
        double dmax = di.empty() ? 0.0 : *std::max_element(di.begin(), di.end());
        double dmin = di.empty() ? 0.0 : *std::min_element(di.begin(), di.end());
        b.upper = std::max(b.upper, sq_norms_[i] + dmax);
        b.lower = std::max(b.lower, std::max(0.0, -dmin));
      }
      break;
  }
  return b;
}

double CompositeObjective::strong_convexity() const {
  if (sigma_override_) return *sigma_override_;
  switch (loss_) {
    case LossKind::lasso:
    case LossKind::logistic:
      return 0.0;
    case LossKind::ridge:
      return ridge_weight_;
    case LossKind::quadratic: {
      if (!sigma_cache_) {
        sigma_cache_ = min_eigenvalue_sym(gram_matrix(data_), dim());
      }
      return *sigma_cache_;
    }
  }
  return 0.0;
}

std::vector<double> gram_matrix(const Dataset& ds) {
  const std::size_t d = ds.dim();
  if (d > kEigenDimCap) {
    throw std::runtime_error("gram_matrix: dimension above exact-path cap");
  }
  std::vector<double> m(d * d, 0.0);
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const std::vector<double> a = ds.example(i).to_dense_values();
    for (std::size_t r = 0; r < d; ++r) {
      if (a[r] == 0.0) continue;
      for (std::size_t c = 0; c < d; ++c) m[r * d + c] += a[r] * a[c];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(ds.n());
  for (double& v : m) v *= inv_n;
  return m;
}

double min_eigenvalue_sym(const std::vector<double>& m, std::size_t d) {
  if (m.size() != d * d) throw std::invalid_argument("min_eigenvalue_sym: bad size");
  if (d > kEigenDimCap) {
    throw std::runtime_error("min_eigenvalue_sym: dimension above exact-path cap");
  }
  Eigen::MatrixXd a(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) a(r, c) = m[r * d + c];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("min_eigenvalue_sym: eigensolve failed");
  }
  return es.eigenvalues().minCoeff();
}

}  // namespace vropt
