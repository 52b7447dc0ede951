#include "vropt/vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vropt {

namespace {

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
    }
  }
}

void check_same_dim(const Vector& x, const Vector& y, const char* op) {
  if (x.dim() != y.dim()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(x.dim()) + " vs " +
                                std::to_string(y.dim()) + ")");
  }
}

}  // namespace

Vector::Vector(std::size_t dim) : dim_(dim), sparse_(false), val_(dim, 0.0) {}

Vector Vector::dense(std::vector<double> values) {
  check_finite(values, "Vector::dense");
  Vector v;
  v.dim_ = values.size();
  v.sparse_ = false;
  v.val_ = std::move(values);
  return v;
}

Vector Vector::sparse(std::size_t dim, std::vector<std::size_t> indices,
                      std::vector<double> values) {
  if (indices.size() != values.size()) {
    throw std::invalid_argument("Vector::sparse: index/value length mismatch");
  }
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= dim) {
      throw std::invalid_argument("Vector::sparse: index out of range");
    }
    if (k > 0 && indices[k] <= indices[k - 1]) {
      throw std::invalid_argument(
          "Vector::sparse: indices must be strictly increasing");
    }
  }
  check_finite(values, "Vector::sparse");
  Vector v;
  v.dim_ = dim;
  v.sparse_ = true;
  v.idx_ = std::move(indices);
  v.val_ = std::move(values);
  return v;
}

Vector Vector::unit(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw std::invalid_argument("Vector::unit: axis out of range");
  Vector v(dim);
  v.val_[axis] = 1.0;
  return v;
}

double Vector::coeff(std::size_t j) const {
  if (j >= dim_) throw std::out_of_range("Vector::coeff: index out of range");
  if (!sparse_) return val_[j];
  auto it = std::lower_bound(idx_.begin(), idx_.end(), j);
  if (it != idx_.end() && *it == j) {
    return val_[static_cast<std::size_t>(it - idx_.begin())];
  }
  return 0.0;
}

double& Vector::operator[](std::size_t j) {
  if (sparse_) throw std::logic_error("Vector: mutable access on sparse storage");
  if (j >= dim_) throw std::out_of_range("Vector: index out of range");
  return val_[j];
}

std::span<double> Vector::data() {
  if (sparse_) throw std::logic_error("Vector::data: sparse storage");
  return val_;
}

std::span<const double> Vector::data() const {
  if (sparse_) throw std::logic_error("Vector::data: sparse storage");
  return val_;
}

Vector Vector::to_dense() const { return Vector::dense(to_dense_values()); }

std::vector<double> Vector::to_dense_values() const {
  if (!sparse_) return val_;
  std::vector<double> out(dim_, 0.0);
  for (std::size_t k = 0; k < idx_.size(); ++k) out[idx_[k]] = val_[k];
  return out;
}

void Vector::set_zero() {
  if (sparse_) throw std::logic_error("Vector::set_zero: sparse storage");
  std::fill(val_.begin(), val_.end(), 0.0);
}

void Vector::add_scaled(double alpha, const Vector& x) {
  if (sparse_) throw std::logic_error("Vector::add_scaled: sparse target");
  check_same_dim(*this, x, "add_scaled");
  add_scaled_into(alpha, x, val_);
}

void Vector::scale(double alpha) {
  for (double& v : val_) v *= alpha;
}

bool Vector::all_finite() const {
  for (double v : val_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool operator==(const Vector& a, const Vector& b) {
  if (a.dim_ != b.dim_) return false;
  if (a.sparse_ == b.sparse_) return a.idx_ == b.idx_ && a.val_ == b.val_;
  return a.to_dense_values() == b.to_dense_values();
}

double dot(const Vector& x, const Vector& y) {
  check_same_dim(x, y, "dot");
  if (!x.is_sparse() && !y.is_sparse()) {
    auto xs = x.stored(), ys = y.stored();
    double s = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) s += xs[j] * ys[j];
    return s;
  }
  if (x.is_sparse() && y.is_sparse()) {
    auto xi = x.indices(), yi = y.indices();
    auto xv = x.stored(), yv = y.stored();
    double s = 0.0;
    std::size_t a = 0, b = 0;
    while (a < xi.size() && b < yi.size()) {
      if (xi[a] == yi[b]) {
        s += xv[a] * yv[b];
        ++a;
        ++b;
      } else if (xi[a] < yi[b]) {
        ++a;
      } else {
        ++b;
      }
    }
    return s;
  }
  const Vector& sp = x.is_sparse() ? x : y;
  const Vector& de = x.is_sparse() ? y : x;
  auto si = sp.indices();
  auto sv = sp.stored();
  auto dv = de.stored();
  double s = 0.0;
  for (std::size_t k = 0; k < si.size(); ++k) s += sv[k] * dv[si[k]];
  return s;
}

double dot(const Vector& x, std::span<const double> y) {
  if (x.dim() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
  if (x.is_sparse()) {
    auto si = x.indices();
    auto sv = x.stored();
    double s = 0.0;
    for (std::size_t k = 0; k < si.size(); ++k) s += sv[k] * y[si[k]];
    return s;
  }
  auto xv = x.stored();
  double s = 0.0;
  for (std::size_t j = 0; j < xv.size(); ++j) s += xv[j] * y[j];
  return s;
}

Vector axpy(double alpha, const Vector& x, const Vector& y) {
  check_same_dim(x, y, "axpy");
  if (!std::isfinite(alpha)) throw std::invalid_argument("axpy: non-finite scalar");
  if (x.is_sparse() && y.is_sparse()) {
    auto xi = x.indices(), yi = y.indices();
    auto xv = x.stored(), yv = y.stored();
    std::vector<std::size_t> oi;
    std::vector<double> ov;
    oi.reserve(xi.size() + yi.size());
    ov.reserve(xi.size() + yi.size());
    std::size_t a = 0, b = 0;
    while (a < xi.size() || b < yi.size()) {
      if (b >= yi.size() || (a < xi.size() && xi[a] < yi[b])) {
        oi.push_back(xi[a]);
        ov.push_back(alpha * xv[a]);
        ++a;
      } else if (a >= xi.size() || yi[b] < xi[a]) {
        oi.push_back(yi[b]);
        ov.push_back(yv[b]);
        ++b;
      } else {
        oi.push_back(xi[a]);
        ov.push_back(yv[b] + alpha * xv[a]);
        ++a;
        ++b;
      }
    }
    return Vector::sparse(x.dim(), std::move(oi), std::move(ov));
  }
  std::vector<double> out = y.to_dense_values();
  add_scaled_into(alpha, x, out);
  check_finite(out, "axpy");
  return Vector::dense(std::move(out));
}

void add_scaled_into(double alpha, const Vector& x, std::span<double> acc) {
  if (x.dim() != acc.size()) {
    throw std::invalid_argument("add_scaled_into: dimension mismatch");
  }
  if (x.is_sparse()) {
    auto si = x.indices();
    auto sv = x.stored();
    for (std::size_t k = 0; k < si.size(); ++k) acc[si[k]] += alpha * sv[k];
  } else {
    auto xv = x.stored();
    for (std::size_t j = 0; j < xv.size(); ++j) acc[j] += alpha * xv[j];
  }
}

double norm2_sq(const Vector& x) {
  double s = 0.0;
  for (double v : x.stored()) s += v * v;
  return s;
}

double norm2(const Vector& x) { return std::sqrt(norm2_sq(x)); }

double norm2_sq(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace vropt
