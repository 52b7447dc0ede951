#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vropt {

// Real vector of fixed dimension, stored dense or sparse. Sparse storage
// keeps (index, value) pairs with strictly increasing 0-based indices, all
// below the dimension. Construction validates ordering and finiteness.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim);  // dense zeros

  static Vector dense(std::vector<double> values);
  static Vector sparse(std::size_t dim, std::vector<std::size_t> indices,
                       std::vector<double> values);
  static Vector unit(std::size_t dim, std::size_t axis);

  std::size_t dim() const { return dim_; }
  bool is_sparse() const { return sparse_; }
  std::size_t stored_count() const { return val_.size(); }

  // Random access; O(1) dense, O(log nnz) sparse.
  double coeff(std::size_t j) const;

  std::span<const std::size_t> indices() const { return idx_; }
  std::span<const double> stored() const { return val_; }

  // Mutable access is dense-only and throws on sparse storage.
  double& operator[](std::size_t j);
  double operator[](std::size_t j) const { return coeff(j); }
  std::span<double> data();
  std::span<const double> data() const;

  Vector to_dense() const;
  std::vector<double> to_dense_values() const;

  // In-place dense helpers used by solver inner loops. `this` must be dense.
  void set_zero();
  void add_scaled(double alpha, const Vector& x);  // this += alpha * x
  void scale(double alpha);

  bool all_finite() const;

  friend bool operator==(const Vector& a, const Vector& b);

 private:
  std::size_t dim_ = 0;
  bool sparse_ = false;
  std::vector<double> val_;         // dense values, or sparse stored values
  std::vector<std::size_t> idx_;    // sparse indices; empty when dense
};

double dot(const Vector& x, const Vector& y);
Vector axpy(double alpha, const Vector& x, const Vector& y);  // y + alpha * x
double norm2_sq(const Vector& x);
double norm2(const Vector& x);

// Span helpers for solver hot paths (dense iterates).
double dot(const Vector& x, std::span<const double> y);
void add_scaled_into(double alpha, const Vector& x, std::span<double> acc);
double norm2_sq(std::span<const double> x);

}  // namespace vropt
