#pragma once

#include <cstdint>
#include <vector>

#include "vropt/vector.hpp"

namespace vropt {

// Immutable collection of n feature vectors sharing one dimension, with one
// real label per example.
class Dataset {
 public:
  Dataset() = default;
  static Dataset create(std::vector<Vector> examples, std::vector<double> labels);

  std::size_t n() const { return examples_.size(); }
  std::size_t dim() const { return dim_; }
  const Vector& example(std::size_t i) const { return examples_[i]; }
  double label(std::size_t i) const { return labels_[i]; }
  const std::vector<Vector>& examples() const { return examples_; }
  const std::vector<double>& labels() const { return labels_; }

 private:
  std::vector<Vector> examples_;
  std::vector<double> labels_;
  std::size_t dim_ = 0;
};

// Content hash over dimensions, labels and stored coordinates (FNV-1a over
// little-endian encodings; platform-stable).
std::uint64_t content_hash(const Dataset& ds);

// Divides every example by the mean Euclidean norm c = (1/n) sum_i ||a_i||,
// so the rescaled dataset has mean norm 1. Labels are untouched.
Dataset normalize_by_average_norm(const Dataset& ds);

double average_norm(const Dataset& ds);

}  // namespace vropt
