#include "vropt/dataset.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace vropt {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_u64(std::uint64_t& h, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xffULL;
    h *= kFnvPrime;
  }
}

void fnv_f64(std::uint64_t& h, double v) { fnv_u64(h, std::bit_cast<std::uint64_t>(v)); }

}  // namespace

Dataset Dataset::create(std::vector<Vector> examples, std::vector<double> labels) {
  if (examples.empty()) throw std::invalid_argument("Dataset: need n >= 1 examples");
  if (examples.size() != labels.size()) {
    throw std::invalid_argument("Dataset: examples/labels length mismatch");
  }
  const std::size_t d = examples.front().dim();
  for (const Vector& a : examples) {
    if (a.dim() != d) throw std::invalid_argument("Dataset: mixed dimensions");
  }
  for (double l : labels) {
    if (!std::isfinite(l)) throw std::invalid_argument("Dataset: non-finite label");
  }
  Dataset ds;
  ds.examples_ = std::move(examples);
  ds.labels_ = std::move(labels);
  ds.dim_ = d;
  return ds;
}

std::uint64_t content_hash(const Dataset& ds) {
  std::uint64_t h = kFnvOffset;
  fnv_u64(h, ds.n());
  fnv_u64(h, ds.dim());
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const Vector& a = ds.example(i);
    fnv_u64(h, a.is_sparse() ? 1 : 0);
    if (a.is_sparse()) {
      for (std::size_t k : a.indices()) fnv_u64(h, k);
    }
    for (double v : a.stored()) fnv_f64(h, v);
    fnv_f64(h, ds.label(i));
  }
  return h;
}

double average_norm(const Dataset& ds) {
  double s = 0.0;
  for (std::size_t i = 0; i < ds.n(); ++i) s += norm2(ds.example(i));
  return s / static_cast<double>(ds.n());
}

Dataset normalize_by_average_norm(const Dataset& ds) {
  const double c = average_norm(ds);
  if (c == 0.0) throw std::invalid_argument("normalize: all examples are zero");
  std::vector<Vector> scaled;
  scaled.reserve(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i) {
    Vector a = ds.example(i);
    a.scale(1.0 / c);
    scaled.push_back(std::move(a));
  }
  return Dataset::create(std::move(scaled), ds.labels());
}

}  // namespace vropt
