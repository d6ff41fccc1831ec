#pragma once

// Incremental span membership for vectors over either backend.
//
// Exact: vectors are kept in semi-echelon form (each stored vector has a
// pivot at which all later vectors vanish), so membership is decided with no
// tolerance at all. Complex: vectors are kept orthonormal (two passes of
// modified Gram-Schmidt); a candidate is independent when its residual,
// relative to its own norm, exceeds rel_tol and its absolute residual
// exceeds abs_tol.

#include <cmath>
#include <cstddef>
#include <vector>

#include "dsq/scalar.hpp"

namespace dsq {

template <class S>
class SpanReducer {
 public:
  explicit SpanReducer(std::size_t length, double rel_tol = 1e-8, double abs_tol = 0.0)
      : length_(length), tol_(rel_tol), abs_tol_(abs_tol) {}

  std::size_t length() const { return length_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<std::vector<S>>& basis() const { return basis_; }

  /// Reduces v against the stored span. Returns true (and stores the reduced
  /// vector) when v is independent.
  bool insert(std::vector<S> v) {
    long pivot = reduce(v);
    if (pivot < 0) return false;
    basis_.push_back(std::move(v));
    pivots_.push_back(static_cast<std::size_t>(pivot));
    return true;
  }

  /// True when v lies in the stored span.
  bool contains(std::vector<S> v) const { return reduce(v) < 0; }

 private:
  // Reduces v in place. Returns -1 when nothing remains; otherwise the
  // residual is normalised for storage and its pivot (exact) or 0 (complex)
  // is returned.
  long reduce(std::vector<S>& v) const {
    if constexpr (ScalarTraits<S>::exact) {
      for (std::size_t b = 0; b < basis_.size(); ++b) {
        const S& c = v[pivots_[b]];
        if (c.is_zero()) continue;
        S f = c;
        const auto& bv = basis_[b];
        for (std::size_t i = 0; i < length_; ++i)
          if (!bv[i].is_zero()) v[i] -= f * bv[i];
      }
      for (std::size_t i = 0; i < length_; ++i) {
        if (v[i].is_zero()) continue;
        S inv = S(1) / v[i];
        for (auto& x : v) x *= inv;
        return static_cast<long>(i);
      }
      return -1;
    } else {
      double n0 = norm(v);
      if (n0 == 0.0) return -1;
      for (auto& x : v) x /= n0;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& bv : basis_) {
          S c(0);
          for (std::size_t i = 0; i < length_; ++i) c += std::conj(bv[i]) * v[i];
          for (std::size_t i = 0; i < length_; ++i) v[i] -= c * bv[i];
        }
      }
      double r = norm(v);
      if (r <= tol_ || r * n0 <= abs_tol_) return -1;
      for (auto& x : v) x /= r;
      return 0;
    }
  }

  static double norm(const std::vector<S>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(ScalarTraits<S>::to_complex(x));
    return std::sqrt(s);
  }

  std::size_t length_;
  double tol_;
  double abs_tol_;
  std::vector<std::vector<S>> basis_;
  std::vector<std::size_t> pivots_;
};

}  // namespace dsq
