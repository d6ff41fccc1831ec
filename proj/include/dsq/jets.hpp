#pragma once

// Truncated matrix power series.
//
//   JetMatrix      g(z) = sum_{i<k} g_i z^i            (group / Lie-algebra side)
//   PrincipalPart  B    = sum_{i<k} B_i z^{-i-1} dz    (dual side)
//   ConnectionJet  A    = sum_{i<=N} A_i z^{i-k} dz    (connection germ)
//
// The residue-trace pairing  <X, B> = res tr(X B) = sum_i tr(X_i B_i)
// identifies principal parts with the dual of jets of the same precision.
// A PrincipalPart tagged Polar lives in the dual of the unipotent jets
// (g_0 = 1): its slot 0 is never read and always written as zero.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dsq/matrix.hpp"

namespace dsq {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DepthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class S>
struct JetMatrix {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<Matrix<S>> coeffs;  // exactly k entries

  JetMatrix() = default;
  JetMatrix(std::size_t n_, std::size_t k_) : n(n_), k(k_), coeffs(k_, Matrix<S>(n_, n_)) {
    if (k_ == 0) throw DimensionError("jet precision must be positive");
  }

  static JetMatrix identity(std::size_t n, std::size_t k) {
    JetMatrix j(n, k);
    j.coeffs[0] = Matrix<S>::identity(n);
    return j;
  }
  static JetMatrix constant(const Matrix<S>& m, std::size_t k) {
    JetMatrix j(m.rows(), k);
    j.coeffs[0] = m;
    return j;
  }

  bool is_unipotent(double tol = 0.0) const {
    return (coeffs[0] - Matrix<S>::identity(n)).is_zero(tol);
  }

  double norm() const {
    double s = 0.0;
    for (const auto& c : coeffs) s += c.norm() * c.norm();
    return std::sqrt(s);
  }

  template <class T>
  JetMatrix<T> cast() const {
    JetMatrix<T> out(n, k);
    for (std::size_t i = 0; i < k; ++i) out.coeffs[i] = coeffs[i].template cast<T>();
    return out;
  }
};

enum class DualTag { Full, Polar };

template <class S>
struct PrincipalPart {
  std::size_t n = 0;
  std::size_t k = 0;
  DualTag tag = DualTag::Full;
  std::vector<Matrix<S>> coeffs;  // slot i multiplies z^{-i-1} dz

  PrincipalPart() = default;
  PrincipalPart(std::size_t n_, std::size_t k_, DualTag t = DualTag::Full)
      : n(n_), k(k_), tag(t), coeffs(k_, Matrix<S>(n_, n_)) {
    if (k_ == 0) throw DimensionError("principal part precision must be positive");
  }

  std::size_t first_slot() const { return tag == DualTag::Polar ? 1 : 0; }

  double norm() const {
    double s = 0.0;
    for (std::size_t i = first_slot(); i < k; ++i) s += coeffs[i].norm() * coeffs[i].norm();
    return std::sqrt(s);
  }

  template <class T>
  PrincipalPart<T> cast() const {
    PrincipalPart<T> out(n, k, tag);
    for (std::size_t i = 0; i < k; ++i) out.coeffs[i] = coeffs[i].template cast<T>();
    return out;
  }
};

template <class S>
struct ConnectionJet {
  std::size_t n = 0;
  std::size_t k = 0;              // pole order
  std::vector<Matrix<S>> coeffs;  // A_0 .. A_N, A_i multiplies z^{i-k} dz

  ConnectionJet() = default;
  ConnectionJet(std::size_t n_, std::size_t k_, std::size_t depth)
      : n(n_), k(k_), coeffs(depth + 1, Matrix<S>(n_, n_)) {
    if (depth + 1 < k_) throw DepthError("connection jet depth must be at least k-1");
  }

  std::size_t depth() const { return coeffs.size() - 1; }

  template <class T>
  ConnectionJet<T> cast() const {
    ConnectionJet<T> out(n, k, depth());
    for (std::size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] = coeffs[i].template cast<T>();
    return out;
  }
};

namespace detail {
inline void require(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}
}  // namespace detail

/// Truncated product; the precision of the result is min(a.k, b.k).
template <class S>
JetMatrix<S> jet_mul(const JetMatrix<S>& a, const JetMatrix<S>& b) {
  detail::require(a.n == b.n, "jet_mul: size mismatch");
  std::size_t k = std::min(a.k, b.k);
  JetMatrix<S> out(a.n, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; i + j < k; ++j) out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  return out;
}

template <class S>
JetMatrix<S> jet_add(const JetMatrix<S>& a, const JetMatrix<S>& b) {
  detail::require(a.n == b.n && a.k == b.k, "jet_add: shape mismatch");
  JetMatrix<S> out = a;
  for (std::size_t i = 0; i < a.k; ++i) out.coeffs[i] += b.coeffs[i];
  return out;
}

template <class S>
JetMatrix<S> jet_inv(const JetMatrix<S>& a) {
  Matrix<S> g0inv;
  try {
    g0inv = inverse(a.coeffs[0]);
  } catch (const std::domain_error&) {
    throw std::domain_error("jet_inv: constant term is singular");
  }
  JetMatrix<S> h(a.n, a.k);
  h.coeffs[0] = g0inv;
  for (std::size_t m = 1; m < a.k; ++m) {
    Matrix<S> acc(a.n, a.n);
    for (std::size_t j = 1; j <= m; ++j) acc += a.coeffs[j] * h.coeffs[m - j];
    h.coeffs[m] = -(g0inv * acc);
  }
  return h;
}

/// exp(z^degree X) truncated at z^k.
template <class S>
JetMatrix<S> jet_exp(const Matrix<S>& x, std::size_t degree, std::size_t k) {
  detail::require(degree >= 1, "jet_exp: degree must be >= 1");
  detail::require(x.rows() == x.cols(), "jet_exp: matrix must be square");
  JetMatrix<S> out = JetMatrix<S>::identity(x.rows(), k);
  Matrix<S> term = Matrix<S>::identity(x.rows());
  for (std::size_t m = 1; m * degree < k; ++m) {
    term = term * x;
    term *= S(1) / S(static_cast<long>(m));
    out.coeffs[m * degree] += term;
  }
  return out;
}

/// Adjoint action on Lie-algebra jets: g X g^{-1} mod z^k.
template <class S>
JetMatrix<S> jet_conjugate(const JetMatrix<S>& g, const JetMatrix<S>& x) {
  return jet_mul(jet_mul(g, x), jet_inv(g));
}

/// <X, A> = res tr(X A).
template <class S>
S pairing(const JetMatrix<S>& x, const PrincipalPart<S>& a) {
  detail::require(x.n == a.n, "pairing: size mismatch");
  S total(0);
  for (std::size_t i = a.first_slot(); i < std::min(x.k, a.k); ++i) total += (x.coeffs[i] * a.coeffs[i]).trace();
  return total;
}

/// Coadjoint action: principal part of g A g^{-1}. Nonnegative powers of z
/// are discarded (the dual-space quotient); a Polar input also drops the
/// residue slot.
template <class S>
PrincipalPart<S> coadjoint(const JetMatrix<S>& g, const PrincipalPart<S>& a) {
  detail::require(g.n == a.n, "coadjoint: size mismatch");
  detail::require(g.k >= a.k, "coadjoint: group jet has lower precision than the principal part");
  JetMatrix<S> h = jet_inv(g);
  PrincipalPart<S> out(a.n, a.k, a.tag);
  const std::size_t lo = a.first_slot();
  for (std::size_t j = lo; j < a.k; ++j) {
    Matrix<S>& dst = out.coeffs[j];
    for (std::size_t b = std::max(j, lo); b < a.k; ++b) {
      if (a.coeffs[b].is_zero()) continue;
      // g_p B_b h_c with p + c = b - j
      for (std::size_t p = 0; p <= b - j; ++p) dst += g.coeffs[p] * a.coeffs[b] * h.coeffs[b - j - p];
    }
  }
  return out;
}

/// Gauge action g[A] = g A g^{-1} + dg g^{-1}. The result is trusted to
/// depth min(A.depth, g.k - 1); a depth below k-1 is a DepthError.
template <class S>
ConnectionJet<S> gauge(const JetMatrix<S>& g, const ConnectionJet<S>& a) {
  detail::require(g.n == a.n, "gauge: size mismatch");
  std::size_t depth = std::min(a.depth(), g.k - 1);
  if (depth + 1 < a.k) throw DepthError("gauge: trusted depth falls below k-1");
  JetMatrix<S> h = jet_inv(g);
  ConnectionJet<S> out(a.n, a.k, depth);
  for (std::size_t m = 0; m <= depth; ++m) {
    Matrix<S>& dst = out.coeffs[m];
    for (std::size_t b = 0; b <= m; ++b) {
      if (a.coeffs[b].is_zero()) continue;
      for (std::size_t p = 0; p + b <= m; ++p) {
        if (g.coeffs[p].is_zero()) continue;
        dst += g.coeffs[p] * a.coeffs[b] * h.coeffs[m - b - p];
      }
    }
    // dg g^{-1}: j g_j z^{j-1} h_c z^c lands at index m when j + c = m - k + 1.
    if (m + 1 >= a.k) {
      std::size_t s = m + 1 - a.k;
      for (std::size_t j = 1; j <= s; ++j) {
        if (g.coeffs[j].is_zero()) continue;
        dst += S(static_cast<long>(j)) * (g.coeffs[j] * h.coeffs[s - j]);
      }
    }
  }
  return out;
}

}  // namespace dsq
