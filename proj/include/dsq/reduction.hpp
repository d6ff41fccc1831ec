#pragma once

// Formal reduction of connection jets A = sum_i A_i z^{i-k} dz by gauge
// transformations g[A] = g A g^{-1} + dg g^{-1} with g = prod exp(z^i X_i).

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dsq/irregular.hpp"
#include "dsq/jets.hpp"

namespace dsq {

struct ReductionOptions {
  double gap_tol = 1e-8;  // float: eigenvalue differences below gap_tol * max(1, |A_0|) count as zero
  double diag_tol = 1e-10;
};

template <class S>
struct GaugeStep {
  std::size_t stage = 1;  // chain level l (1 for a single split)
  std::size_t degree = 1;
  Matrix<S> x;
};

template <class S>
struct ReductionResult {
  std::vector<GaugeStep<S>> gauge;  // in application order
  ConnectionJet<S> reduced;
  std::size_t depth = 0;

  /// exp(z^{i_m} X_m) ... exp(z^{i_1} X_1), precision depth + 1.
  JetMatrix<S> total() const {
    JetMatrix<S> g = JetMatrix<S>::identity(reduced.n, depth + 1);
    for (const auto& s : gauge) g = jet_mul(jet_exp(s.x, s.degree, depth + 1), g);
    return g;
  }
};

/// Eigenbasis of a diagonalizable matrix: m = vectors diag(values) inverse.
template <class S>
struct Eigenbasis {
  std::vector<S> values;
  Matrix<S> vectors;
  Matrix<S> inverse;
};

/// Throws std::domain_error when m is not diagonalizable (exact backend:
/// also when its spectrum is not Gaussian-rational).
Eigenbasis<Rational> semisimple_basis(const MatQ& m);
Eigenbasis<Complex> semisimple_basis(const MatC& m, double cluster_tol = 1e-8);

namespace detail {

template <class S>
bool gap_zero(const S& a, const S& b, double tol) {
  if constexpr (ScalarTraits<S>::exact) {
    return a == b;
  } else {
    return std::abs(a - b) <= tol;
  }
}

template <class S>
std::vector<S> diagonal_of(const Matrix<S>& m) {
  std::vector<S> d;
  for (std::size_t i = 0; i < m.rows(); ++i) d.push_back(m(i, i));
  return d;
}

// The leading coefficient A_s is diagonal with entries d, and A already lies
// in the subalgebra `inside` (entries (r, c) with inside[r][c]). Removes, one
// degree at a time, the part of A_{s+i} in the range of ad_{A_s}.
template <class S>
void split_diagonal(ConnectionJet<S>& a, std::size_t s, const std::vector<S>& d,
                    const std::vector<std::vector<bool>>& inside, double gap, std::size_t depth,
                    std::size_t stage, std::vector<GaugeStep<S>>& steps) {
  const std::size_t n = a.n;
  for (std::size_t i = 1; s + i <= depth; ++i) {
    const Matrix<S>& m = a.coeffs[s + i];
    Matrix<S> x(n, n);
    bool any = false;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        if (!inside[r][c] || gap_zero(d[r], d[c], gap) || ScalarTraits<S>::is_zero(m(r, c), 0.0)) continue;
        x(r, c) = m(r, c) / (d[r] - d[c]);
        any = true;
      }
    if (!any) continue;
    a = gauge(jet_exp(x, i, depth + 1), a);
    steps.push_back({stage, i, std::move(x)});
  }
}

template <class S>
double gap_scale(const Matrix<S>& lead, double rel) {
  if constexpr (ScalarTraits<S>::exact) {
    return 0.0;
  } else {
    return rel * std::max(1.0, lead.norm());
  }
}

template <class S>
void check_depth(const ConnectionJet<S>& a, std::size_t depth, const char* who) {
  if (a.k < 2) throw std::invalid_argument(std::string(who) + ": pole order must be at least 2");
  if (depth + 1 < a.k) throw DepthError(std::string(who) + ": depth must be at least k-1");
  if (a.depth() < depth) throw DepthError(std::string(who) + ": input jet is shorter than the requested depth");
}

template <class S>
ConnectionJet<S> truncate(const ConnectionJet<S>& a, std::size_t depth) {
  ConnectionJet<S> out(a.n, a.k, depth);
  for (std::size_t i = 0; i <= depth; ++i) out.coeffs[i] = a.coeffs[i];
  return out;
}

}  // namespace detail

/// Block-diagonalizes A with respect to a semisimple leading term: the
/// result commutes with A_0 in every coefficient up to `depth`, keeps A_0,
/// and every X_i lies in the range of ad_{A_0}.
template <class S>
ReductionResult<S> bv_split(const ConnectionJet<S>& a, std::size_t depth, const ReductionOptions& opt = {}) {
  detail::check_depth(a, depth, "bv_split");
  Eigenbasis<S> eb;
  try {
    if constexpr (ScalarTraits<S>::exact) {
      eb = semisimple_basis(a.coeffs[0]);
    } else {
      eb = semisimple_basis(a.coeffs[0], opt.gap_tol);
    }
  } catch (const std::domain_error& e) {
    throw std::domain_error(std::string("bv_split: leading coefficient is not diagonalizable: ") + e.what());
  }
  ConnectionJet<S> b = detail::truncate(a, depth);
  for (auto& c : b.coeffs) c = eb.inverse * c * eb.vectors;
  b.coeffs[0] = Matrix<S>::diagonal(eb.values);
  const std::size_t n = a.n;
  std::vector<std::vector<bool>> all(n, std::vector<bool>(n, true));
  ReductionResult<S> res;
  res.depth = depth;
  detail::split_diagonal(b, 0, eb.values, all, detail::gap_scale(a.coeffs[0], opt.gap_tol), depth, 1, res.gauge);
  for (auto& c : b.coeffs) c = eb.vectors * c * eb.inverse;
  b.coeffs[0] = a.coeffs[0];
  for (auto& s : res.gauge) s.x = eb.vectors * s.x * eb.inverse;
  res.reduced = std::move(b);
  return res;
}

/// Iterated splitting through the centralizer chain of A_0, ..., A_{k-2},
/// which must be diagonal. The result lies in the common centralizer h_0 up
/// to `depth` and keeps A_0 .. A_{k-2}.
template <class S>
ReductionResult<S> bv_chain(const ConnectionJet<S>& a, std::size_t depth, const ReductionOptions& opt = {}) {
  detail::check_depth(a, depth, "bv_chain");
  const std::size_t n = a.n, k = a.k;
  double scale = 0.0;
  for (std::size_t j = 0; j + 1 < k; ++j) scale = std::max(scale, a.coeffs[j].norm());
  for (std::size_t j = 0; j + 1 < k; ++j)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (r != c && !ScalarTraits<S>::is_zero(a.coeffs[j](r, c), opt.diag_tol * std::max(1.0, scale)))
          throw std::invalid_argument("bv_chain: A_" + std::to_string(j) + " is not diagonal");
  ConnectionJet<S> b = detail::truncate(a, depth);
  for (std::size_t j = 0; j + 1 < k; ++j) b.coeffs[j] = Matrix<S>::diagonal(detail::diagonal_of(a.coeffs[j]));

  ReductionResult<S> res;
  res.depth = depth;
  std::vector<std::vector<bool>> inside(n, std::vector<bool>(n, true));
  for (std::size_t l = 1; l < k; ++l) {
    const std::size_t s = l - 1;
    auto d = detail::diagonal_of(b.coeffs[s]);
    double gap = detail::gap_scale(b.coeffs[s], opt.gap_tol);
    detail::split_diagonal(b, s, d, inside, gap, depth, l, res.gauge);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (!detail::gap_zero(d[r], d[c], gap)) inside[r][c] = false;
  }
  res.reduced = std::move(b);
  return res;
}

template <class S>
struct NormalForm {
  JetMatrix<S> gauge;  // unipotent, gauge[A] = reduced
  ConnectionJet<S> reduced;
  Matrix<S> exponent;  // L, the residue of the reduced connection
};

/// Normal form dT + L z^{-1} dz + (regular, h_0-valued) of a connection
/// whose irregular part lies on the unipotent orbit of dT. Coordinates are
/// those of T (blocks in sorted order).
template <class S>
NormalForm<S> normalize(const ConnectionJet<S>& a, const IrregularType<S>& t, std::size_t depth,
                        const ReductionOptions& opt = {}, double orbit_tol = 1e-8) {
  if (a.n != t.n() || a.k != t.k()) throw DimensionError("normalize: connection shape does not match the irregular type");
  detail::check_depth(a, depth, "normalize");
  const std::size_t n = t.n(), k = t.k();
  PrincipalPart<S> polar(n, k, DualTag::Polar);
  for (std::size_t i = 1; i < k; ++i) polar.coeffs[i] = a.coeffs[k - 1 - i];
  JetMatrix<S> g;
  try {
    g = orbit_transporter(polar, t, orbit_tol);
  } catch (const OrbitMembershipError&) {
    throw OrbitMembershipError("normalize: polar part is not on the orbit of dT");
  }
  JetMatrix<S> pad = JetMatrix<S>::identity(n, depth + 1);
  for (std::size_t i = 1; i < k && i <= depth; ++i) pad.coeffs[i] = g.coeffs[i];
  JetMatrix<S> ginv = jet_inv(pad);
  ConnectionJet<S> moved = gauge(ginv, detail::truncate(a, depth));
  const auto dt = t.dT();
  for (std::size_t j = 0; j + 1 < k; ++j) moved.coeffs[j] = dt.coeffs[k - 1 - j];
  auto chain = bv_chain(moved, depth, opt);
  NormalForm<S> out;
  out.gauge = jet_mul(chain.total(), ginv);
  out.exponent = chain.reduced.coeffs[k - 1];
  out.reduced = std::move(chain.reduced);
  return out;
}

}  // namespace dsq
