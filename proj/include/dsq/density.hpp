#pragma once

// Dimension of the unital matrix algebra generated by a set of n x n
// matrices. A module over an algebraically closed field is simple exactly
// when this dimension is n^2, which is how stability is decided both for
// quiver representations and for connections.
//
// The closure runs in rounds: every generator is multiplied against the
// newest basis elements (the frontier), and the products are reduced against
// the span in a fixed order. algebra_dimension computes the products of a
// round in parallel with OpenMP; algebra_dimension_serial is the plain
// reference loop. The reduction step is identical in both, so the two
// return the same basis.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "dsq/matrix.hpp"
#include "dsq/span.hpp"

namespace dsq {

struct DensityOptions {
  double rel_tol = 1e-8;  // complex backend only
  double abs_tol = 0.0;   // complex backend only
  bool stop_when_full = true;
};

namespace detail {

template <class S>
std::vector<S> flatten(const Matrix<S>& m) {
  return {m.data().begin(), m.data().end()};
}

template <class S>
Matrix<S> unflatten(const std::vector<S>& v, std::size_t n) {
  Matrix<S> m(n, n);
  std::copy(v.begin(), v.end(), m.data().begin());
  return m;
}

// Inserts the candidates in order; returns the newly stored basis vectors as
// matrices (the next frontier).
template <class S>
std::vector<Matrix<S>> absorb(SpanReducer<S>& span, const std::vector<Matrix<S>>& cands, std::size_t n,
                              const DensityOptions& opt) {
  std::vector<Matrix<S>> fresh;
  const std::size_t full = n * n;
  for (const auto& c : cands) {
    if (opt.stop_when_full && span.dim() == full) break;
    if (span.insert(flatten(c))) fresh.push_back(unflatten(span.basis().back(), n));
  }
  return fresh;
}

template <class S, bool Parallel>
std::size_t algebra_dimension_impl(const std::vector<Matrix<S>>& gens, std::size_t n, const DensityOptions& opt) {
  if (n == 0) return 0;
  SpanReducer<S> span(n * n, opt.rel_tol, opt.abs_tol);
  std::vector<Matrix<S>> start{Matrix<S>::identity(n)};
  for (const auto& g : gens) start.push_back(g);
  std::vector<Matrix<S>> frontier = absorb(span, start, n, opt);

  while (!frontier.empty() && !(opt.stop_when_full && span.dim() == n * n)) {
    const std::size_t nf = frontier.size();
    std::vector<Matrix<S>> products(gens.size() * nf);
    if constexpr (Parallel) {
      const long total = static_cast<long>(products.size());
#pragma omp parallel for schedule(dynamic)
      for (long idx = 0; idx < total; ++idx) {
        std::size_t u = static_cast<std::size_t>(idx);
        products[u] = gens[u / nf] * frontier[u % nf];
      }
    } else {
      for (std::size_t u = 0; u < products.size(); ++u) products[u] = gens[u / nf] * frontier[u % nf];
    }
    frontier = absorb(span, products, n, opt);
  }
  return span.dim();
}

}  // namespace detail

template <class S>
std::size_t algebra_dimension(const std::vector<Matrix<S>>& gens, std::size_t n, const DensityOptions& opt = {}) {
  return detail::algebra_dimension_impl<S, true>(gens, n, opt);
}

template <class S>
std::size_t algebra_dimension_serial(const std::vector<Matrix<S>>& gens, std::size_t n,
                                     const DensityOptions& opt = {}) {
  return detail::algebra_dimension_impl<S, false>(gens, n, opt);
}

/// True when the generated unital algebra is all of End(C^n).
template <class S>
bool is_dense(const std::vector<Matrix<S>>& gens, std::size_t n, const DensityOptions& opt = {}) {
  return algebra_dimension(gens, n, opt) == n * n;
}

/// Density that survives perturbations of relative size `margin`: the
/// generators are rescaled so the largest has norm 1, and reduced products
/// shorter than `margin` count as dependent. Exact backends ignore the margin.
template <class S>
bool is_dense_with_margin(std::vector<Matrix<S>> gens, std::size_t n, double margin) {
  if constexpr (ScalarTraits<S>::exact) {
    return is_dense(gens, n);
  } else {
    double top = 0.0;
    for (const auto& g : gens) top = std::max(top, g.norm());
    if (top > 0.0)
      for (auto& g : gens) g *= S(1.0 / top);
    DensityOptions opt;
    opt.abs_tol = margin;
    return is_dense(gens, n, opt);
  }
}

}  // namespace dsq
