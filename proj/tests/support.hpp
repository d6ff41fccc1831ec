#pragma once

// Random generators shared by the test suites.

#include <random>

#include "dsq/jets.hpp"
#include "dsq/matrix.hpp"
#include "dsq/orbits.hpp"
#include "dsq/quiver.hpp"

namespace dsq::testing {

using Rng = std::mt19937_64;

inline Complex random_complex(Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  return {d(rng), d(rng)};
}

inline MatC random_matc(Rng& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  MatC m(r, c);
  for (auto& x : m.data()) x = random_complex(rng, scale);
  return m;
}

/// Gaussian integer in [-range, range] + i [-range, range] (imaginary part optional).
inline Rational random_gauss_int(Rng& rng, long range, bool complex_part = true) {
  std::uniform_int_distribution<long> d(-range, range);
  long re = d(rng);
  long im = complex_part ? d(rng) : 0;
  return Rational::frac(re, 1, im, 1);
}

inline MatQ random_matq(Rng& rng, std::size_t r, std::size_t c, long range = 3) {
  MatQ m(r, c);
  for (auto& x : m.data()) x = random_gauss_int(rng, range);
  return m;
}

template <class S>
Matrix<S> random_mat(Rng& rng, std::size_t r, std::size_t c) {
  if constexpr (std::is_same_v<S, Rational>) {
    return random_matq(rng, r, c);
  } else {
    return random_matc(rng, r, c);
  }
}

template <class S>
JetMatrix<S> random_unipotent(Rng& rng, std::size_t n, std::size_t k, double scale = 1.0) {
  JetMatrix<S> g = JetMatrix<S>::identity(n, k);
  for (std::size_t i = 1; i < k; ++i) {
    g.coeffs[i] = random_mat<S>(rng, n, n);
    if constexpr (std::is_same_v<S, Complex>) g.coeffs[i] *= Complex(scale, 0.0);
  }
  return g;
}

template <class S>
JetMatrix<S> random_invertible_jet(Rng& rng, std::size_t n, std::size_t k) {
  JetMatrix<S> g(n, k);
  for (std::size_t i = 0; i < k; ++i) g.coeffs[i] = random_mat<S>(rng, n, n);
  g.coeffs[0] += Matrix<S>::scalar(n, S(7));  // keep g_0 comfortably invertible
  return g;
}

inline double jet_diff(const JetMatrix<Complex>& a, const JetMatrix<Complex>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(a.k, b.k); ++i) s += std::pow((a.coeffs[i] - b.coeffs[i]).norm(), 2);
  return std::sqrt(s);
}

template <class S>
DoubledRep<S> random_rep(Rng& rng, std::shared_ptr<const Quiver> q, const DimVector& dims) {
  DoubledRep<S> x(std::move(q), dims);
  for (std::size_t a = 0; a < x.fwd.size(); ++a) {
    x.fwd[a] = random_mat<S>(rng, x.fwd[a].rows(), x.fwd[a].cols());
    x.rev[a] = random_mat<S>(rng, x.rev[a].rows(), x.rev[a].cols());
  }
  return x;
}

template <class S>
std::vector<S> random_vec(Rng& rng, std::size_t n) {
  Matrix<S> m = random_mat<S>(rng, n, 1);
  return {m.data().begin(), m.data().end()};
}

inline std::shared_ptr<const Quiver> line_quiver(std::size_t nv, std::size_t mult = 1) {
  auto q = std::make_shared<Quiver>();
  for (std::size_t i = 0; i < nv; ++i) q->add_vertex("v" + std::to_string(i));
  for (std::size_t i = 0; i + 1 < nv; ++i)
    for (std::size_t m = 0; m < mult; ++m) q->add_arrow("a" + std::to_string(i) + "_" + std::to_string(m), i, i + 1);
  return q;
}

/// Random Jordan data of size n with Gaussian-integer eigenvalues in
/// [-range, range]^2; distinct eigenvalues are at most `distinct`.
inline std::vector<EigenBlocks<Rational>> random_jordan(Rng& rng, std::size_t n, long range = 3,
                                                        std::size_t distinct = 3) {
  std::vector<EigenBlocks<Rational>> eigen;
  std::size_t left = n;
  while (left > 0) {
    Rational lam = random_gauss_int(rng, range);
    bool seen = false;
    for (const auto& e : eigen) seen = seen || e.value == lam;
    if (seen) continue;
    EigenBlocks<Rational> e{lam, {}};
    std::size_t mult = eigen.size() + 1 == distinct ? left : std::uniform_int_distribution<std::size_t>(1, left)(rng);
    std::size_t rest = mult;
    while (rest > 0) {
      std::size_t b = std::uniform_int_distribution<std::size_t>(1, rest)(rng);
      e.blocks.push_back(b);
      rest -= b;
    }
    left -= mult;
    eigen.push_back(std::move(e));
  }
  return eigen;
}

/// Random invertible Gaussian-integer matrix with unit determinant
/// (product of elementary matrices), so conjugates stay integral.
inline MatQ random_unimodular(Rng& rng, std::size_t n, int steps = 6) {
  MatQ g = MatQ::identity(n);
  if (n < 2) return g;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  for (int s = 0; s < steps; ++s) {
    std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    MatQ e = MatQ::identity(n);
    e(i, j) = random_gauss_int(rng, 2);
    g = g * e;
  }
  return g;
}

}  // namespace dsq::testing
