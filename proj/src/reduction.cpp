#include "dsq/reduction.hpp"

#include "dsq/orbits.hpp"

namespace dsq {

namespace {

template <class S, class Null>
Eigenbasis<S> assemble(const Matrix<S>& m, const std::vector<EigenBlocks<S>>& spec, Null null) {
  const std::size_t n = m.rows();
  Eigenbasis<S> eb;
  eb.vectors = Matrix<S>(n, n);
  std::size_t col = 0;
  for (const auto& e : spec) {
    for (std::size_t b : e.blocks)
      if (b != 1) throw std::domain_error("matrix has a nontrivial Jordan block");
    Matrix<S> ker = null(m - Matrix<S>::scalar(n, e.value));
    if (ker.cols() != e.multiplicity()) throw std::domain_error("eigenspace dimension does not match the multiplicity");
    eb.vectors.set_block(0, col, ker);
    for (std::size_t c = 0; c < ker.cols(); ++c) eb.values.push_back(e.value);
    col += ker.cols();
  }
  if (col != n) throw std::domain_error("eigenvectors do not span");
  eb.inverse = inverse(eb.vectors);
  return eb;
}

}  // namespace

Eigenbasis<Rational> semisimple_basis(const MatQ& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("semisimple_basis: not square");
  return assemble<Rational>(m, jordan_data(m), [](const MatQ& x) { return nullspace(x); });
}

Eigenbasis<Complex> semisimple_basis(const MatC& m, double cluster_tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("semisimple_basis: not square");
  SpectrumOptions opt;
  opt.cluster_tol = cluster_tol;
  auto spec = jordan_data(m, opt);
  auto eb = assemble<Complex>(m, spec, [&](const MatC& x) { return nullspace(x, RankPolicy{cluster_tol}); });
  auto sv = singular_values(eb.vectors);
  if (sv.empty() || sv.back() < 1e-10 * sv.front()) throw std::domain_error("eigenvector matrix is ill-conditioned");
  return eb;
}

}  // namespace dsq
