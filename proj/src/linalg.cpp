#include <Eigen/Dense>

#include "dsq/matrix.hpp"

namespace dsq {

namespace {

using EMat = Eigen::MatrixXcd;

EMat to_eigen(const MatC& m) {
  EMat out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return out;
}

MatC from_eigen(const EMat& m) {
  MatC out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

std::size_t numeric_rank(const Eigen::VectorXd& sv, double rel_tol) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  double thr = rel_tol * sv(0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++r;
  return r;
}

}  // namespace

Echelon rref(const MatQ& m) {
  Echelon e{m, {}};
  MatQ& a = e.reduced;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t piv = row;
    while (piv < a.rows() && a(piv, col).is_zero()) ++piv;
    if (piv == a.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
    Rational inv = Rational(1) / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col).is_zero()) continue;
      Rational f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    e.pivots.push_back(col);
    ++row;
  }
  return e;
}

std::size_t rank(const MatQ& m) { return rref(m).pivots.size(); }

std::size_t rank(const MatC& m, RankPolicy p) {
  if (m.empty()) return 0;
  Eigen::JacobiSVD<EMat> svd(to_eigen(m));
  return numeric_rank(svd.singularValues(), p.rel_tol);
}

std::vector<double> singular_values(const MatC& m) {
  if (m.empty()) return {};
  Eigen::JacobiSVD<EMat> svd(to_eigen(m));
  const auto& sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

MatQ column_basis(const MatQ& m) {
  auto e = rref(m);
  MatQ out(m.rows(), e.pivots.size());
  for (std::size_t k = 0; k < e.pivots.size(); ++k)
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, k) = m(i, e.pivots[k]);
  return out;
}

MatC column_basis(const MatC& m, RankPolicy p) {
  if (m.empty()) return MatC(m.rows(), 0);
  Eigen::JacobiSVD<EMat> svd(to_eigen(m), Eigen::ComputeThinU);
  std::size_t r = numeric_rank(svd.singularValues(), p.rel_tol);
  return from_eigen(svd.matrixU().leftCols(static_cast<Eigen::Index>(r)));
}

MatQ nullspace(const MatQ& m) {
  auto e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::size_t nfree = m.cols() - e.pivots.size();
  MatQ out(m.cols(), nfree);
  std::size_t k = 0;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    out(f, k) = Rational(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) out(e.pivots[r], k) = -e.reduced(r, f);
    ++k;
  }
  return out;
}

MatC nullspace(const MatC& m, RankPolicy p) {
  if (m.cols() == 0) return MatC(0, 0);
  if (m.rows() == 0) return MatC::identity(m.cols());
  Eigen::JacobiSVD<EMat> svd(to_eigen(m), Eigen::ComputeFullV);
  std::size_t r = numeric_rank(svd.singularValues(), p.rel_tol);
  const EMat& v = svd.matrixV();
  return from_eigen(v.rightCols(v.cols() - static_cast<Eigen::Index>(r)));
}

std::optional<MatQ> solve(const MatQ& a, const MatQ& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: shape mismatch");
  MatQ aug(a.rows(), a.cols() + b.cols());
  aug.set_block(0, 0, a);
  aug.set_block(0, a.cols(), b);
  auto e = rref(aug);
  MatQ x(a.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] >= a.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.reduced(r, a.cols() + j);
  }
  return x;
}

std::optional<MatC> solve(const MatC& a, const MatC& b, double rel_tol) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: shape mismatch");
  if (a.cols() == 0) {
    if (b.norm() > rel_tol * std::max(1.0, b.norm())) return std::nullopt;
    return MatC(0, b.cols());
  }
  EMat ea = to_eigen(a);
  Eigen::CompleteOrthogonalDecomposition<EMat> cod(ea);
  cod.setThreshold(1e-12);
  EMat x = cod.solve(to_eigen(b));
  double resid = (ea * x - to_eigen(b)).norm();
  double scale = ea.norm() * x.norm() + b.norm();
  if (resid > rel_tol * std::max(scale, 1e-300)) return std::nullopt;
  return from_eigen(x);
}

MatQ inverse(const MatQ& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
  auto x = solve(m, MatQ::identity(m.rows()));
  if (!x || rank(m) < m.rows()) throw std::domain_error("inverse: singular matrix");
  return *x;
}

MatC inverse(const MatC& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
  Eigen::FullPivLU<EMat> lu(to_eigen(m));
  if (!lu.isInvertible()) throw std::domain_error("inverse: singular matrix");
  return from_eigen(lu.inverse());
}

EigenDecomposition eigen_decompose(const MatC& m) {
  Eigen::ComplexEigenSolver<EMat> es(to_eigen(m));
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen decomposition failed");
  EigenDecomposition out;
  const auto& ev = es.eigenvalues();
  out.values.assign(ev.data(), ev.data() + ev.size());
  out.vectors = from_eigen(es.eigenvectors());
  return out;
}

}  // namespace dsq
