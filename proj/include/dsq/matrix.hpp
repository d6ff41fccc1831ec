#pragma once

// Dense row-major matrices over either scalar backend, plus the small set of
// linear-algebra kernels the rest of the library needs (rank, column space,
// nullspace, linear solve, inverse). Exact matrices go through Gauss-Jordan
// elimination over Q(i); complex matrices go through Eigen's SVD / COD.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dsq/scalar.hpp"

namespace dsq {

template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, S(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }
  static Matrix scalar(std::size_t n, const S& s) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
    return m;
  }
  static Matrix diagonal(std::span<const S> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  /// Matrix unit E_{ij} (zero-based).
  static Matrix unit(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j) {
    Matrix m(rows, cols);
    m(i, j) = S(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<S> data() { return data_; }
  std::span<const S> data() const { return data_; }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }
  void set_block(std::size_t r0, std::size_t c0, const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) (*this)(r0 + i, c0 + j) = m(i, j);
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(const S& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const S& s) { return a *= s; }
  friend Matrix operator*(const S& s, Matrix a) { return a *= s; }
  Matrix operator-() const {
    Matrix out(*this);
    for (auto& x : out.data_) x = -x;
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const S& x = a(i, l);
        if (ScalarTraits<S>::is_zero(x, 0.0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += x * b(l, j);
      }
    }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }
  Matrix adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = ScalarTraits<S>::conj((*this)(i, j));
    return out;
  }

  S trace() const {
    S t(0);
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& x : data_) {
      double m = ScalarTraits<S>::magnitude(x);
      s += m * m;
    }
    return std::sqrt(s);
  }

  bool is_zero(double tol = 0.0) const {
    for (const auto& x : data_)
      if (!ScalarTraits<S>::is_zero(x, tol)) return false;
    return true;
  }

  template <class T>
  Matrix<T> cast() const {
    Matrix<T> out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) {
      if constexpr (std::is_same_v<T, S>) {
        out.data()[i] = data_[i];
      } else if constexpr (std::is_same_v<T, Complex>) {
        out.data()[i] = ScalarTraits<S>::to_complex(data_[i]);
      } else {
        out.data()[i] = ScalarTraits<T>::from_complex(ScalarTraits<S>::to_complex(data_[i]));
      }
    }
    return out;
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

using MatQ = Matrix<Rational>;
using MatC = Matrix<Complex>;

template <class S>
Matrix<S> commutator(const Matrix<S>& a, const Matrix<S>& b) {
  return a * b - b * a;
}

/// Frobenius distance relative to max(1, |a|, |b|).
template <class S>
double rel_diff(const Matrix<S>& a, const Matrix<S>& b) {
  double scale = std::max({1.0, a.norm(), b.norm()});
  return (a - b).norm() / scale;
}

/// Numeric rank policy for the complex backend: singular values below
/// rel_tol * sigma_max count as zero.
struct RankPolicy {
  double rel_tol = 1e-8;
};

/// Result of the row reduction of an exact matrix.
struct Echelon {
  MatQ reduced;                       // reduced row echelon form
  std::vector<std::size_t> pivots;    // pivot column per nonzero row
};

Echelon rref(const MatQ& m);

std::size_t rank(const MatQ& m);
std::size_t rank(const MatC& m, RankPolicy p = {});

/// Basis of the column space (as columns of the result). Exact: pivot
/// columns of m. Complex: orthonormal left singular vectors.
MatQ column_basis(const MatQ& m);
MatC column_basis(const MatC& m, RankPolicy p = {});

/// Basis of the right nullspace (as columns).
MatQ nullspace(const MatQ& m);
MatC nullspace(const MatC& m, RankPolicy p = {});

/// Some X with A X = B, or nullopt when the system is inconsistent. The
/// complex backend returns the minimum-norm least-squares solution and
/// declares inconsistency when the residual exceeds rel_tol * (|A||X| + |B|).
std::optional<MatQ> solve(const MatQ& a, const MatQ& b);
std::optional<MatC> solve(const MatC& a, const MatC& b, double rel_tol = 1e-8);

MatQ inverse(const MatQ& m);
MatC inverse(const MatC& m);

/// Singular values in descending order.
std::vector<double> singular_values(const MatC& m);

/// Eigen-decomposition of a complex matrix (eigenvalues + eigenvector columns).
struct EigenDecomposition {
  std::vector<Complex> values;
  MatC vectors;
};
EigenDecomposition eigen_decompose(const MatC& m);

}  // namespace dsq
