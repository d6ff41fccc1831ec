#pragma once

// Scalar backends shared by every kernel in the library.
//
//   Rational  -- exact Gaussian rationals a/b + c/d i (GMP backed). Used for
//                the nonemptiness criterion, ranks and stability decisions.
//   Complex   -- std::complex<double>. Used for symplectic checks, the
//                numeric realizer and formal reduction of generic data.
//
// Kernels are templates over the scalar; ScalarTraits<S> supplies the few
// operations that differ (zero tests, magnitude, conversions).

#include <algorithm>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

#include <gmpxx.h>

namespace dsq {

using Complex = std::complex<double>;

class Rational {
 public:
  Rational() = default;
  Rational(long v) : re_(v), im_(0) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : re_(v), im_(0) {}   // NOLINT(google-explicit-constructor)
  Rational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  /// a/b + (c/d) i from integer parts.
  static Rational frac(long num, long den, long inum = 0, long iden = 1);
  /// Exact value of a double (every finite double is a dyadic rational).
  static Rational from_double_exact(double re, double im = 0.0);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  Rational conj() const { return {re_, -im_}; }
  mpq_class norm2() const { return re_ * re_ + im_ * im_; }
  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }

  Rational operator-() const { return {-re_, -im_}; }
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

  /// Canonical text form "a/b", "a/b+c/d i", "a/b-c/d i".
  std::string str() const;
  /// Parses "3", "-1/2", "2i", "-i", "1/2+3/4 i", "1-2i", "0.25" (decimal is exact).
  static Rational parse(std::string_view text);

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// (Re, Im) lexicographic order; used for deterministic tie-breaking.
bool lex_less(const Rational& a, const Rational& b);
bool lex_less(const Complex& a, const Complex& b);

/// Best rational approximation with denominator <= max_den, accepted only
/// when it reproduces x to 1e-12 relative. Throws std::domain_error otherwise.
mpq_class rationalize(double x, long max_den);
Rational rationalize(Complex z, long max_den);

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational from_int(long v) { return Rational(v); }
  static Rational from_complex(Complex z) { return Rational::from_double_exact(z.real(), z.imag()); }
  static Complex to_complex(const Rational& s) { return s.to_complex(); }
  static double magnitude(const Rational& s) { return std::abs(s.to_complex()); }
  static bool is_zero(const Rational& s, double = 0.0) { return s.is_zero(); }
  static bool equal(const Rational& a, const Rational& b, double = 0.0) { return a == b; }
  static Rational conj(const Rational& s) { return s.conj(); }
  static bool less(const Rational& a, const Rational& b) { return lex_less(a, b); }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  /// Default relative tolerance for float comparisons.
  static constexpr double default_tol = 1e-9;
  static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }
  static Complex from_complex(Complex z) { return z; }
  static Complex to_complex(const Complex& s) { return s; }
  static double magnitude(const Complex& s) { return std::abs(s); }
  static bool is_zero(const Complex& s, double tol = default_tol) { return std::abs(s) <= tol; }
  static bool equal(const Complex& a, const Complex& b, double tol = default_tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
  }
  static Complex conj(const Complex& s) { return std::conj(s); }
  static bool less(const Complex& a, const Complex& b) { return lex_less(a, b); }
};

template <class S>
S scalar_from(const Rational& r) {
  if constexpr (std::is_same_v<S, Rational>) {
    return r;
  } else {
    return r.to_complex();
  }
}

}  // namespace dsq
