#include "dsq/scalar.hpp"

#include <cctype>
#include <cmath>

namespace dsq {

Rational Rational::frac(long num, long den, long inum, long iden) {
  if (den == 0 || iden == 0) throw std::domain_error("zero denominator");
  return {mpq_class(num, den), mpq_class(inum, iden)};
}

Rational Rational::from_double_exact(double re, double im) {
  if (!std::isfinite(re) || !std::isfinite(im)) throw std::domain_error("non-finite scalar");
  return {mpq_class(re), mpq_class(im)};
}

Rational& Rational::operator+=(const Rational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  mpq_class d = o.norm2();
  mpq_class r = (re_ * o.re_ + im_ * o.im_) / d;
  mpq_class i = (im_ * o.re_ - re_ * o.im_) / d;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

std::string Rational::str() const {
  if (sgn(im_) == 0) return re_.get_str();
  std::string out = re_.get_str();
  if (sgn(im_) > 0) {
    out += "+" + im_.get_str();
  } else {
    out += im_.get_str();
  }
  return out + " i";
}

namespace {

// Decimal or fraction literal without sign, e.g. "3", "1/2", "0.25", "1e-3".
mpq_class parse_unsigned_real(std::string_view s) {
  if (s.empty()) return mpq_class(1);
  auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    mpq_class q(std::string(s.substr(0, slash)) + "/" + std::string(s.substr(slash + 1)), 10);
    q.canonicalize();
    return q;
  }
  std::string mant(s);
  long exp10 = 0;
  auto e = mant.find_first_of("eE");
  if (e != std::string::npos) {
    exp10 = std::stol(mant.substr(e + 1));
    mant = mant.substr(0, e);
  }
  auto dot = mant.find('.');
  if (dot != std::string::npos) {
    exp10 -= static_cast<long>(mant.size() - dot - 1);
    mant.erase(dot, 1);
  }
  if (mant.empty()) throw std::invalid_argument("bad number");
  for (char c : mant) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad number");
  }
  mpz_class num(mant, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  mpq_class q = exp10 >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
  q.canonicalize();
  return q;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("empty scalar literal");
  // Split into signed terms at '+'/'-' that are not part of an exponent.
  mpq_class re = 0, im = 0;
  std::size_t pos = 0;
  int terms = 0;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    }
    std::size_t end = pos;
    while (end < s.size()) {
      char c = s[end];
      if ((c == '+' || c == '-') && end > pos && s[end - 1] != 'e' && s[end - 1] != 'E') break;
      ++end;
    }
    std::string_view term(s.data() + pos, end - pos);
    bool imaginary = !term.empty() && (term.back() == 'i' || term.back() == 'I');
    if (imaginary) term.remove_suffix(1);
    if (!term.empty() && term.back() == '*') term.remove_suffix(1);
    if (!imaginary && term.empty()) throw std::invalid_argument("bad scalar literal: " + s);
    mpq_class v = parse_unsigned_real(term);
    if (sign < 0) v = -v;
    (imaginary ? im : re) += v;
    pos = end;
    if (++terms > 2) throw std::invalid_argument("bad scalar literal: " + s);
  }
  return {re, im};
}

bool lex_less(const Rational& a, const Rational& b) {
  if (a.re() != b.re()) return a.re() < b.re();
  return a.im() < b.im();
}

bool lex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

mpq_class rationalize(double x, long max_den) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite value");
  // Continued-fraction convergents.
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  mpq_class best(0);
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(r);
    if (std::fabs(a) > 9e15) break;
    long ai = static_cast<long>(a);
    long h2 = ai * h1 + h0;
    long k2 = ai * k1 + k0;
    if (k2 > max_den || k2 <= 0) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    best = mpq_class(h1, k1);
    best.canonicalize();
    if (std::fabs(best.get_d() - x) <= 1e-12 * std::max(1.0, std::fabs(x))) return best;
    double frac = r - a;
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  if (k1 > 0 && std::fabs(best.get_d() - x) <= 1e-12 * std::max(1.0, std::fabs(x))) return best;
  throw std::domain_error("value " + std::to_string(x) + " is not a rational with denominator <= " +
                          std::to_string(max_den));
}

Rational rationalize(Complex z, long max_den) {
  return {rationalize(z.real(), max_den), rationalize(z.imag(), max_den)};
}

}  // namespace dsq
