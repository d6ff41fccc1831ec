#include "doctest.h"
#include "support.hpp"

using namespace dsq;
using testing::Rng;

namespace {

MatQ E(std::size_t n, std::size_t i, std::size_t j) { return MatQ::unit(n, n, i - 1, j - 1); }

JetMatrix<Rational> jet(std::size_t n, std::initializer_list<MatQ> cs) {
  JetMatrix<Rational> g(n, cs.size());
  std::size_t i = 0;
  for (const auto& c : cs) g.coeffs[i++] = c;
  return g;
}

bool jets_equal(const JetMatrix<Rational>& a, const JetMatrix<Rational>& b) {
  if (a.k != b.k) return false;
  for (std::size_t i = 0; i < a.k; ++i)
    if (!(a.coeffs[i] == b.coeffs[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("jet_mul truncates the Cauchy product") {
  const auto I = MatQ::identity(2);
  auto a = jet(2, {I, E(2, 1, 2)});
  auto b = jet(2, {I, E(2, 2, 1)});
  CHECK(jets_equal(jet_mul(a, b), jet(2, {I, E(2, 1, 2) + E(2, 2, 1)})));

  // z^2: E21 E12 - E22 = 0
  auto c = jet(2, {I, E(2, 2, 1), MatQ(2, 2)});
  auto d = jet(2, {I, E(2, 1, 2), -E(2, 2, 2)});
  CHECK(jets_equal(jet_mul(c, d), jet(2, {I, E(2, 1, 2) + E(2, 2, 1), MatQ(2, 2)})));

  JetMatrix<Rational> wrong(3, 2);
  CHECK_THROWS_AS(jet_mul(a, wrong), DimensionError);
}

TEST_CASE("jet_inv") {
  auto id = JetMatrix<Rational>::identity(3, 4);
  CHECK(jets_equal(jet_inv(id), id));

  MatQ N = E(3, 1, 2) + E(3, 2, 3);
  auto g = jet(3, {MatQ::identity(3), N, MatQ(3, 3)});
  CHECK(jets_equal(jet_inv(g), jet(3, {MatQ::identity(3), -N, N * N})));

  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    auto u = testing::random_unipotent<Complex>(rng, 4, 5);
    auto prod = jet_mul(u, jet_inv(u));
    CHECK(testing::jet_diff(prod, JetMatrix<Complex>::identity(4, 5)) <= 1e-12 * std::max(1.0, std::pow(u.norm(), 4)));
  }

  JetMatrix<Rational> singular(2, 2);
  CHECK_THROWS_AS(jet_inv(singular), std::domain_error);
}

TEST_CASE("jet_exp truncation") {
  MatQ X = E(2, 1, 2) + Rational(2) * E(2, 2, 1);
  CHECK(jets_equal(jet_exp(MatQ(2, 2), 1, 3), JetMatrix<Rational>::identity(2, 3)));
  CHECK(jets_equal(jet_exp(X, 1, 2), jet(2, {MatQ::identity(2), X})));
  CHECK(jets_equal(jet_exp(X, 1, 3), jet(2, {MatQ::identity(2), X, Rational::frac(1, 2) * (X * X)})));
  // exp(z^2 X) with k = 5 keeps X at z^2 and X^2/2 at z^4
  auto e2 = jet_exp(X, 2, 5);
  CHECK(e2.coeffs[1].is_zero());
  CHECK(e2.coeffs[2] == X);
  CHECK(e2.coeffs[4] == Rational::frac(1, 2) * (X * X));
}

TEST_CASE("residue pairing") {
  Rational c = Rational::frac(3, 2, -1, 1);
  JetMatrix<Rational> x(2, 2);
  x.coeffs[1] = E(2, 2, 1);
  PrincipalPart<Rational> a(2, 2, DualTag::Full);
  a.coeffs[1] = c * E(2, 1, 2);
  CHECK(pairing(x, a) == c);

  JetMatrix<Rational> xc = JetMatrix<Rational>::constant(E(2, 1, 1) + E(2, 2, 1), 3);
  PrincipalPart<Rational> polar(2, 3, DualTag::Polar);
  polar.coeffs[0] = E(2, 1, 1);  // never read
  polar.coeffs[1] = E(2, 1, 2);
  polar.coeffs[2] = E(2, 2, 2);
  CHECK(pairing(xc, polar) == Rational(0));

  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    JetMatrix<Rational> x1(3, 3), x2(3, 3);
    PrincipalPart<Rational> p(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      x1.coeffs[i] = testing::random_matq(rng, 3, 3);
      x2.coeffs[i] = testing::random_matq(rng, 3, 3);
      p.coeffs[i] = testing::random_matq(rng, 3, 3);
    }
    Rational s = testing::random_gauss_int(rng, 4);
    JetMatrix<Rational> comb(3, 3);
    for (std::size_t i = 0; i < 3; ++i) comb.coeffs[i] = x1.coeffs[i] + s * x2.coeffs[i];
    CHECK(pairing(comb, p) == pairing(x1, p) + s * pairing(x2, p));
  }
}

TEST_CASE("coadjoint action") {
  Rng rng(9);
  PrincipalPart<Rational> a(2, 3, DualTag::Full);
  for (auto& c : a.coeffs) c = testing::random_matq(rng, 2, 2);
  auto same = coadjoint(JetMatrix<Rational>::identity(2, 3), a);
  for (std::size_t i = 0; i < 3; ++i) CHECK(same.coeffs[i] == a.coeffs[i]);

  // k = 2 polar: only the top slot exists, unipotent jets fix it
  PrincipalPart<Rational> top(2, 2, DualTag::Polar);
  top.coeffs[1] = testing::random_matq(rng, 2, 2);
  auto moved = coadjoint(testing::random_unipotent<Rational>(rng, 2, 2), top);
  CHECK(moved.coeffs[1] == top.coeffs[1]);
  CHECK(moved.coeffs[0].is_zero());

  // dT = diag(-2, 2) z^-3 dz, g = 1 + q z E21  ->  dT - 4 q E21 z^-2 dz
  Rational q = Rational::frac(5, 3, 1, 2);
  PrincipalPart<Rational> dT(2, 3, DualTag::Polar);
  dT.coeffs[2] = Rational(-2) * E(2, 1, 1) + Rational(2) * E(2, 2, 2);
  auto g = jet(2, {MatQ::identity(2), q * E(2, 2, 1), MatQ(2, 2)});
  auto b = coadjoint(g, dT);
  CHECK(b.coeffs[2] == dT.coeffs[2]);
  CHECK(b.coeffs[1] == Rational(-4) * q * E(2, 2, 1));
}

TEST_CASE("coadjoint is a left action dual to conjugation") {
  Rng rng(21);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 3, k = 4;
    auto g = testing::random_invertible_jet<Rational>(rng, n, k);
    auto h = testing::random_invertible_jet<Rational>(rng, n, k);
    PrincipalPart<Rational> a(n, k, t % 2 ? DualTag::Full : DualTag::Polar);
    for (std::size_t i = a.first_slot(); i < k; ++i) a.coeffs[i] = testing::random_matq(rng, n, n);

    auto lhs = coadjoint(g, coadjoint(h, a));
    auto rhs = coadjoint(jet_mul(g, h), a);
    for (std::size_t i = 0; i < k; ++i) CHECK(lhs.coeffs[i] == rhs.coeffs[i]);

    if (a.tag == DualTag::Full) {
      JetMatrix<Rational> x(n, k);
      for (auto& c : x.coeffs) c = testing::random_matq(rng, n, n);
      CHECK(pairing(jet_conjugate(g, x), a) == pairing(x, coadjoint(jet_inv(g), a)));
    }
  }
}

TEST_CASE("gauge action") {
  // identity gauge
  Rng rng(4);
  ConnectionJet<Rational> a(2, 2, 4);
  for (auto& c : a.coeffs) c = testing::random_matq(rng, 2, 2);
  auto same = gauge(JetMatrix<Rational>::identity(2, 5), a);
  for (std::size_t i = 0; i <= 4; ++i) CHECK(same.coeffs[i] == a.coeffs[i]);

  // scalar case: exp(z x) adds x dz
  ConnectionJet<Rational> s(1, 2, 3);
  s.coeffs[0](0, 0) = Rational(3);
  s.coeffs[1](0, 0) = Rational(-1);
  MatQ x(1, 1);
  x(0, 0) = Rational::frac(2, 5);
  auto s2 = gauge(jet_exp(x, 1, 4), s);
  CHECK(s2.coeffs[0] == s.coeffs[0]);
  CHECK(s2.coeffs[1] == s.coeffs[1]);
  CHECK(s2.coeffs[2](0, 0) == Rational::frac(2, 5));

  // A = (diag(1,-1) + z E12) z^-2 dz, g = exp(z E12 / 2) kills the off-diagonal residue
  ConnectionJet<Rational> c(2, 2, 3);
  c.coeffs[0] = E(2, 1, 1) - E(2, 2, 2);
  c.coeffs[1] = E(2, 1, 2);
  auto c2 = gauge(jet_exp(Rational::frac(1, 2) * E(2, 1, 2), 1, 4), c);
  CHECK(c2.coeffs[0] == c.coeffs[0]);
  CHECK(c2.coeffs[1].is_zero());

  // action law g[h[A]] = (gh)[A]
  for (int t = 0; t < 5; ++t) {
    ConnectionJet<Rational> b(3, 3, 5);
    for (auto& m : b.coeffs) m = testing::random_matq(rng, 3, 3);
    auto g = testing::random_invertible_jet<Rational>(rng, 3, 6);
    auto h = testing::random_invertible_jet<Rational>(rng, 3, 6);
    auto lhs = gauge(g, gauge(h, b));
    auto rhs = gauge(jet_mul(g, h), b);
    REQUIRE(lhs.depth() == 5);
    for (std::size_t i = 0; i <= 5; ++i) CHECK(lhs.coeffs[i] == rhs.coeffs[i]);
  }

  // trusted depth bookkeeping
  ConnectionJet<Rational> deep(2, 3, 6);
  CHECK(gauge(JetMatrix<Rational>::identity(2, 4), deep).depth() == 3);
  CHECK_THROWS_AS(gauge(JetMatrix<Rational>::identity(2, 2), deep), DepthError);
}

TEST_CASE("float backend associativity") {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    auto a = testing::random_invertible_jet<Complex>(rng, 3, 4);
    auto b = testing::random_invertible_jet<Complex>(rng, 3, 4);
    auto c = testing::random_invertible_jet<Complex>(rng, 3, 4);
    auto l = jet_mul(jet_mul(a, b), c);
    auto r = jet_mul(a, jet_mul(b, c));
    CHECK(testing::jet_diff(l, r) <= 1e-12 * l.norm());
  }
}
