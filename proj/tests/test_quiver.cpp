#include "doctest.h"
#include "support.hpp"

using namespace dsq;
using testing::Rng;

namespace {

std::shared_ptr<const Quiver> single_vertex(std::size_t loops = 0) {
  auto q = std::make_shared<Quiver>();
  q->add_vertex("o");
  for (std::size_t l = 0; l < loops; ++l) q->add_arrow("l" + std::to_string(l), 0, 0);
  return q;
}

std::shared_ptr<const Quiver> star(std::size_t leaves) {
  auto q = std::make_shared<Quiver>();
  q->add_vertex("c");
  for (std::size_t i = 0; i < leaves; ++i) {
    q->add_vertex("x" + std::to_string(i));
    q->add_arrow("a" + std::to_string(i), i + 1, 0);
  }
  return q;
}

MatQ scalar1(const Rational& s) { return MatQ::scalar(1, s); }

}  // namespace

TEST_CASE("quiver bookkeeping") {
  Quiver q;
  q.add_vertex("p");
  q.add_vertex("r");
  q.add_arrow("a", "p", "r");
  q.add_arrow("b", "r", "p");
  CHECK(q.edge_count(0, 1) == 2);
  CHECK(q.arrow_count(0, 1) == 1);
  CHECK_FALSE(q.has_loops());
  CHECK(q.find_vertex("r") == 1u);
  CHECK_FALSE(q.find_vertex("zz").has_value());
  CHECK_THROWS_AS(q.add_vertex("p"), std::invalid_argument);
  CHECK_THROWS_AS(q.add_arrow("a", 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(q.add_arrow("c", "p", "nowhere"), std::invalid_argument);
  q.add_arrow("loop", 0, 0);
  CHECK(q.has_loops());
}

TEST_CASE("moment_map examples") {
  auto q = testing::line_quiver(2);
  DoubledRep<Rational> zero(q, {2, 3});
  for (const auto& m : moment_map(zero)) CHECK(m.is_zero());

  Rational x = Rational::frac(2, 3, 1, 1), y = Rational::frac(-5, 1, 1, 2);
  DoubledRep<Rational> r(q, {1, 1});
  r.fwd[0] = scalar1(x);
  r.rev[0] = scalar1(y);
  auto mu = moment_map(r);
  CHECK(mu[0](0, 0) == -(y * x));
  CHECK(mu[1](0, 0) == x * y);

  // moment level zeta_V forces zeta . v = 0
  std::vector<Rational> zeta{mu[0](0, 0), mu[1](0, 0)};
  CHECK(zeta_dot(zeta, DimVector{1, 1}).is_zero());
}

TEST_CASE("moment_map traces sum to zero") {
  Rng rng(3);
  auto q = star(3);
  for (int t = 0; t < 20; ++t) {
    DimVector d{3, 1, 2, 2};
    auto xq = testing::random_rep<Rational>(rng, q, d);
    Rational tq(0);
    for (const auto& m : moment_map(xq)) tq += m.trace();
    CHECK(tq.is_zero());

    auto xc = testing::random_rep<Complex>(rng, q, d);
    Complex tc(0);
    double scale = 0.0;
    for (const auto& m : moment_map(xc)) {
      tc += m.trace();
      scale += m.norm();
    }
    CHECK(std::abs(tc) <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("symplectic_form") {
  auto q = testing::line_quiver(2);
  DoubledRep<Rational> d1(q, {1, 1}), d2(q, {1, 1});
  d1.fwd[0] = scalar1(1);
  d2.rev[0] = scalar1(1);
  CHECK(symplectic_form(d1, d2) == Rational(1));
  CHECK(symplectic_form(d2, d1) == Rational(-1));
  CHECK(symplectic_form(d1, d1).is_zero());

  Rng rng(5);
  auto qs = star(2);
  DimVector d{2, 1, 3};
  for (int t = 0; t < 20; ++t) {
    auto a = testing::random_rep<Rational>(rng, qs, d);
    auto b = testing::random_rep<Rational>(rng, qs, d);
    CHECK(symplectic_form(a, b) == -symplectic_form(b, a));
    CHECK(symplectic_form(a, a).is_zero());
  }

  DoubledRep<Rational> other(qs, {1, 1, 1});
  CHECK_THROWS_AS(symplectic_form(other, testing::random_rep<Rational>(rng, qs, d)), std::invalid_argument);
}

TEST_CASE("symplectic_form is nondegenerate on the representation space") {
  Rng rng(8);
  auto q = star(2);
  DimVector d{2, 1, 2};
  DoubledRep<Rational> shape(q, d);
  // Coordinate basis of the representation space.
  std::vector<DoubledRep<Rational>> basis;
  for (std::size_t a = 0; a < shape.fwd.size(); ++a) {
    for (int side = 0; side < 2; ++side) {
      const MatQ& m = side == 0 ? shape.fwd[a] : shape.rev[a];
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
          DoubledRep<Rational> e(q, d);
          (side == 0 ? e.fwd[a] : e.rev[a])(i, j) = Rational(1);
          basis.push_back(e);
        }
    }
  }
  MatQ gram(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) gram(i, j) = symplectic_form(basis[i], basis[j]);
  CHECK(rank(gram) == basis.size());
  CHECK(gram == -gram.transpose());

  // Pulled back along a random invertible linear change of coordinates the
  // rank is unchanged.
  MatQ change = testing::random_matq(rng, basis.size(), basis.size());
  change += MatQ::scalar(basis.size(), Rational(20));
  CHECK(rank(change.transpose() * gram * change) == basis.size());
}

TEST_CASE("delta") {
  auto single = single_vertex();
  CHECK(delta(*single, {1}) == 0);
  auto a2 = testing::line_quiver(2);
  CHECK(delta(*a2, {1, 1}) == 0);
  CHECK(delta(*a2, {1, 0}) == 0);
  auto dbl = testing::line_quiver(2, 2);
  CHECK(delta(*dbl, {1, 1}) == 1);
  CHECK(delta(*star(3), {2, 1, 1, 1}) == 0);
  CHECK(delta(*star(4), {2, 1, 1, 1, 1}) == 1);
}

TEST_CASE("is_stable examples") {
  DoubledRep<Rational> point(single_vertex(), {1});
  CHECK(is_stable(point));

  DoubledRep<Rational> a2(testing::line_quiver(2), {1, 1});
  a2.fwd[0] = scalar1(1);
  CHECK_FALSE(is_stable(a2));
  a2.rev[0] = scalar1(1);
  CHECK(is_stable(a2));

  DoubledRep<Rational> m2(single_vertex(1), {2});
  m2.fwd[0] = MatQ::unit(2, 2, 0, 1);
  m2.rev[0] = MatQ::unit(2, 2, 1, 0);
  CHECK(is_stable(m2));
  m2.rev[0] = MatQ(2, 2);
  CHECK_FALSE(is_stable(m2));

  DoubledRep<Rational> empty(testing::line_quiver(2), {0, 0});
  CHECK_THROWS_AS(is_stable(empty), std::invalid_argument);

  // a zero-dimensional vertex is kept and does not affect the verdict
  DoubledRep<Rational> with_zero(testing::line_quiver(3), {1, 1, 0});
  with_zero.fwd[0] = scalar1(2);
  with_zero.rev[0] = scalar1(3);
  CHECK(is_stable(with_zero));
}

TEST_CASE("invariant_closure examples") {
  DoubledRep<Rational> a2(testing::line_quiver(2), {1, 1});
  a2.fwd[0] = scalar1(1);

  auto w0 = invariant_closure<Rational>(a2, {{1, {Rational(0)}}});
  CHECK(w0.is_zero());

  auto w1 = invariant_closure<Rational>(a2, {{1, {Rational(1)}}});
  CHECK(w1.dims() == DimVector{0, 1});

  auto w2 = invariant_closure<Rational>(a2, {{0, {Rational(1)}}});
  CHECK(w2.dims() == DimVector{1, 1});

  auto w3 = invariant_closure<Rational>(a2, {{0, {Rational(1)}}, {1, {Rational(1)}}});
  CHECK(w3.dims() == DimVector{1, 1});
}

TEST_CASE("invariant_closure is invariant and idempotent") {
  Rng rng(21);
  auto q = star(2);
  DimVector d{3, 2, 2};
  for (int t = 0; t < 20; ++t) {
    auto x = testing::random_rep<Rational>(rng, q, d);
    // make the maps degenerate so proper closures occur
    x.rev[0] = MatQ(2, 3);
    x.rev[1] = MatQ(2, 3);
    auto w = invariant_closure<Rational>(x, {{1, testing::random_vec<Rational>(rng, 2)}});
    std::vector<VertexVector<Rational>> seeds;
    for (std::size_t i = 0; i < w.bases.size(); ++i)
      for (std::size_t c = 0; c < w.bases[i].cols(); ++c) {
        std::vector<Rational> col;
        for (std::size_t r = 0; r < w.bases[i].rows(); ++r) col.push_back(w.bases[i](r, c));
        seeds.emplace_back(i, col);
      }
    CHECK(invariant_closure(x, seeds).dims() == w.dims());
    CHECK(w.dims()[2] == 0);
  }
}

TEST_CASE("stability with a margin ignores tiny maps") {
  DoubledRep<Complex> a2(testing::line_quiver(2), {1, 1});
  a2.fwd[0] = MatC::scalar(1, Complex(3e-6));
  a2.rev[0] = MatC::scalar(1, Complex(2.0));
  CHECK(is_stable(a2));
  CHECK_FALSE(is_stable_with_margin(a2, 1e-4));
  a2.fwd[0] = MatC::scalar(1, Complex(0.5));
  CHECK(is_stable_with_margin(a2, 1e-4));
  // the margin is relative to the largest map
  a2.fwd[0] = MatC::scalar(1, Complex(3e-3));
  a2.rev[0] = MatC::scalar(1, Complex(1e-2));
  CHECK(is_stable_with_margin(a2, 1e-4));

  DoubledRep<Rational> q2(testing::line_quiver(2), {1, 1});
  q2.fwd[0] = scalar1(1);
  q2.rev[0] = MatQ::scalar(1, Rational::frac(1, 1000000000));
  CHECK(is_stable_with_margin(q2, 1e-4));
}

TEST_CASE("stable representations are generated by any nonzero vector") {
  Rng rng(34);
  auto q = star(3);
  DimVector d{2, 1, 1, 1};
  auto x = testing::random_rep<Rational>(rng, q, d);
  REQUIRE(is_stable(x));
  auto xc = x.cast<Complex>();
  REQUIRE(is_stable(xc));
  std::uniform_int_distribution<std::size_t> pick(0, d.size() - 1);
  for (int t = 0; t < 100; ++t) {
    std::size_t v = pick(rng);
    auto seed = testing::random_vec<Rational>(rng, static_cast<std::size_t>(d[v]));
    bool nonzero = std::any_of(seed.begin(), seed.end(), [](const Rational& s) { return !s.is_zero(); });
    if (!nonzero) seed[0] = Rational(1);
    CHECK(invariant_closure<Rational>(x, {{v, seed}}).dims() == d);
    std::vector<Complex> cseed;
    for (const auto& s : seed) cseed.push_back(s.to_complex());
    CHECK(invariant_closure<Complex>(xc, {{v, cseed}}).dims() == d);
  }
}

TEST_CASE("is_stable is invariant under the group action") {
  Rng rng(55);
  auto q = star(2);
  DimVector d{2, 1, 1};
  for (int t = 0; t < 20; ++t) {
    auto x = testing::random_rep<Rational>(rng, q, d);
    if (t % 2 == 0) x.rev[1] = MatQ(1, 2);  // unstable half of the time: x1 has no path back
    if (t % 2 == 0) x.fwd[1] = MatQ(2, 1);
    std::vector<MatQ> g;
    for (long di : d) g.push_back(testing::random_matq(rng, di, di) + MatQ::scalar(di, Rational(9)));
    auto y = act(g, x);
    CHECK(is_stable(x) == is_stable(y));
    CHECK(is_stable(x) == (t % 2 != 0));
    // the moment map is equivariant: mu(g x) = g mu(x) g^{-1}
    auto mx = moment_map(x);
    auto my = moment_map(y);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(my[i] == g[i] * mx[i] * inverse(g[i]));
  }
}

TEST_CASE("exact and complex stability agree") {
  Rng rng(89);
  auto q = testing::line_quiver(3);
  for (int t = 0; t < 30; ++t) {
    DimVector d{1 + t % 2, 2, 1};
    auto x = testing::random_rep<Rational>(rng, q, d);
    if (t % 3 == 0) x.rev[1] = MatQ(2, 1);
    CHECK(is_stable(x) == is_stable(x.cast<Complex>()));
  }
}

TEST_CASE("parallel and serial density kernels agree") {
  Rng rng(144);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 2 + static_cast<std::size_t>(t % 3);
    std::vector<MatQ> gens;
    // block upper triangular generators sometimes, so both verdicts occur
    for (int g = 0; g < 2; ++g) {
      MatQ m = testing::random_matq(rng, n, n);
      if (t % 2 == 0) m(n - 1, 0) = Rational(0);
      if (t % 2 == 0)
        for (std::size_t c = 0; c + 1 < n; ++c) m(n - 1, c) = Rational(0);
      gens.push_back(m);
    }
    DensityOptions full_scan;
    full_scan.stop_when_full = false;
    CHECK(algebra_dimension(gens, n, full_scan) == algebra_dimension_serial(gens, n, full_scan));
    std::vector<MatC> cg;
    for (const auto& m : gens) cg.push_back(m.cast<Complex>());
    CHECK(algebra_dimension(cg, n, full_scan) == algebra_dimension_serial(cg, n, full_scan));
    CHECK(algebra_dimension(cg, n, full_scan) == algebra_dimension(gens, n, full_scan));
    CHECK(is_dense(gens, n) == (t % 2 != 0));
  }
}
