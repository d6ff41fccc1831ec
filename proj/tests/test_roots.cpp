#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "dsq/roots.hpp"
#include "support.hpp"

using namespace dsq;
using testing::Rng;

namespace {

Quiver make_quiver(std::size_t nv, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  Quiver q;
  for (std::size_t i = 0; i < nv; ++i) q.add_vertex("v" + std::to_string(i));
  std::size_t k = 0;
  for (auto [s, t] : edges) q.add_arrow("a" + std::to_string(k++), s, t);
  return q;
}

std::vector<Rational> zeros(std::size_t n) { return std::vector<Rational>(n, Rational(0)); }

// Every vector 0 <= w <= bound (componentwise), bound given per coordinate.
std::vector<DimVector> box(std::size_t n, long bound) {
  std::vector<DimVector> out;
  DimVector w(n, 0);
  for (;;) {
    out.push_back(w);
    std::size_t i = 0;
    while (i < n && w[i] == bound) w[i++] = 0;
    if (i == n) return out;
    ++w[i];
  }
}

}  // namespace

TEST_CASE("is_positive_root examples") {
  Quiver single = make_quiver(1, {});
  CHECK(is_positive_root(single, {1}));
  CHECK_FALSE(is_positive_root(single, {2}));

  Quiver a2 = make_quiver(2, {{0, 1}});
  CHECK(is_positive_root(a2, {1, 0}));
  CHECK(is_positive_root(a2, {1, 1}));
  CHECK_FALSE(is_positive_root(a2, {2, 1}));
  CHECK_FALSE(is_positive_root(a2, {0, 0}));
  CHECK_THROWS_AS(is_positive_root(a2, {-1, 1}), std::invalid_argument);

  Quiver looped = make_quiver(1, {{0, 0}});
  CHECK_THROWS_AS(is_positive_root(looped, {1}), std::invalid_argument);

  // wild star: (2,1,1,1,1,1) lies in the fundamental region
  Quiver star5 = make_quiver(6, {{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}});
  CHECK(is_positive_root(star5, {2, 1, 1, 1, 1, 1}));
  // disconnected support is never an imaginary root
  Quiver two_kron = make_quiver(4, {{0, 1}, {0, 1}, {0, 1}, {2, 3}, {2, 3}, {2, 3}});
  CHECK(is_positive_root(two_kron, {1, 1, 0, 0}));
  CHECK_FALSE(is_positive_root(two_kron, {1, 1, 1, 1}));
}

TEST_CASE("positive roots of Dynkin and affine quivers are the vectors with q in {0, 1}") {
  struct Case {
    Quiver q;
    long bound;
  };
  std::vector<Case> cases{
      {make_quiver(3, {{0, 1}, {1, 2}}), 3},                          // A3
      {make_quiver(4, {{1, 0}, {2, 0}, {3, 0}}), 3},                  // D4
      {make_quiver(5, {{1, 0}, {2, 0}, {3, 0}, {4, 0}}), 3},          // affine D4
      {make_quiver(3, {{0, 1}, {1, 2}, {2, 0}}), 3},                  // affine A2
      {make_quiver(2, {{0, 1}, {0, 1}}), 4},                          // Kronecker
      {make_quiver(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}), 2},          // affine A3
  };
  for (const auto& c : cases) {
    CartanData cd(c.q);
    for (const auto& v : box(c.q.num_vertices(), c.bound)) {
      if (std::all_of(v.begin(), v.end(), [](long x) { return x == 0; })) continue;
      long qv = cd.tits_form(v);
      CHECK(is_positive_root(cd, v) == (qv == 0 || qv == 1));
    }
  }
}

TEST_CASE("delta equals 1 - q") {
  Rng rng(7);
  std::uniform_int_distribution<int> nv_d(1, 5), e_d(0, 6);
  std::uniform_int_distribution<long> val(0, 4);
  for (int t = 0; t < 100; ++t) {
    std::size_t nv = static_cast<std::size_t>(nv_d(rng));
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::uniform_int_distribution<std::size_t> vd(0, nv - 1);
    for (int e = e_d(rng); e > 0; --e) {
      std::size_t s = vd(rng), u = vd(rng);
      if (s != u) edges.emplace_back(s, u);
    }
    Quiver q = make_quiver(nv, edges);
    DimVector v(nv);
    for (auto& x : v) x = val(rng);
    CHECK(delta(q, v) == 1 - CartanData(q).tits_form(v));
    for (std::size_t i = 0; i < nv; ++i) {
      DimVector e(nv, 0);
      e[i] = 1;
      CHECK(CartanData(q).tits_form(e) == 1);
    }
  }
}

TEST_CASE("is_positive_root is invariant under relabeling") {
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    std::size_t nv = 4;
    std::vector<std::pair<std::size_t, std::size_t>> edges{{0, 1}, {1, 2}, {2, 3}, {1, 3}, {0, 2}};
    edges.resize(2 + static_cast<std::size_t>(t % 4));
    std::vector<std::size_t> perm(nv);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<std::size_t, std::size_t>> pedges;
    for (auto [s, u] : edges) pedges.emplace_back(perm[s], perm[u]);
    Quiver q = make_quiver(nv, edges), p = make_quiver(nv, pedges);
    std::uniform_int_distribution<long> val(0, 3);
    DimVector v(nv), pv(nv);
    for (std::size_t i = 0; i < nv; ++i) v[i] = val(rng);
    if (std::all_of(v.begin(), v.end(), [](long x) { return x == 0; })) v[0] = 1;
    for (std::size_t i = 0; i < nv; ++i) pv[perm[i]] = v[i];
    CHECK(is_positive_root(q, v) == is_positive_root(p, pv));
  }
}

TEST_CASE("summand_candidates") {
  Quiver a2 = make_quiver(2, {{0, 1}});
  Rational c = Rational::frac(3, 2, 1, 1);
  CHECK(summand_candidates(a2, {1, 1}, {c, -c}) == std::vector<DimVector>{{1, 1}});
  CHECK(summand_candidates(a2, {1, 1}, zeros(2)) == std::vector<DimVector>{{0, 1}, {1, 0}, {1, 1}});
  // generic zeta: nothing vanishes
  CHECK(summand_candidates(a2, {1, 1}, {Rational(1), Rational(2)}).empty());
}

TEST_CASE("cb_solvable examples") {
  Quiver single = make_quiver(1, {});
  auto r1 = cb_solvable(single, {1}, {Rational(0)});
  CHECK(r1.verdict == Verdict::Nonempty);

  auto r2 = cb_solvable(single, {1}, {Rational(1)});
  CHECK(r2.verdict == Verdict::Empty);
  CHECK(r2.failed_condition == 2);

  Quiver a2 = make_quiver(2, {{0, 1}});
  auto r3 = cb_solvable(a2, {1, 1}, zeros(2));
  CHECK(r3.verdict == Verdict::Empty);
  CHECK(r3.failed_condition == 3);
  CHECK(r3.witness == std::vector<DimVector>{{1, 0}, {0, 1}});
  CHECK(r3.witness_delta_sum == 0);

  auto r4 = cb_solvable(a2, {2, 1}, zeros(2));
  CHECK(r4.verdict == Verdict::Empty);
  CHECK(r4.failed_condition == 1);

  Rational c(5);
  auto r5 = cb_solvable(a2, {1, 1}, {c, -c});
  CHECK(r5.verdict == Verdict::Nonempty);
}

TEST_CASE("cb_solvable on star-shaped quivers") {
  // affine D4 at delta: imaginary root with Delta = 1
  Quiver d4 = make_quiver(5, {{1, 0}, {2, 0}, {3, 0}, {4, 0}});
  DimVector delta_v{2, 1, 1, 1, 1};
  std::vector<Rational> generic{Rational(-2), Rational(1), Rational(1), Rational(1), Rational(1)};
  generic[1] = Rational::frac(1, 3);
  generic[2] = Rational::frac(5, 7);
  generic[3] = Rational::frac(11, 13);
  generic[4] = Rational(4) - generic[1] - generic[2] - generic[3];  // zeta . v = 0
  auto r = cb_solvable(d4, delta_v, generic);
  CHECK(r.verdict == Verdict::Nonempty);
  CHECK(r.delta_v == 1);

  // zeta = 0: every proper decomposition of delta uses real roots only, so
  // its Delta sum is 0 < 1.
  auto r0 = cb_solvable(d4, delta_v, zeros(5));
  CHECK(r0.verdict == Verdict::Nonempty);

  // 2 delta with zeta = 0: delta + delta has Delta sum 2 >= Delta(2 delta) = 1
  DimVector two_delta{4, 2, 2, 2, 2};
  auto r2 = cb_solvable(d4, two_delta, zeros(5));
  CHECK(r2.verdict == Verdict::Empty);
  CHECK(r2.failed_condition == 3);
  CHECK(r2.witness == std::vector<DimVector>{delta_v, delta_v});
}

TEST_CASE("cb_solvable rejects nonzero zeta . v before searching") {
  Rng rng(23);
  Quiver q = make_quiver(4, {{1, 0}, {2, 0}, {3, 0}});
  std::uniform_int_distribution<long> zd(-5, 5);
  for (int t = 0; t < 40; ++t) {
    std::vector<Rational> zeta(4);
    for (auto& z : zeta) z = Rational(zd(rng));
    DimVector v{2, 1, 1, 1};
    Rational dot = zeta_dot(zeta, v);
    auto r = cb_solvable(q, v, zeta);
    if (!dot.is_zero()) {
      CHECK(r.verdict == Verdict::Empty);
      CHECK(r.failed_condition == 2);
      CHECK(r.states_explored == 0);
    } else {
      CHECK(r.failed_condition != 2);
    }
  }
}

TEST_CASE("cb_solvable reports undecided when the search cap is hit") {
  Quiver d4 = make_quiver(5, {{1, 0}, {2, 0}, {3, 0}, {4, 0}});
  CriterionOptions tiny;
  tiny.max_states = 2;
  auto r = cb_solvable(d4, {4, 2, 2, 2, 2}, zeros(5), tiny);
  CHECK(r.verdict == Verdict::Undecided);
  CHECK(r.failed_condition == 0);
}
