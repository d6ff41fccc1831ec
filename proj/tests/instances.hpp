#pragma once

// Small problem instances shared by the assembly tests and the acceptance run.

#include <string>
#include <vector>

#include "dsq/assembly.hpp"
#include "support.hpp"

namespace dsq::testing {

inline Rational q(long a) { return Rational(a); }

inline OrbitSpec<Rational> semisimple(std::vector<std::pair<long, std::size_t>> values) {
  std::vector<EigenBlocks<Rational>> e;
  for (auto [v, m] : values) e.push_back({q(v), std::vector<std::size_t>(m, 1)});
  return orbit_from_jordan(e);
}

inline OrbitSpec<Rational> scalar_orbit(long v, std::size_t n = 1) { return semisimple({{v, n}}); }

inline IrregularBlock<Rational> block(std::initializer_list<long> c, std::size_t mult = 1) {
  IrregularBlock<Rational> b;
  for (long x : c) b.coeffs.push_back(q(x));
  b.mult = mult;
  return b;
}

/// n = 2, k = 2, exponents lam1, lam2 at infinity, one pole with a rank-one
/// semisimple residue diag(mu1, mu2). Global quiver: the star p1, p2 <- [t1,1].
inline ProblemInstance<Rational> star(long lam1, long lam2, long mu1, long mu2, long pos = 0) {
  ProblemInstance<Rational> inst;
  inst.n = 2;
  inst.irregular = IrregularType<Rational>(2, {block({-1}), block({1})});
  inst.residue_blocks = {scalar_orbit(lam1), scalar_orbit(lam2)};
  inst.poles.push_back({q(pos), semisimple({{mu1, 1}, {mu2, 1}})});
  return inst;
}

/// Two poles of the star kind: four vertices, v = (1,1,1,1), Delta = 1.
inline ProblemInstance<Rational> star2(long lam1, long lam2, long mu1, long mu2, long nu1, long nu2) {
  auto inst = star(lam1, lam2, mu1, mu2);
  inst.poles.push_back({q(1), semisimple({{nu1, 1}, {nu2, 1}})});
  return inst;
}

/// n = 2, k = 4, T_3 = diag(-1, 1): two vertices and a double arrow.
inline ProblemInstance<Rational> double_arrow(long lam1, long lam2) {
  ProblemInstance<Rational> inst;
  inst.n = 2;
  inst.irregular = IrregularType<Rational>(4, {block({0, 0, -1}), block({0, 0, 1})});
  inst.residue_blocks = {scalar_orbit(lam1), scalar_orbit(lam2)};
  return inst;
}

inline OrbitSpec<Rational> random_orbit(Rng& rng, std::size_t n) { return orbit_from_jordan(random_jordan(rng, n)); }

/// Random instance: k in 2..4, up to three blocks, up to three finite poles.
inline ProblemInstance<Rational> random_instance(Rng& rng, std::size_t max_n = 4) {
  std::uniform_int_distribution<std::size_t> kd(2, 4), bd(1, 3), pd(0, 3), md(1, 2);
  std::uniform_int_distribution<long> cd(-2, 2);
  for (;;) {
    const std::size_t k = kd(rng), nb = bd(rng);
    std::vector<IrregularBlock<Rational>> bl(nb);
    std::size_t n = 0;
    for (auto& b : bl) {
      for (std::size_t i = 1; i < k; ++i) b.coeffs.push_back(q(cd(rng)));
      b.mult = md(rng);
      n += b.mult;
    }
    if (n > max_n) continue;
    ProblemInstance<Rational> inst;
    try {
      inst.irregular = IrregularType<Rational>(k, bl);
    } catch (const std::invalid_argument&) {
      continue;
    }
    inst.n = n;
    for (const auto& b : bl) inst.residue_blocks.push_back(random_orbit(rng, b.mult));
    const std::size_t np = pd(rng);
    for (std::size_t t = 0; t < np; ++t) inst.poles.push_back({q(static_cast<long>(t) * 2 - 1), random_orbit(rng, n)});
    return inst;
  }
}

struct Curated {
  std::string name;
  ProblemInstance<Rational> inst;
};

/// Instances with n <= 3 and k <= 4, nonempty and empty ones.
inline std::vector<Curated> curated_instances() {
  std::vector<Curated> out;
  out.push_back({"rigid star", star(1, 2, -5, 2)});
  out.push_back({"rigid star, shifted", star(3, -1, 2, -4)});
  out.push_back({"star, trace off", star(1, 2, -5, 3)});
  out.push_back({"star, resonant", star(2, 1, -3, 0)});
  out.push_back({"two-pole star", star2(1, 2, -5, 2, 3, -3)});
  out.push_back({"two-pole star, trace off", star2(1, 2, -5, 2, 3, -2)});
  out.push_back({"double arrow", double_arrow(3, -3)});
  out.push_back({"double arrow, zero exponents", double_arrow(0, 0)});
  out.push_back({"double arrow, trace off", double_arrow(3, -2)});
  {
    // one block of size 2 at infinity: no irregular interaction, one pole
    ProblemInstance<Rational> inst;
    inst.n = 2;
    inst.irregular = IrregularType<Rational>(2, {block({1}, 2)});
    inst.residue_blocks = {semisimple({{1, 1}, {2, 1}})};
    inst.poles.push_back({q(0), semisimple({{-1, 1}, {-2, 1}})});
    out.push_back({"single block, one pole", inst});
  }
  {
    ProblemInstance<Rational> inst;
    inst.n = 2;
    inst.irregular = IrregularType<Rational>(3, {block({0, 1}), block({0, -1})});
    inst.residue_blocks = {scalar_orbit(1), scalar_orbit(-1)};
    out.push_back({"k=3 pair, no poles", inst});
  }
  {
    ProblemInstance<Rational> inst;
    inst.n = 2;
    inst.irregular = IrregularType<Rational>(3, {block({0, 1}), block({0, -1})});
    inst.residue_blocks = {scalar_orbit(2), scalar_orbit(1)};
    inst.poles.push_back({q(0), semisimple({{-3, 1}, {0, 1}})});
    out.push_back({"k=3 pair, one pole", inst});
  }
  {
    ProblemInstance<Rational> inst;
    inst.n = 2;
    inst.irregular = IrregularType<Rational>(3, {block({1, 0}), block({-1, 0})});
    inst.residue_blocks = {scalar_orbit(1), scalar_orbit(-1)};
    out.push_back({"k=3, T_2 scalar, no poles", inst});
  }
  {
    ProblemInstance<Rational> inst;
    inst.n = 3;
    inst.irregular = IrregularType<Rational>(2, {block({1}), block({0}), block({-1})});
    inst.residue_blocks = {scalar_orbit(1), scalar_orbit(2), scalar_orbit(3)};
    inst.poles.push_back({q(0), semisimple({{-1, 2}, {-4, 1}})});
    out.push_back({"three blocks, one pole", inst});
  }
  {
    ProblemInstance<Rational> inst;
    inst.n = 3;
    inst.irregular = IrregularType<Rational>(2, {block({1}), block({0}), block({-1})});
    inst.residue_blocks = {scalar_orbit(1), scalar_orbit(2), scalar_orbit(3)};
    inst.poles.push_back({q(0), semisimple({{-1, 2}, {-4, 1}})});
    inst.poles.push_back({q(1), scalar_orbit(0, 3)});
    out.push_back({"three blocks, scalar second pole", inst});
  }
  {
    ProblemInstance<Rational> inst;
    inst.n = 3;
    inst.irregular = IrregularType<Rational>(3, {block({0, 1}), block({0, 0}), block({1, -1})});
    inst.residue_blocks = {scalar_orbit(1), scalar_orbit(-2), scalar_orbit(1)};
    out.push_back({"k=3 triple, no poles", inst});
  }
  {
    ProblemInstance<Rational> inst;
    inst.n = 3;
    inst.irregular = IrregularType<Rational>(4, {block({0, 0, 1}), block({0, 1, 0}), block({2, 0, 0})});
    inst.residue_blocks = {scalar_orbit(1), scalar_orbit(1), scalar_orbit(-2)};
    out.push_back({"k=4 triple, no poles", inst});
  }
  {
    ProblemInstance<Rational> inst;
    inst.n = 3;
    inst.irregular = IrregularType<Rational>(4, {block({0, 0, 1}), block({0, 1, 0}), block({2, 0, 0})});
    inst.residue_blocks = {scalar_orbit(1), scalar_orbit(1), scalar_orbit(-1)};
    out.push_back({"k=4 triple, trace off", inst});
  }
  {
    ProblemInstance<Rational> inst;
    inst.n = 3;
    inst.irregular = IrregularType<Rational>(2, {block({1}, 2), block({-1})});
    inst.residue_blocks = {semisimple({{0, 1}, {1, 1}}), scalar_orbit(2)};
    inst.poles.push_back({q(0), semisimple({{-3, 1}, {0, 2}})});
    out.push_back({"2+1 blocks, one pole", inst});
  }
  {
    ProblemInstance<Rational> inst;
    inst.n = 2;
    inst.irregular = IrregularType<Rational>(2, {block({1}), block({-1})});
    inst.residue_blocks = {scalar_orbit(0), scalar_orbit(0)};
    out.push_back({"k=2 pair, no poles", inst});
  }
  {
    ProblemInstance<Rational> inst;
    inst.n = 1;
    inst.irregular = IrregularType<Rational>(3, {block({4, 1})});
    inst.residue_blocks = {scalar_orbit(2)};
    inst.poles.push_back({q(0), scalar_orbit(-2)});
    out.push_back({"rank one", inst});
  }
  {
    ProblemInstance<Rational> inst;
    inst.n = 1;
    inst.irregular = IrregularType<Rational>(3, {block({4, 1})});
    inst.residue_blocks = {scalar_orbit(2)};
    inst.poles.push_back({q(0), scalar_orbit(-1)});
    out.push_back({"rank one, trace off", inst});
  }
  return out;
}

}  // namespace dsq::testing
