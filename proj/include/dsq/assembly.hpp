#pragma once

// Global quiver of a connection on the trivial bundle over P^1 with one
// irregular pole at infinity and simple poles at finite positions, and the
// dictionary between such connections and doubled representations.
//
// Coordinates: A = (sum_i A_i z^i + sum_t R_t / (z - z_t)) dz. At infinity the
// local coordinate is w = 1/z, where the polar part is B with
// B_{i+1} = -A_i (slot i+1 multiplies w^{-i-2} dw) and residue -sum_t R_t.
// Matrices use the coordinates of the irregular type, blocks in sorted order.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsq/irregular.hpp"
#include "dsq/orbits.hpp"
#include "dsq/quiver.hpp"
#include "dsq/reduction.hpp"
#include "dsq/roots.hpp"

namespace dsq {

/// Data that does not match the declared orbits; the message names the pole.
class MembershipError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A representation that violates the moment equations or a leg condition.
class RepresentationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class S>
struct FinitePole {
  S position;
  OrbitSpec<S> orbit;
};

template <class S>
struct ProblemInstance {
  std::size_t n = 0;
  IrregularType<S> irregular;
  std::vector<OrbitSpec<S>> residue_blocks;  // exponent on each block, input order
  std::vector<FinitePole<S>> poles;

  void validate() const {
    if (n != irregular.n()) throw std::invalid_argument("instance: rank does not match the irregular type");
    if (residue_blocks.size() != irregular.num_blocks())
      throw std::invalid_argument("instance: one residue orbit per irregular block is required");
    for (std::size_t p = 0; p < irregular.num_blocks(); ++p) {
      const auto& spec = residue_blocks[irregular.input_index(p)];
      if (spec.n != irregular.block(p).mult)
        throw std::invalid_argument("instance: residue orbit of block " + std::to_string(irregular.input_index(p) + 1) +
                                    " has size " + std::to_string(spec.n) + ", block multiplicity is " +
                                    std::to_string(irregular.block(p).mult));
    }
    for (std::size_t t = 0; t < poles.size(); ++t) {
      if (poles[t].orbit.n != n)
        throw std::invalid_argument("instance: orbit at finite pole " + std::to_string(t + 1) + " has the wrong size");
      for (std::size_t u = 0; u < t; ++u)
        if (ScalarTraits<S>::equal(poles[t].position, poles[u].position, 0.0))
          throw std::invalid_argument("instance: finite poles " + std::to_string(u + 1) + " and " + std::to_string(t + 1) +
                                      " coincide");
    }
  }

  /// Orbit of the exponent on sorted block p.
  const OrbitSpec<S>& block_orbit(std::size_t p) const { return residue_blocks[irregular.input_index(p)]; }

  template <class T>
  ProblemInstance<T> cast() const {
    ProblemInstance<T> out;
    out.n = n;
    out.irregular = irregular.template cast<T>();
    for (const auto& s : residue_blocks) out.residue_blocks.push_back(s.template cast<T>());
    for (const auto& p : poles)
      out.poles.push_back({Matrix<S>::scalar(1, p.position).template cast<T>()(0, 0), p.orbit.template cast<T>()});
    return out;
  }
};

/// Vertices [., 1], [., 2], ... of one leg and the arrows touching them.
struct LegLayout {
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> down;    // down[j]: vertices[j+1] -> vertices[j]
  std::vector<std::size_t> attach;  // vertices[0] -> core vertex, one per core vertex it meets
};

template <class S>
struct GlobalQuiver {
  std::shared_ptr<const Quiver> quiver;
  DimVector v;
  std::vector<S> zeta;
  CoreQuiver core;                // its vertices and arrows come first, same indices
  std::vector<LegLayout> blocks;  // per sorted block p; attach = {[p,1] -> p}
  std::vector<LegLayout> poles;   // per finite pole; attach[p] = [t,1] -> p

  std::size_t num_core_arrows() const { return core.labels.size(); }

  S zeta_dot_v() const {
    S s(0);
    for (std::size_t i = 0; i < v.size(); ++i) s += zeta[i] * S(v[i]);
    return s;
  }
};

template <class S>
GlobalQuiver<S> build_global_quiver(const ProblemInstance<S>& inst) {
  inst.validate();
  const auto& t = inst.irregular;
  GlobalQuiver<S> g;
  g.core = core_quiver(t);
  auto q = std::make_shared<Quiver>(*g.core.quiver);
  g.v = g.core.dims;

  S lam_sum(0);
  for (const auto& pole : inst.poles) lam_sum += pole.orbit.marking.front();
  for (std::size_t p = 0; p < t.num_blocks(); ++p) g.zeta.push_back(-inst.block_orbit(p).marking.front() - lam_sum);

  auto add_leg = [&](const std::string& tag, const OrbitSpec<S>& spec, const std::vector<std::size_t>& anchors,
                     const std::vector<std::string>& anchor_names) {
    LegLayout leg;
    const auto dims = leg_dimensions(spec);
    for (std::size_t l = 1; l <= dims.size(); ++l) {
      const std::string name = "[" + tag + "," + std::to_string(l) + "]";
      leg.vertices.push_back(q->add_vertex(name));
      g.v.push_back(static_cast<long>(dims[l - 1]));
      g.zeta.push_back(spec.marking[l - 1] - spec.marking[l]);
      if (l == 1) {
        for (std::size_t a = 0; a < anchors.size(); ++a)
          leg.attach.push_back(q->add_arrow(name + "->" + anchor_names[a], leg.vertices[0], anchors[a]));
      } else {
        leg.down.push_back(q->add_arrow(name + "->[" + tag + "," + std::to_string(l - 1) + "]", leg.vertices[l - 1],
                                        leg.vertices[l - 2]));
      }
    }
    return leg;
  };

  for (std::size_t p = 0; p < t.num_blocks(); ++p)
    g.blocks.push_back(add_leg(t.vertex_name(p), inst.block_orbit(p), {p}, {t.vertex_name(p)}));
  std::vector<std::size_t> all(t.num_blocks());
  std::vector<std::string> names;
  for (std::size_t p = 0; p < t.num_blocks(); ++p) {
    all[p] = p;
    names.push_back(t.vertex_name(p));
  }
  for (std::size_t j = 0; j < inst.poles.size(); ++j)
    g.poles.push_back(add_leg("t" + std::to_string(j + 1), inst.poles[j].orbit, all, names));
  g.quiver = std::move(q);
  return g;
}

/// sum over all poles (infinity included) of the trace of the exponent.
template <class S>
S total_exponent_trace(const ProblemInstance<S>& inst) {
  S s(0);
  for (const auto& b : inst.residue_blocks) s += b.trace();
  for (const auto& p : inst.poles) s += p.orbit.trace();
  return s;
}

struct DsVerdict {
  GlobalQuiver<Rational> quiver;
  CriterionResult criterion;
  std::optional<long> dimension;  // 2 Delta(v) when nonempty
};

/// Nonemptiness of the moduli space of stable connections with the given
/// formal data, decided on the global quiver.
DsVerdict decide_ds(const ProblemInstance<Rational>& inst, const CriterionOptions& opt = {});

template <class S>
struct ConnectionData {
  std::vector<Matrix<S>> poly;  // A_0 .. A_{k-2}
  std::vector<S> positions;
  std::vector<Matrix<S>> residues;

  std::size_t n() const { return poly.empty() ? 0 : poly.front().rows(); }

  Matrix<S> residue_at_infinity() const {
    Matrix<S> r(n(), n());
    for (const auto& m : residues) r -= m;
    return r;
  }

  /// Polar part at infinity in w = 1/z, pole order poly.size() + 1.
  PrincipalPart<S> polar_at_infinity() const {
    const std::size_t k = poly.size() + 1;
    PrincipalPart<S> b(n(), k, DualTag::Polar);
    for (std::size_t i = 0; i + 1 < k; ++i) b.coeffs[i + 1] = -poly[i];
    return b;
  }

  /// Laurent jet at infinity in w, coefficients w^{j-k} dw for j = 0..depth.
  ConnectionJet<S> at_infinity(std::size_t depth) const {
    const std::size_t k = poly.size() + 1;
    ConnectionJet<S> a(n(), k, depth);
    for (std::size_t i = 0; i + 1 < k; ++i) a.coeffs[k - 2 - i] = -poly[i];
    for (std::size_t m = 0; k - 1 + m <= depth; ++m) {
      Matrix<S> c(n(), n());
      for (std::size_t t = 0; t < residues.size(); ++t) {
        S pw(1);
        for (std::size_t e = 0; e < m; ++e) pw *= positions[t];
        c -= residues[t] * pw;
      }
      a.coeffs[k - 1 + m] = c;
    }
    return a;
  }

  template <class T>
  ConnectionData<T> cast() const {
    ConnectionData<T> out;
    for (const auto& m : poly) out.poly.push_back(m.template cast<T>());
    for (const auto& p : positions) out.positions.push_back(Matrix<S>::scalar(1, p).template cast<T>()(0, 0));
    for (const auto& m : residues) out.residues.push_back(m.template cast<T>());
    return out;
  }
};

struct ConversionOptions {
  double tol = 1e-8;  // moment residual relative to max(1, |x|^2); orbit reconstruction
  double rank_tol = 1e-8;  // complex rank decisions
  double stability_margin = 1e-4;  // complex stability decisions, see is_stable_with_margin
};

namespace detail {

template <class S>
std::size_t rank_of(const Matrix<S>& m, const ConversionOptions& opt) {
  if constexpr (ScalarTraits<S>::exact) {
    return rank(m);
  } else {
    return rank(m, RankPolicy{opt.rank_tol});
  }
}

template <class S>
double rep_norm2(const DoubledRep<S>& x) {
  double s = 0.0;
  for (std::size_t a = 0; a < x.fwd.size(); ++a) s += std::pow(x.fwd[a].norm(), 2) + std::pow(x.rev[a].norm(), 2);
  return s;
}

template <class S>
void check_rep_shape(const DoubledRep<S>& x, const GlobalQuiver<S>& g) {
  x.check_shapes();
  if (x.dims != g.v || x.quiver->num_arrows() != g.quiver->num_arrows())
    throw std::invalid_argument("representation does not live on the global quiver");
}

/// Maps of [t,1] into C^n (stacked rows) and out of it (stacked columns).
template <class S>
std::pair<Matrix<S>, Matrix<S>> pole_maps(const DoubledRep<S>& x, const GlobalQuiver<S>& g, const IrregularType<S>& t,
                                          std::size_t pole) {
  const auto& leg = g.poles[pole];
  const std::size_t n = t.n(), d = x.dim(leg.vertices[0]);
  Matrix<S> in(n, d), out(d, n);
  for (std::size_t p = 0; p < t.num_blocks(); ++p) {
    in.set_block(t.offset(p), 0, x.fwd[leg.attach[p]]);
    out.set_block(0, t.offset(p), x.rev[leg.attach[p]]);
  }
  return {in, out};
}

}  // namespace detail

/// The connection of a representation, without any check.
template <class S>
ConnectionData<S> assemble_connection(const DoubledRep<S>& x, const GlobalQuiver<S>& g, const ProblemInstance<S>& inst) {
  detail::check_rep_shape(x, g);
  const auto& t = inst.irregular;
  const std::size_t n = t.n(), k = t.k();
  DoubledRep<S> core(g.core.quiver, g.core.dims);
  for (std::size_t a = 0; a < g.num_core_arrows(); ++a) {
    core.fwd[a] = x.fwd[a];
    core.rev[a] = x.rev[a];
  }
  auto b = qp_to_orbit(rep_to_qp(core, t, g.core), t);
  ConnectionData<S> c;
  for (std::size_t i = 0; i + 1 < k; ++i) c.poly.push_back(-b.coeffs[i + 1]);
  for (std::size_t j = 0; j < inst.poles.size(); ++j) {
    c.positions.push_back(inst.poles[j].position);
    Matrix<S> r = Matrix<S>::scalar(n, inst.poles[j].orbit.marking.front());
    if (!g.poles[j].vertices.empty()) {
      auto [in, out] = detail::pole_maps(x, g, t, j);
      r += in * out;
    }
    c.residues.push_back(std::move(r));
  }
  return c;
}

/// Exponent at infinity on each sorted block: (R_inf)_pp - mu_core,p.
template <class S>
std::vector<Matrix<S>> exponent_blocks(const DoubledRep<S>& x, const GlobalQuiver<S>& g, const ConnectionData<S>& c,
                                       const IrregularType<S>& t) {
  DoubledRep<S> core(g.core.quiver, g.core.dims);
  for (std::size_t a = 0; a < g.num_core_arrows(); ++a) {
    core.fwd[a] = x.fwd[a];
    core.rev[a] = x.rev[a];
  }
  auto mu = moment_map(core);
  const Matrix<S> rinf = c.residue_at_infinity();
  std::vector<Matrix<S>> out;
  for (std::size_t p = 0; p < t.num_blocks(); ++p) {
    const std::size_t m = t.block(p).mult;
    out.push_back(rinf.block(t.offset(p), t.offset(p), m, m) - mu[p]);
  }
  return out;
}

/// Leg conditions: injective arrows into each leg's lower vertex and
/// surjective reverses; at [t,1] jointly over the core vertices.
template <class S>
std::optional<std::string> leg_violation(const DoubledRep<S>& x, const GlobalQuiver<S>& g, const IrregularType<S>& t,
                                         const ConversionOptions& opt = {}) {
  auto check_chain = [&](const LegLayout& leg, const std::string& who) -> std::optional<std::string> {
    for (std::size_t j = 0; j < leg.down.size(); ++j) {
      const std::size_t d = x.dim(leg.vertices[j + 1]);
      if (detail::rank_of(x.fwd[leg.down[j]], opt) != d || detail::rank_of(x.rev[leg.down[j]], opt) != d)
        return who + ": leg arrow " + g.quiver->arrow(leg.down[j]).id + " is not injective/surjective";
    }
    return std::nullopt;
  };
  for (std::size_t p = 0; p < g.blocks.size(); ++p) {
    const auto& leg = g.blocks[p];
    if (leg.vertices.empty()) continue;
    const std::size_t d = x.dim(leg.vertices[0]);
    if (detail::rank_of(x.fwd[leg.attach[0]], opt) != d || detail::rank_of(x.rev[leg.attach[0]], opt) != d)
      return "block " + t.vertex_name(p) + ": arrow " + g.quiver->arrow(leg.attach[0]).id + " is not injective/surjective";
    if (auto e = check_chain(leg, "block " + t.vertex_name(p))) return e;
  }
  for (std::size_t j = 0; j < g.poles.size(); ++j) {
    const auto& leg = g.poles[j];
    if (leg.vertices.empty()) continue;
    const std::size_t d = x.dim(leg.vertices[0]);
    auto [in, out] = detail::pole_maps(x, g, t, j);
    const std::string who = "finite pole t" + std::to_string(j + 1);
    if (detail::rank_of(in, opt) != d || detail::rank_of(out, opt) != d)
      return who + ": arrows out of [t" + std::to_string(j + 1) + ",1] are not jointly injective/surjective";
    if (auto e = check_chain(leg, who)) return e;
  }
  return std::nullopt;
}

template <class S>
bool within(double value, double tol, double scale) {
  if constexpr (ScalarTraits<S>::exact) {
    return value == 0.0;
  } else {
    return value <= tol * std::max(1.0, scale);
  }
}

/// The connection of a representation satisfying the moment equations and
/// the leg conditions. Every residue and exponent is checked against its orbit.
template <class S>
ConnectionData<S> rep_to_connection(const DoubledRep<S>& x, const GlobalQuiver<S>& g, const ProblemInstance<S>& inst,
                                    const ConversionOptions& opt = {}) {
  detail::check_rep_shape(x, g);
  const double res = moment_residual(x, g.zeta);
  if (!within<S>(res, opt.tol, detail::rep_norm2(x)))
    throw RepresentationError("moment equations fail (residual " + std::to_string(res) + ")");
  if (auto e = leg_violation(x, g, inst.irregular, opt)) throw RepresentationError(*e);
  auto c = assemble_connection(x, g, inst);
  const RankPolicy rp{opt.rank_tol};
  for (std::size_t j = 0; j < inst.poles.size(); ++j)
    if (!orbit_membership(c.residues[j], inst.poles[j].orbit, rp))
      throw MembershipError("finite pole t" + std::to_string(j + 1) + ": residue is not in the declared orbit");
  auto ex = exponent_blocks(x, g, c, inst.irregular);
  for (std::size_t p = 0; p < ex.size(); ++p)
    if (!orbit_membership(ex[p], inst.block_orbit(p), rp))
      throw MembershipError("pole at infinity, block " + inst.irregular.vertex_name(p) +
                            ": exponent is not in the declared orbit");
  return c;
}

/// A representation of a connection whose formal data matches the instance.
template <class S>
DoubledRep<S> connection_to_rep(const ConnectionData<S>& c, const GlobalQuiver<S>& g, const ProblemInstance<S>& inst,
                                const ConversionOptions& opt = {}) {
  const auto& t = inst.irregular;
  const std::size_t n = t.n(), k = t.k();
  if (c.n() != n || c.poly.size() + 1 != k) throw std::invalid_argument("connection shape does not match the instance");
  if (c.residues.size() != inst.poles.size() || c.positions.size() != inst.poles.size())
    throw std::invalid_argument("connection has the wrong number of finite poles");
  for (std::size_t j = 0; j < c.positions.size(); ++j)
    if (!ScalarTraits<S>::equal(c.positions[j], inst.poles[j].position, 1e-12))
      throw std::invalid_argument("finite pole t" + std::to_string(j + 1) + " sits at a different position");

  QPPair<S> qp;
  try {
    qp = orbit_to_qp(c.polar_at_infinity(), t, opt.tol);
  } catch (const OrbitMembershipError&) {
    throw MembershipError("pole at infinity: polar part is not in the orbit of dT");
  }
  DoubledRep<S> x(g.quiver, g.v);
  auto core = qp_to_rep(qp, t, g.core);
  for (std::size_t a = 0; a < g.num_core_arrows(); ++a) {
    x.fwd[a] = core.fwd[a];
    x.rev[a] = core.rev[a];
  }
  const RankPolicy rp{opt.rank_tol};

  auto place_chain = [&](const LegLayout& layout, const Leg<S>& leg, const std::string& who) {
    if (leg.vertices() != layout.vertices.size() + 1)
      throw MembershipError(who + ": leg length does not match the declared orbit");
    for (std::size_t j = 0; j < layout.down.size(); ++j) {
      x.fwd[layout.down[j]] = leg.inclusion[j + 1];
      x.rev[layout.down[j]] = leg.lowering[j + 1];
    }
  };

  for (std::size_t j = 0; j < inst.poles.size(); ++j) {
    const std::string who = "finite pole t" + std::to_string(j + 1);
    const auto& spec = inst.poles[j].orbit;
    if (!orbit_membership(c.residues[j], spec, rp)) throw MembershipError(who + ": residue is not in the declared orbit");
    const auto& layout = g.poles[j];
    if (layout.vertices.empty()) continue;
    auto leg = realize_leg(c.residues[j], spec.marking, opt.tol);
    place_chain(layout, leg, who);
    for (std::size_t p = 0; p < t.num_blocks(); ++p) {
      const std::size_t m = t.block(p).mult, d = leg.dims[1];
      x.fwd[layout.attach[p]] = leg.inclusion[0].block(t.offset(p), 0, m, static_cast<std::size_t>(d));
      x.rev[layout.attach[p]] = leg.lowering[0].block(0, t.offset(p), static_cast<std::size_t>(d), m);
    }
  }

  auto ex = exponent_blocks(x, g, c, t);
  for (std::size_t p = 0; p < t.num_blocks(); ++p) {
    const std::string who = "pole at infinity, block " + t.vertex_name(p);
    const auto& spec = inst.block_orbit(p);
    if (!orbit_membership(ex[p], spec, rp)) throw MembershipError(who + ": exponent is not in the declared orbit");
    const auto& layout = g.blocks[p];
    if (layout.vertices.empty()) continue;
    auto leg = realize_leg(ex[p], spec.marking, opt.tol);
    place_chain(layout, leg, who);
    x.fwd[layout.attach[0]] = leg.inclusion[0];
    x.rev[layout.attach[0]] = leg.lowering[0];
  }
  return x;
}

template <class S>
std::vector<Matrix<S>> connection_generators(const ConnectionData<S>& c) {
  std::vector<Matrix<S>> gens = c.poly;
  for (const auto& r : c.residues) gens.push_back(r);
  gens.push_back(c.residue_at_infinity());
  return gens;
}

/// No nonzero proper subspace of C^n invariant under every coefficient.
template <class S>
bool is_stable_connection(const ConnectionData<S>& c, const DensityOptions& opt = {}) {
  return is_dense(connection_generators(c), c.n(), opt);
}

template <class S>
bool is_stable_connection_with_margin(const ConnectionData<S>& c, double margin) {
  return is_dense_with_margin(connection_generators(c), c.n(), margin);
}

/// Jacobian of the moment map at x. Unknowns: per arrow the entries of fwd
/// then rev, row-major; equations: per vertex the entries of mu_i, row-major.
template <class S>
Matrix<S> moment_jacobian(const DoubledRep<S>& x) {
  const auto& arr = x.quiver->arrows();
  std::vector<std::size_t> row0, col0;
  std::size_t rows = 0, cols = 0;
  for (std::size_t i = 0; i < x.dims.size(); ++i) {
    row0.push_back(rows);
    rows += x.dim(i) * x.dim(i);
  }
  for (std::size_t a = 0; a < arr.size(); ++a) {
    col0.push_back(cols);
    cols += 2 * x.dim(arr[a].source) * x.dim(arr[a].target);
  }
  Matrix<S> j(rows, cols);
  for (std::size_t a = 0; a < arr.size(); ++a) {
    const std::size_t s = arr[a].source, t = arr[a].target, ds = x.dim(s), dt = x.dim(t);
    const Matrix<S>& f = x.fwd[a];  // dt x ds
    const Matrix<S>& r = x.rev[a];  // ds x dt
    const std::size_t fc = col0[a], rc = col0[a] + dt * ds;
    // mu_t += f r
    for (std::size_t u = 0; u < dt; ++u)
      for (std::size_t v = 0; v < dt; ++v) {
        const std::size_t row = row0[t] + u * dt + v;
        for (std::size_t m = 0; m < ds; ++m) {
          j(row, fc + u * ds + m) += r(m, v);
          j(row, rc + m * dt + v) += f(u, m);
        }
      }
    // mu_s -= r f
    for (std::size_t u = 0; u < ds; ++u)
      for (std::size_t v = 0; v < ds; ++v) {
        const std::size_t row = row0[s] + u * ds + v;
        for (std::size_t m = 0; m < dt; ++m) {
          j(row, rc + u * dt + m) -= f(m, v);
          j(row, fc + m * ds + v) -= r(u, m);
        }
      }
  }
  return j;
}

/// dim ker dmu at x; complex ranks at the given relative threshold.
template <class S>
std::size_t moment_kernel_dimension(const DoubledRep<S>& x, double rel_tol = 1e-6) {
  auto j = moment_jacobian(x);
  std::size_t r;
  if constexpr (ScalarTraits<S>::exact) {
    r = rank(j);
  } else {
    r = rank(j, RankPolicy{rel_tol});
  }
  return j.cols() - r;
}

struct RealizerOptions {
  std::size_t attempts = 50;
  std::size_t max_iterations = 500;
  std::uint64_t seed = 0;
  double tol = 1e-8;  // success: |mu - zeta| <= tol * max(1, |x|^2)
  bool require_stable = true;
  double stability_margin = 1e-4;  // see is_stable_with_margin
  double init_scale = 1.0;
};

struct RealizeResult {
  bool success = false;
  std::size_t attempt = 0;  // index of the winning restart
  std::size_t attempts_failed = 0;
  std::size_t iterations = 0;
  double residual = 0.0;
  DoubledRep<Complex> rep;
  std::string message;
};

/// Damped Gauss-Newton on the moment residual from random starts; the
/// restarts run in parallel and the lowest successful index wins, so the
/// result depends only on the seed.
RealizeResult realize_numeric(std::shared_ptr<const Quiver> q, const DimVector& v, const std::vector<Complex>& zeta,
                              const RealizerOptions& opt = {});
/// Serial reference of realize_numeric; same result.
RealizeResult realize_numeric_serial(std::shared_ptr<const Quiver> q, const DimVector& v,
                                     const std::vector<Complex>& zeta, const RealizerOptions& opt = {});

template <class S>
RealizeResult realize_numeric(const GlobalQuiver<S>& g, const RealizerOptions& opt = {}) {
  std::vector<Complex> z;
  for (const auto& s : g.zeta) z.push_back(ScalarTraits<S>::to_complex(s));
  return realize_numeric(g.quiver, g.v, z, opt);
}

struct CheckEntry {
  std::string name;
  bool ok = false;
  double value = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckEntry> checks;

  bool ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return !checks.empty();
  }
  const CheckEntry* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Every invariant of a point at once. Never throws on bad data.
template <class S>
VerifyReport verify_instance(const DoubledRep<S>& x, const ProblemInstance<S>& inst, const ConversionOptions& opt = {}) {
  VerifyReport rep;
  auto add = [&](std::string name, bool ok, double value, std::string detail = {}) {
    rep.checks.push_back({std::move(name), ok, value, std::move(detail)});
  };
  GlobalQuiver<S> g;
  try {
    g = build_global_quiver(inst);
    detail::check_rep_shape(x, g);
  } catch (const std::exception& e) {
    add("shape", false, 0.0, e.what());
    return rep;
  }
  add("shape", true, 0.0);
  const auto& t = inst.irregular;
  const double scale = detail::rep_norm2(x);

  const double res = moment_residual(x, g.zeta);
  add("moment_residual", within<S>(res, opt.tol, scale), res);
  auto legs = leg_violation(x, g, t, opt);
  add("leg_conditions", !legs, 0.0, legs.value_or(""));

  ConnectionData<S> c;
  try {
    c = assemble_connection(x, g, inst);
  } catch (const std::exception& e) {
    add("connection", false, 0.0, e.what());
    return rep;
  }
  const RankPolicy rp{opt.rank_tol};
  try {
    (void)orbit_to_qp(c.polar_at_infinity(), t, opt.tol);
    add("polar_orbit", true, 0.0);
  } catch (const std::exception& e) {
    add("polar_orbit", false, 0.0, e.what());
  }
  for (std::size_t j = 0; j < inst.poles.size(); ++j)
    add("residue_orbit[t" + std::to_string(j + 1) + "]", orbit_membership(c.residues[j], inst.poles[j].orbit, rp), 0.0);

  // exponent at infinity through formal reduction of the jet, independently of mu_core
  try {
    auto nf = normalize(c.at_infinity(t.k()), t, t.k(), {}, opt.tol);
    auto direct = exponent_blocks(x, g, c, t);
    for (std::size_t p = 0; p < t.num_blocks(); ++p) {
      const std::size_t m = t.block(p).mult;
      Matrix<S> lp = nf.exponent.block(t.offset(p), t.offset(p), m, m);
      const double gap = (lp - direct[p]).norm();
      add("exponent_orbit[" + t.vertex_name(p) + "]",
          orbit_membership(lp, inst.block_orbit(p), rp) && within<S>(gap, opt.tol, lp.norm()), gap);
    }
  } catch (const std::exception& e) {
    add("exponent_orbit", false, 0.0, e.what());
  }

  {
    auto jet = c.at_infinity(t.k() - 1);
    Matrix<S> total = jet.coeffs[t.k() - 1];
    for (const auto& r : c.residues) total += r;
    const double v = total.norm();
    add("residue_sum", within<S>(v, opt.tol, 1.0), v);
  }

  try {
    const bool xs = is_stable_with_margin(x, opt.stability_margin);
    const bool cs = is_stable_connection_with_margin(c, opt.stability_margin);
    add("stability", xs && cs, 0.0,
        std::string("representation ") + (xs ? "stable" : "unstable") + ", connection " + (cs ? "stable" : "unstable"));
  } catch (const std::exception& e) {
    add("stability", false, 0.0, e.what());
  }

  const long d2 = 2 * (1 - CartanData(*g.quiver).tits_form(g.v));
  long sq = 0;
  for (long d : g.v) sq += d * d;
  const long ker = static_cast<long>(moment_kernel_dimension(x));
  add("dimension_count", ker - (sq - 1) == d2, static_cast<double>(ker - (sq - 1)),
      "dim ker dmu - (sum v^2 - 1) against 2 Delta(v) = " + std::to_string(d2));
  return rep;
}

}  // namespace dsq
