#pragma once

// GL(n) adjoint orbits described by Jordan data, their markings, and the
// type A legs built from a marking.
//
// For a marking (l_1, ..., l_d) of L the leg has vertices 0..d-1 with
// V_0 = C^n and V_l = range (L - l_1)...(L - l_l). Arrow l points from
// vertex l to vertex l-1; its map is the inclusion V_l -> V_{l-1} and its
// reverse is (L - l_l) : V_{l-1} -> V_l.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsq/matrix.hpp"
#include "dsq/quiver.hpp"

namespace dsq {

template <class S>
struct EigenBlocks {
  S value;
  std::vector<std::size_t> blocks;  // Jordan block sizes, non-increasing

  std::size_t multiplicity() const {
    std::size_t m = 0;
    for (auto b : blocks) m += b;
    return m;
  }
  std::size_t largest() const { return blocks.empty() ? 0 : blocks.front(); }
  /// Number of blocks of size >= j.
  std::size_t at_least(std::size_t j) const {
    return static_cast<std::size_t>(std::count_if(blocks.begin(), blocks.end(), [j](std::size_t b) { return b >= j; }));
  }
};

template <class S>
struct OrbitSpec {
  std::size_t n = 0;
  std::vector<EigenBlocks<S>> eigen;  // distinct eigenvalues, (Re, Im) order
  std::vector<S> marking;
  std::vector<std::size_t> ranks;  // rank of prod_{i<=l}(L - l_i), l = 0..d

  std::size_t length() const { return marking.size(); }

  S trace() const {
    S t(0);
    for (const auto& e : eigen) t += e.value * S(static_cast<long>(e.multiplicity()));
    return t;
  }

  /// Index of the eigenvalue equal to s, if any.
  std::optional<std::size_t> find(const S& s, double tol = 1e-9) const {
    for (std::size_t i = 0; i < eigen.size(); ++i)
      if (ScalarTraits<S>::equal(eigen[i].value, s, tol)) return i;
    return std::nullopt;
  }

  /// Normal form: direct sum of Jordan blocks (upper bidiagonal).
  Matrix<S> normal_form() const {
    Matrix<S> m(n, n);
    std::size_t pos = 0;
    for (const auto& e : eigen)
      for (auto b : e.blocks) {
        for (std::size_t i = 0; i < b; ++i) {
          m(pos + i, pos + i) = e.value;
          if (i + 1 < b) m(pos + i, pos + i + 1) = S(1);
        }
        pos += b;
      }
    return m;
  }

  template <class T>
  OrbitSpec<T> cast() const {
    OrbitSpec<T> out;
    out.n = n;
    out.ranks = ranks;
    for (const auto& e : eigen) out.eigen.push_back({Matrix<S>::scalar(1, e.value).template cast<T>()(0, 0), e.blocks});
    for (const auto& m : marking) out.marking.push_back(Matrix<S>::scalar(1, m).template cast<T>()(0, 0));
    return out;
  }
};

namespace detail {

template <class S>
void normalize_eigen(std::vector<EigenBlocks<S>>& eigen, std::size_t& n) {
  n = 0;
  std::erase_if(eigen, [](const EigenBlocks<S>& e) { return e.multiplicity() == 0; });
  for (auto& e : eigen) {
    std::erase(e.blocks, std::size_t{0});
    std::sort(e.blocks.begin(), e.blocks.end(), std::greater<>());
    n += e.multiplicity();
  }
  std::sort(eigen.begin(), eigen.end(),
            [](const EigenBlocks<S>& a, const EigenBlocks<S>& b) { return ScalarTraits<S>::less(a.value, b.value); });
  for (std::size_t i = 0; i + 1 < eigen.size(); ++i)
    if (ScalarTraits<S>::equal(eigen[i].value, eigen[i + 1].value, 1e-9))
      throw std::invalid_argument("orbit: eigenvalues listed twice");
}

// Rank sequence of a marking; entries that are not eigenvalues drop nothing.
template <class S>
std::vector<std::size_t> marking_ranks(const OrbitSpec<S>& spec, const std::vector<S>& marking) {
  std::vector<std::size_t> used(spec.eigen.size(), 0);
  std::vector<std::size_t> ranks{spec.n};
  for (const auto& lam : marking) {
    std::size_t drop = 0;
    if (auto i = spec.find(lam)) drop = spec.eigen[*i].at_least(++used[*i]);
    ranks.push_back(ranks.back() - drop);
  }
  return ranks;
}

}  // namespace detail

/// Greedy marking of minimal length: each step takes the eigenvalue with the
/// largest rank drop, ties to the (Re, Im)-smallest value.
template <class S>
std::vector<S> greedy_marking(const std::vector<EigenBlocks<S>>& eigen) {
  std::vector<std::size_t> used(eigen.size(), 0);
  std::vector<S> marking;
  for (;;) {
    std::optional<std::size_t> best;
    std::size_t best_drop = 0;
    for (std::size_t i = 0; i < eigen.size(); ++i) {
      if (used[i] >= eigen[i].largest()) continue;
      std::size_t drop = eigen[i].at_least(used[i] + 1);
      if (!best || drop > best_drop) {  // eigen is sorted, so the first of equals wins
        best = i;
        best_drop = drop;
      }
    }
    if (!best) return marking;
    ++used[*best];
    marking.push_back(eigen[*best].value);
  }
}

/// Orbit from Jordan data. Without a marking the greedy one is used; a
/// supplied marking must annihilate the orbit.
template <class S>
OrbitSpec<S> orbit_from_jordan(std::vector<EigenBlocks<S>> eigen, std::optional<std::vector<S>> marking = {}) {
  OrbitSpec<S> spec;
  detail::normalize_eigen(eigen, spec.n);
  if (spec.n == 0) throw std::invalid_argument("orbit: empty Jordan data");
  spec.eigen = std::move(eigen);
  spec.marking = marking ? *marking : greedy_marking(spec.eigen);
  if (spec.marking.empty()) throw std::invalid_argument("orbit: marking must be nonempty");
  spec.ranks = detail::marking_ranks(spec, spec.marking);
  if (spec.ranks.back() != 0) throw std::invalid_argument("orbit: marking does not annihilate the orbit");
  return spec;
}

/// Orbit from a marking and the dimensions dim V_1 .. dim V_{d-1}.
template <class S>
OrbitSpec<S> orbit_from_marking(std::size_t n, const std::vector<S>& marking, const std::vector<std::size_t>& dims) {
  if (marking.empty()) throw std::invalid_argument("orbit: marking must be nonempty");
  if (dims.size() + 1 != marking.size())
    throw std::invalid_argument("orbit: need one rank per marking entry except the last");
  std::vector<std::size_t> ranks{n};
  ranks.insert(ranks.end(), dims.begin(), dims.end());
  ranks.push_back(0);
  // Group marking entries by value; the l-th occurrence of lam drops the rank
  // by the number of lam-blocks of size >= l.
  std::vector<S> values;
  std::vector<std::vector<std::size_t>> counts;  // counts[v][j] = #blocks >= j+1
  for (std::size_t l = 0; l < marking.size(); ++l) {
    if (ranks[l + 1] > ranks[l]) throw std::invalid_argument("orbit: ranks must be non-increasing");
    std::size_t drop = ranks[l] - ranks[l + 1];
    std::size_t v = 0;
    while (v < values.size() && !ScalarTraits<S>::equal(values[v], marking[l], 1e-9)) ++v;
    if (v == values.size()) {
      values.push_back(marking[l]);
      counts.emplace_back();
    }
    if (!counts[v].empty() && drop > counts[v].back())
      throw std::invalid_argument("orbit: rank drops of a repeated eigenvalue must be non-increasing");
    counts[v].push_back(drop);
  }
  std::vector<EigenBlocks<S>> eigen;
  for (std::size_t v = 0; v < values.size(); ++v) {
    EigenBlocks<S> e{values[v], {}};
    const auto& c = counts[v];
    for (std::size_t j = 0; j < c.size(); ++j) {
      std::size_t next = j + 1 < c.size() ? c[j + 1] : 0;
      for (std::size_t b = 0; b < c[j] - next; ++b) e.blocks.push_back(j + 1);
    }
    eigen.push_back(std::move(e));
  }
  OrbitSpec<S> spec = orbit_from_jordan<S>(std::move(eigen), marking);
  if (spec.n != n || spec.ranks != ranks) throw std::invalid_argument("orbit: ranks do not add up to the matrix size");
  return spec;
}

/// dim V_1, ..., dim V_{d-1}, with zero tail entries dropped.
template <class S>
std::vector<std::size_t> leg_dimensions(const OrbitSpec<S>& spec) {
  std::vector<std::size_t> out(spec.ranks.begin() + 1, spec.ranks.end() - 1);
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

struct SpectrumOptions {
  double cluster_tol = 1e-8;     // relative to max(1, |L|)
  double rank_tol = 1e-8;        // singular value threshold for Jordan ranks
  long max_denominator = 1000000;  // exact matrices: rationalized eigenvalues
};

/// Jordan data of a matrix. Complex: eigenvalues closer than
/// cluster_tol * max(1, |L|) are merged (cluster mean) and the Jordan ranks
/// must account for each cluster exactly, otherwise std::domain_error.
/// Exact: eigenvalues must be Gaussian rationals; they are found numerically,
/// rationalized and then verified exactly.
std::vector<EigenBlocks<Complex>> jordan_data(const MatC& l, const SpectrumOptions& opt = {});
std::vector<EigenBlocks<Rational>> jordan_data(const MatQ& l, const SpectrumOptions& opt = {});

/// Minimal marking of L with the greedy order, packaged as an orbit.
template <class S>
OrbitSpec<S> minimal_marking(const Matrix<S>& l, const SpectrumOptions& opt = {}) {
  if (l.rows() != l.cols()) throw std::invalid_argument("minimal_marking: matrix must be square");
  return orbit_from_jordan(jordan_data(l, opt));
}

/// prod_i (L - m_i), in marking order.
template <class S>
Matrix<S> marking_product(const Matrix<S>& l, const std::vector<S>& marking, std::size_t upto) {
  Matrix<S> p = Matrix<S>::identity(l.rows());
  for (std::size_t i = 0; i < upto; ++i) p = p * (l - Matrix<S>::scalar(l.rows(), marking[i]));
  return p;
}

template <class S>
struct Leg {
  std::vector<S> marking;
  DimVector dims;                    // dims[0] = n, then dim V_1 ...
  std::vector<Matrix<S>> inclusion;  // inclusion[l-1] : V_l -> V_{l-1}
  std::vector<Matrix<S>> lowering;   // lowering[l-1] : V_{l-1} -> V_l, (L - m_l)
  std::vector<Matrix<S>> basis;      // basis[l] : columns spanning V_l in C^n

  std::size_t vertices() const { return dims.size(); }

  /// The leg as a doubled representation of the type A quiver 0 <- 1 <- ...
  DoubledRep<S> rep() const {
    auto q = std::make_shared<Quiver>();
    for (std::size_t l = 0; l < dims.size(); ++l) q->add_vertex(std::to_string(l));
    for (std::size_t l = 1; l < dims.size(); ++l) q->add_arrow(std::to_string(l) + "->" + std::to_string(l - 1), l, l - 1);
    DoubledRep<S> x(q, dims);
    for (std::size_t l = 1; l < dims.size(); ++l) {
      x.fwd[l - 1] = inclusion[l - 1];
      x.rev[l - 1] = lowering[l - 1];
    }
    return x;
  }
};

/// Builds the leg of L for a marking. Throws std::invalid_argument when the
/// marking does not annihilate L.
template <class S>
Leg<S> realize_leg(const Matrix<S>& l, const std::vector<S>& marking, double tol = 1e-9) {
  const std::size_t n = l.rows();
  if (l.cols() != n) throw std::invalid_argument("realize_leg: matrix must be square");
  if (marking.empty()) throw std::invalid_argument("realize_leg: empty marking");
  Matrix<S> full = marking_product(l, marking, marking.size());
  if (!full.is_zero(tol * std::max(1.0, std::pow(l.norm(), static_cast<double>(marking.size())))))
    throw std::invalid_argument("realize_leg: marking does not annihilate the matrix");

  Leg<S> leg;
  leg.marking = marking;
  leg.dims.push_back(static_cast<long>(n));
  leg.basis.push_back(Matrix<S>::identity(n));
  for (std::size_t i = 1; i < marking.size(); ++i) {
    const Matrix<S>& prev = leg.basis.back();
    Matrix<S> image = (l - Matrix<S>::scalar(n, marking[i - 1])) * prev;
    Matrix<S> next = column_basis(image);
    if (next.cols() == 0) break;
    auto lower = solve(next, image);
    auto incl = solve(prev, next);
    if (!lower || !incl) throw std::runtime_error("realize_leg: inconsistent range computation");
    leg.basis.push_back(next);
    leg.inclusion.push_back(*incl);
    leg.lowering.push_back(*lower);
    leg.dims.push_back(static_cast<long>(next.cols()));
  }
  return leg;
}

struct LegCheck {
  double reconstruction = 0.0;  // |incl_1 lower_1 + m_1 - L| (relative)
  double moment = 0.0;          // max_l |mu_l - (m_l - m_{l+1})| (relative)
  bool injective = true;
  bool surjective = true;

  bool ok(double tol) const { return injective && surjective && reconstruction <= tol && moment <= tol; }
};

template <class S>
LegCheck check_leg(const Leg<S>& leg, const Matrix<S>& l) {
  LegCheck c;
  const std::size_t n = l.rows();
  Matrix<S> recon = Matrix<S>::scalar(n, leg.marking[0]);
  if (leg.vertices() > 1) recon += leg.inclusion[0] * leg.lowering[0];
  c.reconstruction = rel_diff(recon, l);
  auto x = leg.rep();
  auto mu = moment_map(x);
  for (std::size_t v = 1; v < leg.vertices(); ++v) {
    // vertices() <= marking.size(), so marking[v] exists
    Matrix<S> want = Matrix<S>::scalar(x.dim(v), leg.marking[v - 1] - leg.marking[v]);
    c.moment = std::max(c.moment, rel_diff(mu[v], want));
    c.injective = c.injective && rank(leg.inclusion[v - 1]) == leg.inclusion[v - 1].cols();
    c.surjective = c.surjective && rank(leg.lowering[v - 1]) == leg.lowering[v - 1].rows();
  }
  return c;
}

/// Conjugacy test by rank profile: rank (R - lam)^j agrees with the Jordan
/// data for every eigenvalue lam of the spec and j = 1..(largest block + 1).
/// Complex ranks count singular values of (R - lam)^j above
/// p.rel_tol * max(1, |R| + |lam|)^j; the scale is that of the unshifted data,
/// so a power that should vanish is not judged against its own noise.
template <class S>
bool orbit_membership(const Matrix<S>& r, const OrbitSpec<S>& spec, RankPolicy p = {}) {
  if (r.rows() != spec.n || r.cols() != spec.n) return false;
  for (const auto& e : spec.eigen) {
    Matrix<S> shifted = r - Matrix<S>::scalar(spec.n, e.value);
    Matrix<S> power = shifted;
    [[maybe_unused]] const double scale = std::max(1.0, r.norm() + ScalarTraits<S>::magnitude(e.value));
    for (std::size_t j = 1; j <= e.largest() + 1; ++j) {
      std::size_t expected = spec.n;
      for (auto b : e.blocks) expected -= std::min(b, j);
      std::size_t got = 0;
      if constexpr (ScalarTraits<S>::exact) {
        got = rank(power);
      } else {
        const double thr = p.rel_tol * std::pow(scale, static_cast<double>(j));
        for (double sv : singular_values(power))
          if (sv > thr) ++got;
      }
      if (got != expected) return false;
      power = power * shifted;
    }
  }
  return true;
}

}  // namespace dsq
