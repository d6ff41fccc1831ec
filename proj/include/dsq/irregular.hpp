#pragma once

// Irregular types, their level filtration, and the triangular coordinates
// (Q, P) on the unipotent coadjoint orbit through dT.
//
// An irregular type of pole order k is T = sum_{i=1}^{k-1} T_i z^{-i} with
// T_i = diag(c_i(p) 1_{V_p}) over blocks p. Blocks are kept sorted
// lexicographically on (c_{k-1}, ..., c_1), compared by (Re, Im); the input
// position of every block is remembered. At level i (0 <= i <= k-2) two
// blocks share a class when c_{i+1}, ..., c_{k-1} agree; the sort makes each
// class a contiguous run, so class indices increase with block order. At
// level k-1 there is a single class.
//
//   h_i    : entries whose row and column blocks share a level-i class
//   u_i^+  : row class < column class  (block upper triangular)
//   u_i^-  : row class > column class  (block lower triangular)
//   p_i^+- : h_i + u_i^+-
//
// (Q, P) live in U_- x U_-^*: Q_i in u_i^-, P_i in u_i^+ (P is a polar
// principal part, P_i multiplying z^{-i-1} dz).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsq/jets.hpp"
#include "dsq/quiver.hpp"

namespace dsq {

class OrbitMembershipError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class S>
struct IrregularBlock {
  std::vector<S> coeffs;  // c_1 .. c_{k-1}, c_i multiplies z^{-i}
  std::size_t mult = 1;
};

enum class Part { H, UPlus, UMinus, PPlus, PMinus };

template <class S>
class IrregularType {
 public:
  IrregularType() = default;
  IrregularType(std::size_t k, std::vector<IrregularBlock<S>> blocks, double tol = 1e-9) : k_(k), tol_(tol) {
    if (k < 2) throw std::invalid_argument("irregular type: pole order k must be at least 2");
    if (blocks.empty()) throw std::invalid_argument("irregular type: no blocks");
    for (const auto& b : blocks) {
      if (b.coeffs.size() != k - 1)
        throw std::invalid_argument("irregular type: every block needs k-1 = " + std::to_string(k - 1) + " coefficients");
      if (b.mult == 0) throw std::invalid_argument("irregular type: block multiplicity must be positive");
    }
    order_.resize(blocks.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      for (std::size_t i = k - 1; i >= 1; --i) {
        const S& x = blocks[a].coeffs[i - 1];
        const S& y = blocks[b].coeffs[i - 1];
        if (ScalarTraits<S>::less(x, y)) return true;
        if (ScalarTraits<S>::less(y, x)) return false;
      }
      return false;
    });
    for (std::size_t idx : order_) blocks_.push_back(blocks[idx]);

    std::size_t off = 0;
    for (const auto& b : blocks_) {
      offsets_.push_back(off);
      for (std::size_t r = 0; r < b.mult; ++r) coord_block_.push_back(offsets_.size() - 1);
      off += b.mult;
    }
    n_ = off;

    cls_.assign(k, std::vector<std::size_t>(blocks_.size(), 0));
    for (std::size_t i = 0; i + 1 < k; ++i) {
      for (std::size_t p = 1; p < blocks_.size(); ++p) {
        bool same = true;
        for (std::size_t j = i + 1; j <= k - 1 && same; ++j) same = coeff_equal(blocks_[p - 1].coeffs[j - 1], blocks_[p].coeffs[j - 1]);
        cls_[i][p] = cls_[i][p - 1] + (same ? 0 : 1);
      }
    }
    for (std::size_t p = 1; p < blocks_.size(); ++p)
      if (cls_[0][p] == cls_[0][p - 1]) throw std::invalid_argument("irregular type: two blocks have the same eigenvalue polynomial");
  }

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  const IrregularBlock<S>& block(std::size_t p) const { return blocks_[p]; }
  std::size_t input_index(std::size_t p) const { return order_[p]; }
  std::size_t offset(std::size_t p) const { return offsets_[p]; }
  std::size_t block_of(std::size_t r) const { return coord_block_[r]; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Class of block p at level i, 0 <= i <= k-1.
  std::size_t level_class(std::size_t i, std::size_t p) const { return cls_.at(i)[p]; }
  std::size_t num_classes(std::size_t i) const { return cls_.at(i).back() + 1; }

  /// deg_{1/z}(t_p - t_q) - 1, the number of arrows between p and q.
  std::size_t arrow_multiplicity(std::size_t p, std::size_t q) const {
    std::size_t m = 0;
    for (std::size_t i = 0; i + 1 < k_; ++i)
      if (cls_[i][p] != cls_[i][q]) m = i;
    return m;
  }

  /// T_i, 1 <= i <= k-1.
  Matrix<S> t_coeff(std::size_t i) const {
    Matrix<S> m(n_, n_);
    for (std::size_t r = 0; r < n_; ++r) m(r, r) = blocks_[coord_block_[r]].coeffs[i - 1];
    return m;
  }

  /// dT = sum -i T_i z^{-i-1} dz as a polar principal part.
  PrincipalPart<S> dT() const {
    PrincipalPart<S> out(n_, k_, DualTag::Polar);
    for (std::size_t i = 1; i < k_; ++i) out.coeffs[i] = S(-static_cast<long>(i)) * t_coeff(i);
    return out;
  }

  bool in(Part part, std::size_t i, std::size_t r, std::size_t c) const {
    std::size_t a = cls_.at(i)[coord_block_[r]], b = cls_.at(i)[coord_block_[c]];
    switch (part) {
      case Part::H:
        return a == b;
      case Part::UPlus:
        return a < b;
      case Part::UMinus:
        return a > b;
      case Part::PPlus:
        return a <= b;
      case Part::PMinus:
        return a >= b;
    }
    return false;
  }

  Matrix<S> project(const Matrix<S>& m, Part part, std::size_t i) const {
    Matrix<S> out(n_, n_);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c)
        if (in(part, i, r, c)) out(r, c) = m(r, c);
    return out;
  }

  bool contained(const Matrix<S>& m, Part part, std::size_t i, double tol = 0.0) const {
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c)
        if (!in(part, i, r, c) && !ScalarTraits<S>::is_zero(m(r, c), tol)) return false;
    return true;
  }

  /// Vertex name of block p: "p" followed by its 1-based input position.
  std::string vertex_name(std::size_t p) const { return "p" + std::to_string(order_[p] + 1); }

  template <class T>
  IrregularType<T> cast() const {
    std::vector<IrregularBlock<T>> bl(blocks_.size());
    for (std::size_t p = 0; p < blocks_.size(); ++p) {
      std::size_t src = order_[p];
      bl[src].mult = blocks_[p].mult;
      for (const auto& c : blocks_[p].coeffs) bl[src].coeffs.push_back(Matrix<S>::scalar(1, c).template cast<T>()(0, 0));
    }
    return IrregularType<T>(k_, std::move(bl), tol_);
  }

 private:
  bool coeff_equal(const S& a, const S& b) {
    if constexpr (ScalarTraits<S>::exact) {
      return a == b;
    } else {
      bool eq = ScalarTraits<S>::equal(a, b, tol_);
      if ((eq && a != b) || (!eq && ScalarTraits<S>::equal(a, b, 1e3 * tol_)))
        warnings_.push_back("eigenvalue coefficients " + std::to_string(a.real()) + "+" + std::to_string(a.imag()) +
                            "i and " + std::to_string(b.real()) + "+" + std::to_string(b.imag()) +
                            "i are compared with a tolerance; the level structure is sensitive to them");
      return eq;
    }
  }

  std::size_t n_ = 0;
  std::size_t k_ = 0;
  double tol_ = 1e-9;
  std::vector<IrregularBlock<S>> blocks_;
  std::vector<std::size_t> order_;  // sorted position -> input position
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> coord_block_;
  std::vector<std::vector<std::size_t>> cls_;
  std::vector<std::string> warnings_;
};

/// Level i partition of the (sorted) blocks, i = 0..k-2.
struct Level {
  std::vector<std::vector<std::size_t>> classes;
};

template <class S>
std::vector<Level> level_filtration(const IrregularType<S>& t) {
  std::vector<Level> out;
  for (std::size_t i = 0; i + 1 < t.k(); ++i) {
    Level lv;
    lv.classes.resize(t.num_classes(i));
    for (std::size_t p = 0; p < t.num_blocks(); ++p) lv.classes[t.level_class(i, p)].push_back(p);
    out.push_back(std::move(lv));
  }
  return out;
}

struct ArrowLabel {
  std::size_t p = 0;  // source block (p < q in block order)
  std::size_t q = 0;  // target block
  std::size_t i = 0;  // level, 1 <= i <= m_{p,q}
};

struct CoreQuiver {
  std::shared_ptr<const Quiver> quiver;
  DimVector dims;
  std::vector<ArrowLabel> labels;  // one per arrow, in arrow order
};

/// Vertices are the blocks in sorted order; m_{p,q} arrows p -> q for p < q.
template <class S>
CoreQuiver core_quiver(const IrregularType<S>& t) {
  auto q = std::make_shared<Quiver>();
  CoreQuiver out;
  for (std::size_t p = 0; p < t.num_blocks(); ++p) {
    q->add_vertex(t.vertex_name(p));
    out.dims.push_back(static_cast<long>(t.block(p).mult));
  }
  for (std::size_t p = 0; p < t.num_blocks(); ++p)
    for (std::size_t r = p + 1; r < t.num_blocks(); ++r)
      for (std::size_t i = 1; i <= t.arrow_multiplicity(p, r); ++i) {
        q->add_arrow("a(" + t.vertex_name(r) + "," + t.vertex_name(p) + ";" + std::to_string(i) + ")", p, r);
        out.labels.push_back({p, r, i});
      }
  out.quiver = std::move(q);
  return out;
}

template <class S>
struct Factorization {
  JetMatrix<S> minus;  // in 1 + U_-
  JetMatrix<S> plus;   // in P_+
};

/// b = b_- b_+ with b_-,i in u_i^- and b_+,i in p_i^+.
template <class S>
Factorization<S> factorize(const JetMatrix<S>& b, const IrregularType<S>& t, double tol = 1e-12) {
  if (b.n != t.n() || b.k != t.k()) throw DimensionError("factorize: jet shape does not match the irregular type");
  if (!b.is_unipotent(tol)) throw std::invalid_argument("factorize: jet is not unipotent");
  const std::size_t n = t.n(), k = t.k();
  Factorization<S> f{JetMatrix<S>::identity(n, k), JetMatrix<S>::identity(n, k)};
  for (std::size_t i = 1; i < k; ++i) {
    Matrix<S> rhs = b.coeffs[i];
    for (std::size_t j = 1; j < i; ++j) rhs -= f.minus.coeffs[j] * f.plus.coeffs[i - j];
    f.minus.coeffs[i] = t.project(rhs, Part::UMinus, i);
    f.plus.coeffs[i] = rhs - f.minus.coeffs[i];
  }
  return f;
}

template <class S>
struct QPPair {
  JetMatrix<S> q;        // Q_0 = 0, Q_i in u_i^-
  PrincipalPart<S> p;    // polar, P_i in u_i^+

  QPPair() = default;
  QPPair(std::size_t n, std::size_t k) : q(n, k), p(n, k, DualTag::Polar) {}
};

template <class S>
void check_qp(const QPPair<S>& qp, const IrregularType<S>& t, double tol = 0.0) {
  if (qp.q.n != t.n() || qp.q.k != t.k() || qp.p.n != t.n() || qp.p.k != t.k())
    throw DimensionError("(Q, P): shape does not match the irregular type");
  if (!qp.q.coeffs[0].is_zero(tol)) throw std::invalid_argument("(Q, P): Q has a constant term");
  for (std::size_t i = 1; i < t.k(); ++i) {
    if (!t.contained(qp.q.coeffs[i], Part::UMinus, i, tol))
      throw std::invalid_argument("(Q, P): Q_" + std::to_string(i) + " leaves u_" + std::to_string(i) + "^-");
    if (!t.contained(qp.p.coeffs[i], Part::UPlus, i, tol))
      throw std::invalid_argument("(Q, P): P_" + std::to_string(i) + " leaves u_" + std::to_string(i) + "^+");
  }
}

/// The orbit point with coordinates (Q, P): B' is solved top-down from
/// B'|_{u^+} = P and B'(1 + Q) - dT in U_-^*, then B = polar part of (1 + Q) B'.
template <class S>
PrincipalPart<S> qp_to_orbit(const QPPair<S>& qp, const IrregularType<S>& t, double tol = 0.0) {
  check_qp(qp, t, tol);
  const std::size_t n = t.n(), k = t.k();
  const PrincipalPart<S> dt = t.dT();
  PrincipalPart<S> bp(n, k, DualTag::Polar);
  for (std::size_t m = k - 1; m >= 1; --m) {
    Matrix<S> lower = dt.coeffs[m];
    for (std::size_t a = 1; m + a <= k - 1; ++a) lower -= bp.coeffs[m + a] * qp.q.coeffs[a];
    bp.coeffs[m] = t.project(lower, Part::PMinus, m) + t.project(qp.p.coeffs[m], Part::UPlus, m);
  }
  PrincipalPart<S> b(n, k, DualTag::Polar);
  for (std::size_t m = 1; m < k; ++m) {
    b.coeffs[m] = bp.coeffs[m];
    for (std::size_t a = 1; m + a <= k - 1; ++a) b.coeffs[m] += qp.q.coeffs[a] * bp.coeffs[m + a];
  }
  return b;
}

namespace detail {

// Row-major vec of X -> M X - X N as a matrix acting on vec(X).
template <class S>
void add_sylvester_block(Matrix<S>& a, std::size_t row0, std::size_t col0, const Matrix<S>& m, const Matrix<S>& nmat) {
  const std::size_t n = m.rows();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t row = row0 + r * n + c;
      for (std::size_t l = 0; l < n; ++l) {
        a(row, col0 + l * n + c) += m(r, l);
        a(row, col0 + r * n + l) -= nmat(l, c);
      }
    }
}

}  // namespace detail

/// Some unipotent b with coadjoint(b, dT) = B, from the linear conditions
/// [B b]_m = [b dT]_m, m = 1..k-1. Throws OrbitMembershipError when the
/// system is inconsistent (B is not in the orbit of dT).
template <class S>
JetMatrix<S> orbit_transporter(const PrincipalPart<S>& b, const IrregularType<S>& t, double tol = 1e-8) {
  if (b.n != t.n() || b.k != t.k()) throw DimensionError("orbit point shape does not match the irregular type");
  const std::size_t n = t.n(), k = t.k(), nn = n * n;
  const PrincipalPart<S> dt = t.dT();
  const std::size_t unknowns = (k - 2) * nn;
  Matrix<S> a((k - 1) * nn, unknowns);
  Matrix<S> rhs((k - 1) * nn, 1);
  for (std::size_t m = 1; m < k; ++m) {
    const std::size_t row0 = (m - 1) * nn;
    Matrix<S> diff = dt.coeffs[m] - b.coeffs[m];
    for (std::size_t e = 0; e < nn; ++e) rhs(row0 + e, 0) = diff.data()[e];
    for (std::size_t s = 1; m + s <= k - 1; ++s)
      detail::add_sylvester_block(a, row0, (s - 1) * nn, b.coeffs[m + s], dt.coeffs[m + s]);
  }
  std::optional<Matrix<S>> x;
  if constexpr (ScalarTraits<S>::exact) {
    x = solve(a, rhs);
  } else {
    // least squares; consistency is judged against the size of B, not of the system
    x = solve(a, rhs, std::numeric_limits<double>::infinity());
    if (x && (a * *x - rhs).norm() > tol * std::max(1.0, b.norm())) x.reset();
  }
  if (!x) throw OrbitMembershipError("principal part is not in the orbit of dT");
  JetMatrix<S> g = JetMatrix<S>::identity(n, k);
  for (std::size_t s = 1; s + 1 < k; ++s)
    for (std::size_t e = 0; e < nn; ++e) g.coeffs[s].data()[e] = (*x)((s - 1) * nn + e, 0);
  return g;
}

/// Inverse of qp_to_orbit. Throws OrbitMembershipError when B is not in the
/// orbit (complex backend: also when the reconstruction misses B by more
/// than tol relative).
template <class S>
QPPair<S> orbit_to_qp(const PrincipalPart<S>& b, const IrregularType<S>& t, double tol = 1e-8) {
  JetMatrix<S> g = orbit_transporter(b, t, tol);
  auto f = factorize(g, t, 1e-12);
  const std::size_t n = t.n(), k = t.k();
  QPPair<S> qp(n, k);
  for (std::size_t i = 1; i < k; ++i) qp.q.coeffs[i] = f.minus.coeffs[i];
  JetMatrix<S> inv = jet_inv(f.minus);
  for (std::size_t m = 1; m < k; ++m) {
    Matrix<S> c(n, n);
    for (std::size_t a = 0; m + a <= k - 1; ++a) c += inv.coeffs[a] * b.coeffs[m + a];
    qp.p.coeffs[m] = t.project(c, Part::UPlus, m);
  }
  if constexpr (!ScalarTraits<S>::exact) {
    auto back = qp_to_orbit(qp, t, 1e-12 * std::max(1.0, b.norm()));
    double err = 0.0;
    for (std::size_t m = 1; m < k; ++m) err += std::pow((back.coeffs[m] - b.coeffs[m]).norm(), 2);
    if (std::sqrt(err) > tol * std::max(1.0, b.norm()))
      throw OrbitMembershipError("principal part is not in the orbit of dT (residual " + std::to_string(std::sqrt(err)) + ")");
  }
  return qp;
}

/// Q_i block (q, p) -> arrow a(q,p;i); P_i block (p, q) -> its reverse.
template <class S>
DoubledRep<S> qp_to_rep(const QPPair<S>& qp, const IrregularType<S>& t, const CoreQuiver& core) {
  DoubledRep<S> x(core.quiver, core.dims);
  for (std::size_t a = 0; a < core.labels.size(); ++a) {
    const auto& l = core.labels[a];
    std::size_t mp = t.block(l.p).mult, mq = t.block(l.q).mult;
    x.fwd[a] = qp.q.coeffs[l.i].block(t.offset(l.q), t.offset(l.p), mq, mp);
    x.rev[a] = qp.p.coeffs[l.i].block(t.offset(l.p), t.offset(l.q), mp, mq);
  }
  return x;
}

template <class S>
QPPair<S> rep_to_qp(const DoubledRep<S>& x, const IrregularType<S>& t, const CoreQuiver& core) {
  x.check_shapes();
  if (x.dims != core.dims || x.fwd.size() != core.labels.size())
    throw std::invalid_argument("rep_to_qp: representation does not live on the core quiver");
  QPPair<S> qp(t.n(), t.k());
  for (std::size_t a = 0; a < core.labels.size(); ++a) {
    const auto& l = core.labels[a];
    qp.q.coeffs[l.i].set_block(t.offset(l.q), t.offset(l.p), x.fwd[a]);
    qp.p.coeffs[l.i].set_block(t.offset(l.p), t.offset(l.q), x.rev[a]);
  }
  return qp;
}

/// res tr(dQ1 dP2 - dQ2 dP1) for tangent vectors given in (Q, P) coordinates.
template <class S>
S qp_form(const QPPair<S>& d1, const QPPair<S>& d2) {
  return pairing(d1.q, d2.p) - pairing(d2.q, d1.p);
}

/// Tangent vector of the orbit at B in direction X (X_0 = 0): polar part of [X, B].
template <class S>
PrincipalPart<S> coadjoint_tangent(const JetMatrix<S>& x, const PrincipalPart<S>& b) {
  PrincipalPart<S> out(b.n, b.k, DualTag::Polar);
  for (std::size_t m = 1; m < b.k; ++m)
    for (std::size_t a = 1; m + a < b.k && a < x.k; ++a)
      out.coeffs[m] += x.coeffs[a] * b.coeffs[m + a] - b.coeffs[m + a] * x.coeffs[a];
  return out;
}

/// Kirillov value res tr(B [X1, X2]).
template <class S>
S kirillov_form(const PrincipalPart<S>& b, const JetMatrix<S>& x1, const JetMatrix<S>& x2) {
  JetMatrix<S> c = jet_mul(x1, x2), d = jet_mul(x2, x1);
  for (std::size_t i = 0; i < c.k; ++i) c.coeffs[i] -= d.coeffs[i];
  return pairing(c, b);
}

/// A unipotent jet fixes dT exactly when b_i lies in h_i for every i.
template <class S>
bool in_stabilizer_form(const JetMatrix<S>& b, const IrregularType<S>& t, double tol = 0.0) {
  for (std::size_t i = 1; i < b.k; ++i)
    if (!t.contained(b.coeffs[i], Part::H, i, tol)) return false;
  return true;
}

}  // namespace dsq
