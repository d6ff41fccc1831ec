#pragma once

// Quivers and representations of their doubles.
//
// Every arrow a: s -> t of Q carries two maps in a doubled representation:
// fwd[a] : V_s -> V_t (the arrow itself, sign +1) and rev[a] : V_t -> V_s
// (its reverse, sign -1).

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dsq/density.hpp"
#include "dsq/matrix.hpp"
#include "dsq/span.hpp"

namespace dsq {

struct Arrow {
  std::string id;
  std::size_t source = 0;
  std::size_t target = 0;
};

class Quiver {
 public:
  std::size_t add_vertex(const std::string& name);
  std::size_t add_arrow(const std::string& id, std::size_t source, std::size_t target);
  std::size_t add_arrow(const std::string& id, const std::string& source, const std::string& target);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_arrows() const { return arrows_.size(); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  const std::string& vertex(std::size_t i) const { return vertices_.at(i); }
  const Arrow& arrow(std::size_t a) const { return arrows_.at(a); }
  std::optional<std::size_t> find_vertex(const std::string& name) const;
  std::optional<std::size_t> find_arrow(const std::string& id) const;

  bool has_loops() const;
  /// Number of arrows between i and j in either direction.
  std::size_t edge_count(std::size_t i, std::size_t j) const;
  /// Number of arrows i -> j.
  std::size_t arrow_count(std::size_t i, std::size_t j) const;

  friend bool operator==(const Quiver& a, const Quiver& b);

 private:
  std::vector<std::string> vertices_;
  std::vector<Arrow> arrows_;
  std::unordered_map<std::string, std::size_t> vertex_index_;
  std::unordered_map<std::string, std::size_t> arrow_index_;
};

using DimVector = std::vector<long>;

/// sum_arrows v_s v_t - sum_i v_i^2 + 1.
long delta(const Quiver& q, const DimVector& v);

template <class S>
S zeta_dot(const std::vector<S>& zeta, const DimVector& v) {
  if (zeta.size() != v.size()) throw std::invalid_argument("zeta_dot: size mismatch");
  S s(0);
  for (std::size_t i = 0; i < v.size(); ++i) s += zeta[i] * S(v[i]);
  return s;
}

template <class S>
struct DoubledRep {
  std::shared_ptr<const Quiver> quiver;
  DimVector dims;
  std::vector<Matrix<S>> fwd;  // dims[t] x dims[s]
  std::vector<Matrix<S>> rev;  // dims[s] x dims[t]

  DoubledRep() = default;
  /// Zero representation of the given dimension vector.
  DoubledRep(std::shared_ptr<const Quiver> q, DimVector d) : quiver(std::move(q)), dims(std::move(d)) {
    if (dims.size() != quiver->num_vertices()) throw std::invalid_argument("DoubledRep: dimension vector size");
    for (long x : dims)
      if (x < 0) throw std::invalid_argument("DoubledRep: negative dimension");
    for (const auto& a : quiver->arrows()) {
      fwd.emplace_back(dim(a.target), dim(a.source));
      rev.emplace_back(dim(a.source), dim(a.target));
    }
  }

  std::size_t dim(std::size_t i) const { return static_cast<std::size_t>(dims[i]); }
  std::size_t total_dim() const {
    std::size_t s = 0;
    for (long x : dims) s += static_cast<std::size_t>(x);
    return s;
  }
  /// Start of V_i inside the direct sum.
  std::size_t offset(std::size_t i) const {
    std::size_t s = 0;
    for (std::size_t j = 0; j < i; ++j) s += dim(j);
    return s;
  }

  void check_shapes() const {
    const auto& arr = quiver->arrows();
    if (fwd.size() != arr.size() || rev.size() != arr.size()) throw std::invalid_argument("DoubledRep: arrow count");
    for (std::size_t a = 0; a < arr.size(); ++a) {
      if (fwd[a].rows() != dim(arr[a].target) || fwd[a].cols() != dim(arr[a].source) ||
          rev[a].rows() != dim(arr[a].source) || rev[a].cols() != dim(arr[a].target))
        throw std::invalid_argument("DoubledRep: map shape mismatch at arrow " + arr[a].id);
    }
  }

  bool same_shape(const DoubledRep& o) const { return *quiver == *o.quiver && dims == o.dims; }

  DoubledRep& operator+=(const DoubledRep& o) {
    for (std::size_t a = 0; a < fwd.size(); ++a) {
      fwd[a] += o.fwd[a];
      rev[a] += o.rev[a];
    }
    return *this;
  }
  DoubledRep& operator*=(const S& s) {
    for (std::size_t a = 0; a < fwd.size(); ++a) {
      fwd[a] *= s;
      rev[a] *= s;
    }
    return *this;
  }
  friend DoubledRep operator+(DoubledRep a, const DoubledRep& b) { return a += b; }
  friend DoubledRep operator*(const S& s, DoubledRep a) { return a *= s; }

  double norm() const {
    double t = 0.0;
    for (std::size_t a = 0; a < fwd.size(); ++a) t += std::pow(fwd[a].norm(), 2) + std::pow(rev[a].norm(), 2);
    return std::sqrt(t);
  }

  template <class T>
  DoubledRep<T> cast() const {
    DoubledRep<T> out(quiver, dims);
    for (std::size_t a = 0; a < fwd.size(); ++a) {
      out.fwd[a] = fwd[a].template cast<T>();
      out.rev[a] = rev[a].template cast<T>();
    }
    return out;
  }
};

/// mu_i = sum_{t(a)=i} fwd_a rev_a - sum_{s(a)=i} rev_a fwd_a.
template <class S>
std::vector<Matrix<S>> moment_map(const DoubledRep<S>& x) {
  std::vector<Matrix<S>> mu;
  for (std::size_t i = 0; i < x.dims.size(); ++i) mu.emplace_back(x.dim(i), x.dim(i));
  const auto& arr = x.quiver->arrows();
  for (std::size_t a = 0; a < arr.size(); ++a) {
    mu[arr[a].target] += x.fwd[a] * x.rev[a];
    mu[arr[a].source] -= x.rev[a] * x.fwd[a];
  }
  return mu;
}

/// sum_i |mu_i - zeta_i 1|^2, square-rooted.
template <class S>
double moment_residual(const DoubledRep<S>& x, const std::vector<S>& zeta) {
  auto mu = moment_map(x);
  double t = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) t += std::pow((mu[i] - Matrix<S>::scalar(x.dim(i), zeta[i])).norm(), 2);
  return std::sqrt(t);
}

/// omega(d1, d2) = sum_a tr(d1.fwd_a d2.rev_a - d2.fwd_a d1.rev_a). This is
/// the half-sum over the doubled arrow set with signs, written out once per
/// original arrow. Constant coefficients, so no base point is needed.
template <class S>
S symplectic_form(const DoubledRep<S>& d1, const DoubledRep<S>& d2) {
  if (!d1.same_shape(d2)) throw std::invalid_argument("symplectic_form: shape mismatch");
  S w(0);
  for (std::size_t a = 0; a < d1.fwd.size(); ++a)
    w += (d1.fwd[a] * d2.rev[a]).trace() - (d2.fwd[a] * d1.rev[a]).trace();
  return w;
}

/// G_V action: fwd_a -> g_t fwd_a g_s^{-1}, rev_a -> g_s rev_a g_t^{-1}.
template <class S>
DoubledRep<S> act(const std::vector<Matrix<S>>& g, const DoubledRep<S>& x) {
  if (g.size() != x.dims.size()) throw std::invalid_argument("act: one group element per vertex");
  std::vector<Matrix<S>> ginv;
  for (const auto& m : g) ginv.push_back(inverse(m));
  DoubledRep<S> out = x;
  const auto& arr = x.quiver->arrows();
  for (std::size_t a = 0; a < arr.size(); ++a) {
    out.fwd[a] = g[arr[a].target] * x.fwd[a] * ginv[arr[a].source];
    out.rev[a] = g[arr[a].source] * x.rev[a] * ginv[arr[a].target];
  }
  return out;
}

/// Generators of the action of the doubled path algebra on the direct sum:
/// the vertex idempotents and every map placed in its block.
template <class S>
std::vector<Matrix<S>> path_algebra_generators(const DoubledRep<S>& x) {
  const std::size_t n = x.total_dim();
  std::vector<std::size_t> off;
  for (std::size_t i = 0; i < x.dims.size(); ++i) off.push_back(x.offset(i));
  std::vector<Matrix<S>> gens;
  for (std::size_t i = 0; i < x.dims.size(); ++i) {
    if (x.dim(i) == 0) continue;
    Matrix<S> e(n, n);
    for (std::size_t r = 0; r < x.dim(i); ++r) e(off[i] + r, off[i] + r) = S(1);
    gens.push_back(std::move(e));
  }
  const auto& arr = x.quiver->arrows();
  for (std::size_t a = 0; a < arr.size(); ++a) {
    if (x.fwd[a].empty()) continue;
    Matrix<S> f(n, n), r(n, n);
    f.set_block(off[arr[a].target], off[arr[a].source], x.fwd[a]);
    r.set_block(off[arr[a].source], off[arr[a].target], x.rev[a]);
    gens.push_back(std::move(f));
    gens.push_back(std::move(r));
  }
  return gens;
}

/// Irreducibility of the doubled representation, by the density test.
template <class S>
bool is_stable(const DoubledRep<S>& x, const DensityOptions& opt = {}) {
  const std::size_t n = x.total_dim();
  if (n == 0) throw std::invalid_argument("is_stable: zero representation");
  return is_dense(path_algebra_generators(x), n, opt);
}

/// is_stable for a point known only up to a relative error of `margin`.
template <class S>
bool is_stable_with_margin(const DoubledRep<S>& x, double margin) {
  const std::size_t n = x.total_dim();
  if (n == 0) throw std::invalid_argument("is_stable: zero representation");
  return is_dense_with_margin(path_algebra_generators(x), n, margin);
}

/// Graded subspace: per vertex a matrix whose columns form a basis.
template <class S>
struct GradedSubspace {
  std::vector<Matrix<S>> bases;

  DimVector dims() const {
    DimVector d;
    for (const auto& b : bases) d.push_back(static_cast<long>(b.cols()));
    return d;
  }
  bool is_zero() const {
    for (const auto& b : bases)
      if (b.cols() != 0) return false;
    return true;
  }
};

template <class S>
using VertexVector = std::pair<std::size_t, std::vector<S>>;

/// Smallest graded subspace containing the seeds and stable under every
/// fwd and rev map.
template <class S>
GradedSubspace<S> invariant_closure(const DoubledRep<S>& x, const std::vector<VertexVector<S>>& seeds,
                                    double rel_tol = 1e-8) {
  const std::size_t nv = x.dims.size();
  std::vector<SpanReducer<S>> spans;
  for (std::size_t i = 0; i < nv; ++i) spans.emplace_back(x.dim(i), rel_tol);
  std::vector<std::vector<std::size_t>> out_fwd(nv), out_rev(nv);
  const auto& arr = x.quiver->arrows();
  for (std::size_t a = 0; a < arr.size(); ++a) {
    out_fwd[arr[a].source].push_back(a);
    out_rev[arr[a].target].push_back(a);
  }

  auto apply = [](const Matrix<S>& m, const std::vector<S>& v) {
    std::vector<S> out(m.rows(), S(0));
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) out[r] += m(r, c) * v[c];
    return out;
  };

  std::vector<VertexVector<S>> queue;
  auto push = [&](std::size_t i, std::vector<S> v) {
    if (v.size() != x.dim(i)) throw std::invalid_argument("invariant_closure: seed length mismatch");
    if (spans[i].insert(std::move(v))) queue.emplace_back(i, spans[i].basis().back());
  };
  for (const auto& [i, v] : seeds) {
    if (i >= nv) throw std::invalid_argument("invariant_closure: seed at unknown vertex");
    push(i, v);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [i, v] = queue[head];
    for (std::size_t a : out_fwd[i]) push(arr[a].target, apply(x.fwd[a], v));
    for (std::size_t a : out_rev[i]) push(arr[a].source, apply(x.rev[a], v));
  }

  GradedSubspace<S> w;
  for (std::size_t i = 0; i < nv; ++i) {
    const auto& b = spans[i].basis();
    Matrix<S> m(x.dim(i), b.size());
    for (std::size_t c = 0; c < b.size(); ++c)
      for (std::size_t r = 0; r < x.dim(i); ++r) m(r, c) = b[c][r];
    w.bases.push_back(std::move(m));
  }
  return w;
}

}  // namespace dsq
