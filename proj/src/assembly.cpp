#include "dsq/assembly.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <limits>
#include <random>

namespace dsq {

DsVerdict decide_ds(const ProblemInstance<Rational>& inst, const CriterionOptions& opt) {
  DsVerdict out;
  out.quiver = build_global_quiver(inst);
  out.criterion = cb_solvable(*out.quiver.quiver, out.quiver.v, out.quiver.zeta, opt);
  if (out.criterion.verdict == Verdict::Nonempty) out.dimension = 2 * out.criterion.delta_v;
  return out;
}

namespace {

using EVec = Eigen::VectorXcd;
using EMat = Eigen::MatrixXcd;

struct Layout {
  std::vector<std::size_t> fwd0, rev0;
  std::size_t unknowns = 0;
};

Layout layout_of(const DoubledRep<Complex>& x) {
  Layout l;
  const auto& arr = x.quiver->arrows();
  for (std::size_t a = 0; a < arr.size(); ++a) {
    const std::size_t sz = x.dim(arr[a].source) * x.dim(arr[a].target);
    l.fwd0.push_back(l.unknowns);
    l.rev0.push_back(l.unknowns + sz);
    l.unknowns += 2 * sz;
  }
  return l;
}

void unflatten(const EVec& v, const Layout& l, DoubledRep<Complex>& x) {
  for (std::size_t a = 0; a < x.fwd.size(); ++a) {
    auto& f = x.fwd[a];
    auto& r = x.rev[a];
    for (std::size_t i = 0; i < f.rows(); ++i)
      for (std::size_t j = 0; j < f.cols(); ++j) f(i, j) = v(static_cast<Eigen::Index>(l.fwd0[a] + i * f.cols() + j));
    for (std::size_t i = 0; i < r.rows(); ++i)
      for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) = v(static_cast<Eigen::Index>(l.rev0[a] + i * r.cols() + j));
  }
}

EVec residual_vector(const DoubledRep<Complex>& x, const std::vector<Complex>& zeta) {
  auto mu = moment_map(x);
  std::size_t rows = 0;
  for (const auto& m : mu) rows += m.rows() * m.rows();
  EVec f(static_cast<Eigen::Index>(rows));
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t r = 0; r < mu[i].rows(); ++r)
      for (std::size_t c = 0; c < mu[i].cols(); ++c) f(k++) = mu[i](r, c) - (r == c ? zeta[i] : Complex(0));
  return f;
}

EMat to_eigen(const MatC& m) {
  EMat out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return out;
}

struct Attempt {
  bool success = false;
  std::size_t iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  DoubledRep<Complex> rep;
  std::string why;
};

Attempt run_attempt(const std::shared_ptr<const Quiver>& q, const DimVector& v, const std::vector<Complex>& zeta,
                    const RealizerOptions& opt, std::size_t index) {
  Attempt out;
  DoubledRep<Complex> x(q, v);
  const Layout lay = layout_of(x);
  std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> nd(0.0, opt.init_scale);
  EVec p(static_cast<Eigen::Index>(lay.unknowns));
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = Complex(nd(rng), nd(rng));
  unflatten(p, lay, x);

  EVec f = residual_vector(x, zeta);
  double fn = f.norm();
  const double target = 1e-3 * opt.tol;  // polish well below the acceptance threshold
  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    out.iterations = it;
    const double scale = std::max(1.0, p.squaredNorm());
    if (fn <= target * scale || f.size() == 0 || p.size() == 0) break;
    EMat j = to_eigen(moment_jacobian(x));
    Eigen::CompleteOrthogonalDecomposition<EMat> cod(j);
    cod.setThreshold(1e-12);
    EVec step = cod.solve(-f);
    double alpha = 1.0;
    bool moved = false;
    while (alpha > 1e-10) {
      EVec trial = p + alpha * step;
      unflatten(trial, lay, x);
      EVec ft = residual_vector(x, zeta);
      const double tn = ft.norm();
      if (tn < (1.0 - 1e-4 * alpha) * fn) {
        p = trial;
        f = ft;
        fn = tn;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) {
      unflatten(p, lay, x);
      break;
    }
  }
  out.residual = fn;
  out.rep = x;
  if (fn > opt.tol * std::max(1.0, p.squaredNorm())) {
    out.why = "no convergence (residual " + std::to_string(fn) + ")";
    return out;
  }
  if (opt.require_stable && x.total_dim() > 0 && !is_stable_with_margin(x, opt.stability_margin)) {
    out.why = "converged to an unstable point";
    return out;
  }
  out.success = true;
  return out;
}

RealizeResult finish(std::optional<std::pair<std::size_t, Attempt>> best, std::size_t attempts) {
  RealizeResult res;
  if (!best) {
    res.attempts_failed = attempts;
    res.message = "all " + std::to_string(attempts) + " attempts failed; this is not a proof of emptiness";
    return res;
  }
  res.success = true;
  res.attempt = best->first;
  res.attempts_failed = best->first;
  res.iterations = best->second.iterations;
  res.residual = best->second.residual;
  res.rep = std::move(best->second.rep);
  res.message = "realized on attempt " + std::to_string(best->first);
  return res;
}

void check_args(const std::shared_ptr<const Quiver>& q, const DimVector& v, const std::vector<Complex>& zeta) {
  if (!q) throw std::invalid_argument("realize_numeric: no quiver");
  if (v.size() != q->num_vertices() || zeta.size() != q->num_vertices())
    throw std::invalid_argument("realize_numeric: dimension vector or parameter has the wrong size");
}

}  // namespace

RealizeResult realize_numeric_serial(std::shared_ptr<const Quiver> q, const DimVector& v,
                                     const std::vector<Complex>& zeta, const RealizerOptions& opt) {
  check_args(q, v, zeta);
  for (std::size_t i = 0; i < opt.attempts; ++i) {
    auto a = run_attempt(q, v, zeta, opt, i);
    if (a.success) return finish(std::make_pair(i, std::move(a)), opt.attempts);
  }
  return finish(std::nullopt, opt.attempts);
}

RealizeResult realize_numeric(std::shared_ptr<const Quiver> q, const DimVector& v, const std::vector<Complex>& zeta,
                              const RealizerOptions& opt) {
  check_args(q, v, zeta);
  const auto n = static_cast<long>(opt.attempts);
  std::atomic<long> best(n);
  std::vector<Attempt> results(opt.attempts);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    if (i > best.load()) continue;  // a lower index already won
    results[static_cast<std::size_t>(i)] = run_attempt(q, v, zeta, opt, static_cast<std::size_t>(i));
    if (results[static_cast<std::size_t>(i)].success) {
      long cur = best.load();
      while (i < cur && !best.compare_exchange_weak(cur, i)) {
      }
    }
  }
  const long b = best.load();
  if (b == n) return finish(std::nullopt, opt.attempts);
  return finish(std::make_pair(static_cast<std::size_t>(b), std::move(results[static_cast<std::size_t>(b)])), opt.attempts);
}

}  // namespace dsq
