#include "dsq/orbits.hpp"

#include <cmath>
#include <numeric>

namespace dsq {

namespace {

// Single-linkage clusters of eigenvalues within tol.
std::vector<std::vector<Complex>> cluster(const std::vector<Complex>& values, double tol) {
  std::vector<std::size_t> parent(values.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      if (std::abs(values[i] - values[j]) <= tol) parent[root(i)] = root(j);
  std::vector<std::vector<Complex>> groups;
  std::vector<long> slot(values.size(), -1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::size_t r = root(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].push_back(values[i]);
  }
  return groups;
}

Complex mean(const std::vector<Complex>& g) {
  Complex s(0);
  for (auto z : g) s += z;
  return s / static_cast<double>(g.size());
}

// Jordan blocks of lam from the nullities of (L - lam)^j, j = 1..max_power.
template <class S, class RankFn>
EigenBlocks<S> blocks_from_ranks(const Matrix<S>& l, const S& lam, std::size_t max_power, RankFn rank_of) {
  const std::size_t n = l.rows();
  Matrix<S> shifted = l - Matrix<S>::scalar(n, lam);
  Matrix<S> power = shifted;
  std::size_t prev_null = 0;
  std::vector<std::size_t> ge;
  for (std::size_t j = 1; j <= max_power; ++j) {
    std::size_t null = n - rank_of(power);
    if (null < prev_null) null = prev_null;
    if (null == prev_null) break;
    ge.push_back(null - prev_null);
    prev_null = null;
    power = power * shifted;
  }
  EigenBlocks<S> e{lam, {}};
  for (std::size_t j = 0; j < ge.size(); ++j) {
    std::size_t next = j + 1 < ge.size() ? ge[j + 1] : 0;
    if (next > ge[j]) throw std::domain_error("jordan_data: inconsistent nullity profile");
    for (std::size_t b = 0; b < ge[j] - next; ++b) e.blocks.push_back(j + 1);
  }
  std::sort(e.blocks.begin(), e.blocks.end(), std::greater<>());
  return e;
}

}  // namespace

std::vector<EigenBlocks<Complex>> jordan_data(const MatC& l, const SpectrumOptions& opt) {
  if (l.rows() != l.cols()) throw std::invalid_argument("jordan_data: matrix must be square");
  const std::size_t n = l.rows();
  if (n == 0) return {};
  auto ed = eigen_decompose(l);
  double tol = opt.cluster_tol * std::max(1.0, l.norm());
  std::vector<EigenBlocks<Complex>> out;
  for (const auto& g : cluster(ed.values, tol)) {
    Complex lam = mean(g);
    auto e = blocks_from_ranks<Complex>(l, lam, g.size() + 1, [&](const MatC& m) { return rank(m, {opt.rank_tol}); });
    if (e.multiplicity() != g.size())
      throw std::domain_error("jordan_data: eigenvalue cluster near " + std::to_string(lam.real()) + "+" +
                              std::to_string(lam.imag()) + "i has " + std::to_string(g.size()) +
                              " members but rank profile accounts for " + std::to_string(e.multiplicity()) +
                              "; adjust the clustering tolerance");
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return lex_less(a.value, b.value); });
  return out;
}

std::vector<EigenBlocks<Rational>> jordan_data(const MatQ& l, const SpectrumOptions& opt) {
  if (l.rows() != l.cols()) throw std::invalid_argument("jordan_data: matrix must be square");
  const std::size_t n = l.rows();
  if (n == 0) return {};
  auto ed = eigen_decompose(l.cast<Complex>());
  // Candidates are verified exactly, so a loose clustering only helps to
  // recover defective eigenvalues that the float solver splits.
  double tol = std::max(opt.cluster_tol, 1e-5) * std::max(1.0, l.cast<Complex>().norm());
  std::vector<Rational> cands;
  auto add = [&](Complex z) {
    try {
      Rational r = rationalize(z, opt.max_denominator);
      if (std::find(cands.begin(), cands.end(), r) == cands.end()) cands.push_back(r);
    } catch (const std::domain_error&) {
    }
  };
  for (const auto& g : cluster(ed.values, tol)) {
    add(mean(g));
    for (auto z : g) add(z);
  }
  std::vector<EigenBlocks<Rational>> out;
  std::size_t total = 0;
  for (const auto& lam : cands) {
    auto e = blocks_from_ranks<Rational>(l, lam, n, [](const MatQ& m) { return rank(m); });
    if (e.multiplicity() == 0) continue;
    total += e.multiplicity();
    out.push_back(std::move(e));
  }
  if (total != n)
    throw std::domain_error("jordan_data: the spectrum is not made of Gaussian rationals with denominator <= " +
                            std::to_string(opt.max_denominator) + "; supply Jordan data instead");
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return lex_less(a.value, b.value); });
  return out;
}

}  // namespace dsq
