#include "dsq/roots.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>

namespace dsq {

CartanData::CartanData(const Quiver& q) : adj_(q.num_vertices(), std::vector<long>(q.num_vertices(), 0)) {
  if (q.has_loops()) throw std::invalid_argument("root system: quivers with loops are not supported");
  for (const auto& a : q.arrows()) {
    ++adj_[a.source][a.target];
    ++adj_[a.target][a.source];
  }
}

long CartanData::bilinear(const DimVector& u, const DimVector& v) const {
  if (u.size() != size() || v.size() != size()) throw std::invalid_argument("bilinear: size mismatch");
  long s = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    s += 2 * u[i] * v[i];
    for (std::size_t j = 0; j < size(); ++j)
      if (i != j) s -= adj_[i][j] * u[i] * v[j];
  }
  return s;
}

long CartanData::pair_simple(const DimVector& v, std::size_t i) const {
  long s = 2 * v[i];
  for (std::size_t j = 0; j < size(); ++j)
    if (j != i) s -= adj_[i][j] * v[j];
  return s;
}

bool CartanData::support_connected(const DimVector& v) const {
  std::vector<std::size_t> supp;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) supp.push_back(i);
  if (supp.empty()) return false;
  std::vector<bool> seen(size(), false);
  std::vector<std::size_t> stack{supp.front()};
  seen[supp.front()] = true;
  std::size_t reached = 0;
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    ++reached;
    for (std::size_t j : supp)
      if (!seen[j] && adj_[i][j] > 0) {
        seen[j] = true;
        stack.push_back(j);
      }
  }
  return reached == supp.size();
}

bool is_positive_root(const CartanData& c, const DimVector& v0) {
  if (v0.size() != c.size()) throw std::invalid_argument("is_positive_root: size mismatch");
  for (long x : v0)
    if (x < 0) throw std::invalid_argument("is_positive_root: negative entry");
  DimVector v = v0;
  for (;;) {
    long total = 0;
    for (long x : v) {
      if (x < 0) return false;
      total += x;
    }
    if (total == 0) return false;
    if (total == 1) return true;
    bool reflected = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      long p = c.pair_simple(v, i);
      if (p > 0) {
        v[i] -= p;
        reflected = true;
        break;
      }
    }
    if (!reflected) return c.support_connected(v);
  }
}

bool is_positive_root(const Quiver& q, const DimVector& v) { return is_positive_root(CartanData(q), v); }

std::vector<DimVector> summand_candidates(const Quiver& q, const DimVector& v, const std::vector<Rational>& zeta) {
  if (v.size() != q.num_vertices() || zeta.size() != v.size())
    throw std::invalid_argument("summand_candidates: size mismatch");
  CartanData c(q);
  std::vector<DimVector> out;
  DimVector w(v.size(), 0);
  // Odometer over 0 <= w <= v; emitted in lexicographic order.
  for (;;) {
    bool nonzero = std::any_of(w.begin(), w.end(), [](long x) { return x != 0; });
    if (nonzero && zeta_dot(zeta, w).is_zero() && is_positive_root(c, w)) out.push_back(w);
    std::size_t i = v.size();
    while (i > 0) {
      --i;
      if (w[i] < v[i]) {
        ++w[i];
        break;
      }
      w[i] = 0;
      if (i == 0) return out;
    }
    if (v.empty()) return out;
  }
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Nonempty:
      return "nonempty";
    case Verdict::Empty:
      return "empty";
    case Verdict::Undecided:
      return "undecided";
  }
  return "undecided";
}

namespace {

struct SearchCap {};

// Maximal sum of Delta over decompositions of a remainder into candidates.
// The maximum does not depend on summand order, so the memo is keyed on the
// remainder alone.
class DecompositionSearch {
 public:
  DecompositionSearch(const Quiver& q, std::vector<DimVector> cands, std::size_t cap) : cands_(std::move(cands)), cap_(cap) {
    for (const auto& w : cands_) deltas_.push_back(delta(q, w));
  }

  std::optional<long> best(const DimVector& r) {
    if (std::all_of(r.begin(), r.end(), [](long x) { return x == 0; })) return 0L;
    auto it = memo_.find(r);
    if (it != memo_.end()) return it->second.value;
    if (memo_.size() >= cap_) throw SearchCap{};
    Entry e;
    for (std::size_t j = 0; j < cands_.size(); ++j) {
      const auto& w = cands_[j];
      bool fits = true;
      for (std::size_t i = 0; i < r.size() && fits; ++i) fits = w[i] <= r[i];
      if (!fits) continue;
      DimVector rest = r;
      for (std::size_t i = 0; i < r.size(); ++i) rest[i] -= w[i];
      auto sub = best(rest);
      if (!sub) continue;
      long val = deltas_[j] + *sub;
      if (!e.value || val > *e.value) {
        e.value = val;
        e.choice = j;
      }
    }
    memo_[r] = e;
    return e.value;
  }

  std::vector<DimVector> witness(DimVector r) const {
    std::vector<DimVector> out;
    while (std::any_of(r.begin(), r.end(), [](long x) { return x != 0; })) {
      const Entry& e = memo_.at(r);
      out.push_back(cands_[e.choice]);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= cands_[e.choice][i];
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
  }

  std::size_t states() const { return memo_.size(); }

 private:
  struct Entry {
    std::optional<long> value;
    std::size_t choice = 0;
  };
  std::vector<DimVector> cands_;
  std::vector<long> deltas_;
  std::size_t cap_;
  std::map<DimVector, Entry> memo_;
};

}  // namespace

CriterionResult cb_solvable(const Quiver& q, const DimVector& v, const std::vector<Rational>& zeta,
                            const CriterionOptions& opt) {
  CriterionResult res;
  CartanData c(q);
  if (v.size() != q.num_vertices() || zeta.size() != v.size()) throw std::invalid_argument("cb_solvable: size mismatch");
  res.delta_v = delta(q, v);

  bool nonneg = std::all_of(v.begin(), v.end(), [](long x) { return x >= 0; });
  if (!nonneg || !is_positive_root(c, v)) {
    res.verdict = Verdict::Empty;
    res.failed_condition = 1;
    res.reason = "dimension vector is not a positive root";
    return res;
  }
  if (!zeta_dot(zeta, v).is_zero()) {
    res.verdict = Verdict::Empty;
    res.failed_condition = 2;
    res.reason = "zeta . v = " + zeta_dot(zeta, v).str() + " is not zero";
    return res;
  }

  auto cands = summand_candidates(q, v, zeta);
  std::erase(cands, v);
  DecompositionSearch search(q, std::move(cands), opt.max_states);
  std::optional<long> best;
  try {
    best = search.best(v);
  } catch (const SearchCap&) {
    res.states_explored = search.states();
    res.verdict = Verdict::Undecided;
    res.reason = "decomposition search exceeded " + std::to_string(opt.max_states) + " states";
    return res;
  }
  res.states_explored = search.states();
  if (best && *best >= res.delta_v) {
    res.verdict = Verdict::Empty;
    res.failed_condition = 3;
    res.witness = search.witness(v);
    res.witness_delta_sum = *best;
    res.reason = "decomposition with Delta sum " + std::to_string(*best) + " >= Delta(v) = " +
                 std::to_string(res.delta_v);
    return res;
  }
  res.verdict = Verdict::Nonempty;
  return res;
}

}  // namespace dsq
