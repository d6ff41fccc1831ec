#pragma once

// Root system of a loop-free quiver and the nonemptiness criterion for
// quiver varieties with stable points.

#include <cstddef>
#include <string>
#include <vector>

#include "dsq/quiver.hpp"
#include "dsq/scalar.hpp"

namespace dsq {

class CartanData {
 public:
  explicit CartanData(const Quiver& q);

  std::size_t size() const { return adj_.size(); }
  /// Number of arrows between i and j in either direction (i != j).
  long adjacency(std::size_t i, std::size_t j) const { return adj_[i][j]; }
  /// (u, v) = sum 2 u_i v_i - sum_{i != j} a_ij u_i v_j.
  long bilinear(const DimVector& u, const DimVector& v) const;
  /// q(v) = (v, v) / 2.
  long tits_form(const DimVector& v) const { return bilinear(v, v) / 2; }
  /// (v, e_i).
  long pair_simple(const DimVector& v, std::size_t i) const;
  bool support_connected(const DimVector& v) const;

 private:
  std::vector<std::vector<long>> adj_;
};

/// Positive (real or imaginary) root test by reflection to the fundamental
/// region. Throws std::invalid_argument on quivers with loops or negative
/// entries; the zero vector is not a root.
bool is_positive_root(const CartanData& c, const DimVector& v);
bool is_positive_root(const Quiver& q, const DimVector& v);

/// All positive roots 0 < w <= v with zeta . w = 0, lexicographically sorted.
std::vector<DimVector> summand_candidates(const Quiver& q, const DimVector& v, const std::vector<Rational>& zeta);

enum class Verdict { Nonempty, Empty, Undecided };

struct CriterionResult {
  Verdict verdict = Verdict::Undecided;
  int failed_condition = 0;  // 1, 2 or 3 when Empty
  std::string reason;
  std::vector<DimVector> witness;  // violating decomposition for condition 3
  long delta_v = 0;
  long witness_delta_sum = 0;
  std::size_t states_explored = 0;
};

struct CriterionOptions {
  std::size_t max_states = 1'000'000;  // memoized search states before giving up
};

/// (1) v is a positive root, (2) zeta . v = 0, (3) Delta(v) > sum Delta(w_j)
/// for every decomposition v = w_1 + ... + w_l (l >= 2) into positive roots
/// with zeta . w_j = 0. Summands may repeat.
CriterionResult cb_solvable(const Quiver& q, const DimVector& v, const std::vector<Rational>& zeta,
                            const CriterionOptions& opt = {});

std::string to_string(Verdict v);

}  // namespace dsq
