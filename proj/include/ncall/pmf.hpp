#pragma once
// Distribution of R_k, the number of relevant items among k selections,
// given independent per-item match probabilities. Two routes: an O(k^2)
// forward DP and a 2^k brute-force enumeration kept as a cross-check.

#include <Eigen/Dense>

#include "ncall/common.hpp"
#include "ncall/model.hpp"

namespace ncall {

// pmf over counts 0..k; entry m is P(R_k = m). Entries for m > k do not
// exist by construction; prob_eq / prob_geq treat them as 0.
class RelCountPmf {
 public:
  // Asserts entries lie in [-1e-15, 1+1e-15] and sum to 1 within kSumTol,
  // then clamps float dust into [0, 1].
  static RelCountPmf checked(Vector pmf);

  Index k() const { return probs_.size() - 1; }
  const Vector& probs() const { return probs_; }

  double prob_eq(Index m) const {
    return (m < 0 || m > k()) ? 0.0 : probs_[m];
  }
  // P(R_k >= m); 1 for m <= 0, 0 for m > k.
  double prob_geq(Index m) const;

 private:
  explicit RelCountPmf(Vector probs) : probs_(std::move(probs)) {}
  Vector probs_;
};

// Forward DP over the count axis, one multiply-add pass per item.
// success_probs[i] = P(t_i = t | s_i); entries must lie in [0, 1].
RelCountPmf rel_count_pmf(const Eigen::Ref<const Vector>& success_probs);

// Independent oracle: sums the product probability of every relevance
// outcome vector, grouped by popcount. Rejects more than
// kBruteForceMaxItems items.
RelCountPmf rel_count_pmf_bruteforce(const Eigen::Ref<const Vector>& success_probs);

}  // namespace ncall
