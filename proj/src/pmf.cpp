#include "ncall/pmf.hpp"

#include <cmath>

namespace ncall {

namespace {

// Accepts the slight positive slop that validated distributions can carry
// (sum tolerance kSumTol), clamps it away for the recursion.
double checked_prob(double p, Index i) {
  if (!(p >= 0.0) || p > 1.0 + kSumTol) {
    fail(Errc::ProbabilityOutOfRange,
         "success probability " + format_double(p) + " at index " + std::to_string(i) +
             " outside [0, 1]",
         p);
  }
  return p > 1.0 ? 1.0 : p;
}

}  // namespace

RelCountPmf RelCountPmf::checked(Vector pmf) {
  if (pmf.size() < 1) {
    fail(Errc::InvariantViolation, "pmf must cover at least the count 0");
  }
  double sum = 0.0;
  for (Index m = 0; m < pmf.size(); ++m) {
    double& p = pmf[m];
    if (p < -1e-15 || p > 1.0 + 1e-15 || !std::isfinite(p)) {
      fail(Errc::InvariantViolation,
           "pmf entry " + format_double(p) + " at count " + std::to_string(m) +
               " outside [0, 1]",
           p);
    }
    p = std::min(std::max(p, 0.0), 1.0);
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTol) {
    fail(Errc::InvariantViolation, "pmf sums to " + format_double(sum), sum);
  }
  return RelCountPmf(std::move(pmf));
}

double RelCountPmf::prob_geq(Index m) const {
  if (m <= 0) return 1.0;
  if (m > k()) return 0.0;
  double tail = 0.0;
  for (Index i = m; i <= k(); ++i) tail += probs_[i];
  return std::min(tail, 1.0);
}

RelCountPmf rel_count_pmf(const Eigen::Ref<const Vector>& success_probs) {
  const Index k = success_probs.size();
  Vector pmf = Vector::Zero(k + 1);
  pmf[0] = 1.0;
  for (Index i = 0; i < k; ++i) {
    const double p = checked_prob(success_probs[i], i);
    for (Index m = i + 1; m >= 1; --m) {
      pmf[m] = pmf[m] * (1.0 - p) + pmf[m - 1] * p;
    }
    pmf[0] *= (1.0 - p);
  }
  return RelCountPmf::checked(std::move(pmf));
}

RelCountPmf rel_count_pmf_bruteforce(const Eigen::Ref<const Vector>& success_probs) {
  const Index k = success_probs.size();
  if (k > kBruteForceMaxItems) {
    fail(Errc::TooManyItems, "brute-force enumeration capped at " +
                                 std::to_string(kBruteForceMaxItems) + " items, got " +
                                 std::to_string(k));
  }
  Vector probs(k);
  for (Index i = 0; i < k; ++i) probs[i] = checked_prob(success_probs[i], i);

  Vector pmf = Vector::Zero(k + 1);
  const std::uint64_t outcomes = std::uint64_t{1} << k;
  for (std::uint64_t mask = 0; mask < outcomes; ++mask) {
    double prod = 1.0;
    int ones = 0;
    for (Index i = 0; i < k; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        prod *= probs[i];
        ++ones;
      } else {
        prod *= 1.0 - probs[i];
      }
    }
    pmf[ones] += prod;
  }
  return RelCountPmf::checked(std::move(pmf));
}

}  // namespace ncall
