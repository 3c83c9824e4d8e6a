#include "ncall/objective.hpp"

#include <string>

namespace ncall {

namespace {

void check_query_dim(const SelectionState& state, const Query& query) {
  if (query.dist.size() != state.corpus().num_subtopics()) {
    fail(Errc::DimensionMismatch,
         "query dimension " + std::to_string(query.dist.size()) + " does not match corpus (" +
             std::to_string(state.corpus().num_subtopics()) + " subtopics)");
  }
}

void check_candidate(const SelectionState& state, const Document& candidate) {
  if (candidate.dist.size() != state.corpus().num_subtopics()) {
    fail(Errc::DimensionMismatch, "candidate '" + candidate.id + "' dimension " +
                                      std::to_string(candidate.dist.size()) +
                                      " does not match corpus");
  }
  for (Index pos = 0; pos < state.size(); ++pos) {
    if (state.doc_at(pos).id == candidate.id) {
      fail(Errc::CandidateAlreadySelected, "candidate '" + candidate.id + "' already selected");
    }
  }
}

}  // namespace

void NCallParams::validate() const {
  if (n < 1 || k < 1 || n > k) {
    fail(Errc::InvalidParams, "require 1 <= n <= k, got n=" + std::to_string(n) +
                                  " k=" + std::to_string(k));
  }
}

int relevance_indicator(const SubtopicId& query_subtopic, const SubtopicId& item_subtopic) {
  return query_subtopic.index == item_subtopic.index ? 1 : 0;
}

Vector success_probs(const SelectionState& state, Index t) {
  Vector probs(state.size());
  for (Index pos = 0; pos < state.size(); ++pos) {
    probs[pos] = state.doc_at(pos).dist[t];
  }
  return probs;
}

double expected_n_call(const SelectionState& state, const Query& query,
                       const NCallParams& params) {
  params.validate();
  check_query_dim(state, query);
  if (state.size() != params.k) {
    fail(Errc::DimensionMismatch, "state has " + std::to_string(state.size()) +
                                      " selections, params.k=" + std::to_string(params.k));
  }
  double total = 0.0;
  for (Index t = 0; t < query.dist.size(); ++t) {
    const double qt = query.dist[t];
    if (qt == 0.0) continue;
    total += qt * rel_count_pmf(success_probs(state, t)).prob_geq(params.n);
  }
  return std::min(total, 1.0);
}

double marginal_gain(const SelectionState& state, const Document& candidate, const Query& query,
                     int n) {
  if (n < 1) {
    fail(Errc::InvalidParams, "n must be >= 1, got " + std::to_string(n));
  }
  check_query_dim(state, query);
  check_candidate(state, candidate);
  if (n - 1 > state.size()) return 0.0;

  double total = 0.0;
  for (Index t = 0; t < query.dist.size(); ++t) {
    const double w = query.dist[t] * candidate.dist[t];
    if (w == 0.0) continue;
    total += w * rel_count_pmf(success_probs(state, t)).prob_eq(n - 1);
  }
  return total;
}

double dropped_constant(const SelectionState& state, const Query& query, int n) {
  if (n < 1) {
    fail(Errc::InvalidParams, "n must be >= 1, got " + std::to_string(n));
  }
  check_query_dim(state, query);
  double total = 0.0;
  for (Index t = 0; t < query.dist.size(); ++t) {
    const double qt = query.dist[t];
    if (qt == 0.0) continue;
    total += qt * rel_count_pmf(success_probs(state, t)).prob_geq(n);
  }
  return total;
}

double unrolled_objective(const SelectionState& state, const Document& candidate,
                          const Query& query, int n) {
  if (n < 1) {
    fail(Errc::InvalidParams, "n must be >= 1, got " + std::to_string(n));
  }
  if (state.size() > kBruteForceMaxItems) {
    fail(Errc::TooManyItems, "subset enumeration capped at " +
                                 std::to_string(kBruteForceMaxItems) + " selections, got " +
                                 std::to_string(state.size()));
  }
  check_query_dim(state, query);
  check_candidate(state, candidate);

  const Index count = state.size();
  const Index pick = n - 1;
  if (pick > count) return 0.0;

  double total = 0.0;
  for (Index t = 0; t < query.dist.size(); ++t) {
    const double w = query.dist[t] * candidate.dist[t];
    if (w == 0.0) continue;
    const Vector probs = success_probs(state, t);

    // Sum over ordered index subsets J of size n-1: selected positions in J
    // contribute their match probability, the rest their miss probability.
    double inner = 0.0;
    std::vector<Index> comb(static_cast<std::size_t>(pick));
    for (Index i = 0; i < pick; ++i) comb[static_cast<std::size_t>(i)] = i;
    while (true) {
      double prod = 1.0;
      std::size_t next_in_comb = 0;
      for (Index i = 0; i < count; ++i) {
        if (next_in_comb < comb.size() && comb[next_in_comb] == i) {
          prod *= probs[i];
          ++next_in_comb;
        } else {
          prod *= 1.0 - probs[i];
        }
      }
      inner += prod;

      // Advance to the next combination in lexicographic order.
      Index slot = pick - 1;
      while (slot >= 0 && comb[static_cast<std::size_t>(slot)] == count - pick + slot) --slot;
      if (slot < 0) break;
      ++comb[static_cast<std::size_t>(slot)];
      for (Index j = slot + 1; j < pick; ++j) {
        comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    total += w * inner;
  }
  return total;
}

}  // namespace ncall
