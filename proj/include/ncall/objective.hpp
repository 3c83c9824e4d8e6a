#pragma once
// Exact expected n-call@k and the reduced greedy objective.
//
// expected_n_call marginalizes the query subtopic and sums the tail of the
// per-subtopic relevance-count pmf. marginal_gain is the candidate-dependent
// part of the extended objective: the full value of S u {c} minus a
// candidate-independent constant, so both share their argmax.
// unrolled_objective recomputes the gain by explicit subset enumeration and
// exists as an independent cross-check of the DP route.

#include "ncall/model.hpp"
#include "ncall/pmf.hpp"

namespace ncall {

struct NCallParams {
  int n = 1;  // required relevant count
  int k = 1;  // result set size

  // InvalidParams unless 1 <= n <= k; the event R_k >= n is impossible for
  // n > k and is rejected up front.
  void validate() const;
};

// 1 iff the item subtopic matches the query subtopic.
int relevance_indicator(const SubtopicId& query_subtopic, const SubtopicId& item_subtopic);

// P(t_i = t | s_i) for each selected document, in selection order.
Vector success_probs(const SelectionState& state, Index t);

// E[R_k >= n | s_1..s_k, q] with k = |state|. Errors: DimensionMismatch
// when the query or state does not line up with params.
double expected_n_call(const SelectionState& state, const Query& query, const NCallParams& params);

// Reduced greedy objective: sum_t P(t|q) P(t_c = t | c) P(R_{|S|} = n-1 | S, t).
// Zero whenever n-1 selections cannot be relevant (e.g. |state| < n-1).
double marginal_gain(const SelectionState& state, const Document& candidate, const Query& query,
                     int n);

// The candidate-independent summand dropped by marginal_gain:
// sum_t P(t|q) P(R_{|S|} >= n | S, t).
double dropped_constant(const SelectionState& state, const Query& query, int n);

// Same value as marginal_gain, computed by enumerating every (n-1)-subset
// of the selected positions. Valid for all 1 <= n, any state size up to
// kBruteForceMaxItems.
double unrolled_objective(const SelectionState& state, const Document& candidate,
                          const Query& query, int n);

}  // namespace ncall
