#pragma once
// The two rankers under study: exact greedy expected-n-call@k selection and
// MMR, sharing one deterministic tie policy so their traces can be compared
// set-by-set.
//
// Tie policy: scores within kTieTol of the step maximum form the tie set;
// the lexicographically smallest document id wins. Degenerate greedy steps
// (every candidate's gain <= kTieTol) fall back to descending sim1 with the
// same tie policy and are flagged in the trace.

#include <string>
#include <vector>

#include "ncall/model.hpp"
#include "ncall/objective.hpp"

namespace ncall {

enum class Sim2Mode { QueryConditioned, QueryFree };

struct MmrConfig {
  double lambda = 0.5;
  Sim2Mode sim2_mode = Sim2Mode::QueryConditioned;

  void validate() const;  // InvalidParams unless 0 <= lambda <= 1
};

// Query-item relevance: the probability both land on the same subtopic,
// sum_t P(t|q) P(t_c = t | c).
double sim1(const Eigen::Ref<const Vector>& query_dist, const Eigen::Ref<const Vector>& doc_dist);
double sim1(const Query& query, const Document& candidate);

// Item-item similarity. QueryConditioned weighs the shared subtopic by the
// query, sum_t P(t_i=t|s_i) P(t|q) P(t_c=t|c); QueryFree drops the query
// factor.
double sim2(const Eigen::Ref<const Vector>& query_dist, const Eigen::Ref<const Vector>& selected_dist,
            const Eigen::Ref<const Vector>& candidate_dist, Sim2Mode mode);
double sim2(const Query& query, const Document& selected, const Document& candidate, Sim2Mode mode);

struct RankTrace {
  std::vector<std::string> ranking;            // chosen ids, selection order
  std::vector<Index> ranking_indices;          // same picks as corpus indices
  std::vector<double> step_scores;             // objective value of the chosen doc
  std::vector<std::vector<std::string>> tie_sets;  // ids within kTieTol of the step max, sorted
  std::vector<bool> degenerate_steps;          // all candidates scored <= kTieTol
  std::vector<double> dropped_constants;       // greedy diagnostics; empty unless requested
};

// Deterministic argmax over candidate scores: ties within kTieTol, broken
// by ascending document id. Exposed so tests can drive the policy directly.
struct ArgmaxResult {
  Index chosen = -1;
  std::vector<Index> tie_set;  // sorted by document id
  double max_score = 0.0;
};
ArgmaxResult argmax_by_id(const Corpus& corpus, const std::vector<Index>& candidates,
                          const Vector& scores);

std::vector<Index> unselected_candidates(const SelectionState& state);

// Per-candidate scores for one step of each ranker, candidate order as given.
Vector greedy_scores(const SelectionState& state, const Query& query, int n,
                     const std::vector<Index>& candidates);
Vector mmr_scores(const SelectionState& state, const Query& query, const MmrConfig& config,
                  const std::vector<Index>& candidates);

// One MMR step: argmax of lambda*sim1 - (1-lambda)*max_selected sim2 over
// the remaining candidates. On an empty selection the step scores are the
// raw sim1 values, so the first pick is a pure relevance ranking under any
// lambda, including lambda = 0. Errors: NoCandidates.
Index mmr_select_next(const SelectionState& state, const Query& query, const MmrConfig& config);

// One greedy step: tie-broken argmax of marginal_gain, with the degenerate
// fallback described above. Errors: NoCandidates.
Index greedy_select_next(const SelectionState& state, const Query& query, int n);

// Full traces. Errors: KTooLarge when k exceeds the corpus size.
RankTrace greedy_rank(const Corpus& corpus, const Query& query, const NCallParams& params,
                      bool diagnostics = false);
RankTrace mmr_rank(const Corpus& corpus, const Query& query, int k, const MmrConfig& config);

// Trade-off weight implied by a step with m relevant selections: n/(m+1).
// Values above 1 are returned as-is; lambda_in_mmr_range reports whether the
// value is a usable MMR weight.
double lambda_for(int n, int m);
bool lambda_in_mmr_range(double lambda);

// n/(n+1): the weight when selections carry the expected n relevant items.
double lambda_headline(int n);

}  // namespace ncall
