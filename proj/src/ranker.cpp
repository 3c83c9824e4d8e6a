#include "ncall/ranker.hpp"

#include <algorithm>

namespace ncall {

void MmrConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    fail(Errc::InvalidParams, "lambda must lie in [0, 1], got " + format_double(lambda));
  }
}

double sim1(const Eigen::Ref<const Vector>& query_dist, const Eigen::Ref<const Vector>& doc_dist) {
  if (query_dist.size() != doc_dist.size()) {
    fail(Errc::DimensionMismatch, "sim1 operands have dimensions " +
                                      std::to_string(query_dist.size()) + " and " +
                                      std::to_string(doc_dist.size()));
  }
  return query_dist.dot(doc_dist);
}

double sim1(const Query& query, const Document& candidate) {
  return sim1(query.dist.probs(), candidate.dist.probs());
}

double sim2(const Eigen::Ref<const Vector>& query_dist, const Eigen::Ref<const Vector>& selected_dist,
            const Eigen::Ref<const Vector>& candidate_dist, Sim2Mode mode) {
  if (selected_dist.size() != candidate_dist.size() ||
      (mode == Sim2Mode::QueryConditioned && query_dist.size() != candidate_dist.size())) {
    fail(Errc::DimensionMismatch, "sim2 operands have mismatched dimensions");
  }
  if (mode == Sim2Mode::QueryFree) {
    return selected_dist.dot(candidate_dist);
  }
  return (selected_dist.array() * query_dist.array() * candidate_dist.array()).sum();
}

double sim2(const Query& query, const Document& selected, const Document& candidate,
            Sim2Mode mode) {
  return sim2(query.dist.probs(), selected.dist.probs(), candidate.dist.probs(), mode);
}

ArgmaxResult argmax_by_id(const Corpus& corpus, const std::vector<Index>& candidates,
                          const Vector& scores) {
  if (candidates.empty()) {
    fail(Errc::NoCandidates, "no candidates to select from");
  }
  ArgmaxResult res;
  res.max_score = scores.maxCoeff();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (scores[static_cast<Index>(i)] >= res.max_score - kTieTol) {
      res.tie_set.push_back(candidates[i]);
    }
  }
  std::sort(res.tie_set.begin(), res.tie_set.end(), [&](Index a, Index b) {
    return corpus.doc(a).id < corpus.doc(b).id;
  });
  res.chosen = res.tie_set.front();
  return res;
}

std::vector<Index> unselected_candidates(const SelectionState& state) {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(state.corpus().num_docs() - state.size()));
  for (Index d = 0; d < state.corpus().num_docs(); ++d) {
    if (!state.contains(d)) out.push_back(d);
  }
  return out;
}

Vector greedy_scores(const SelectionState& state, const Query& query, int n,
                     const std::vector<Index>& candidates) {
  Vector scores(static_cast<Index>(candidates.size()));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scores[static_cast<Index>(i)] =
        marginal_gain(state, state.corpus().doc(candidates[i]), query, n);
  }
  return scores;
}

Vector mmr_scores(const SelectionState& state, const Query& query, const MmrConfig& config,
                  const std::vector<Index>& candidates) {
  config.validate();
  const Corpus& corpus = state.corpus();
  Vector scores(static_cast<Index>(candidates.size()));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Document& cand = corpus.doc(candidates[i]);
    if (state.empty()) {
      // Empty-selection convention: the max-similarity term is 0 and the
      // first pick is a pure relevance ranking under any lambda.
      scores[static_cast<Index>(i)] = sim1(query, cand);
      continue;
    }
    double max_sim2 = 0.0;
    for (Index pos = 0; pos < state.size(); ++pos) {
      max_sim2 = std::max(max_sim2, sim2(query, state.doc_at(pos), cand, config.sim2_mode));
    }
    scores[static_cast<Index>(i)] =
        config.lambda * sim1(query, cand) - (1.0 - config.lambda) * max_sim2;
  }
  return scores;
}

namespace {

struct StepOutcome {
  Index chosen;
  std::vector<Index> tie_set;
  double objective;  // marginal gain of the chosen doc (greedy) / score (MMR)
  bool degenerate;
};

StepOutcome greedy_step(const SelectionState& state, const Query& query, int n) {
  const std::vector<Index> candidates = unselected_candidates(state);
  if (candidates.empty()) {
    fail(Errc::NoCandidates, "no candidates to select from");
  }
  const Vector gains = greedy_scores(state, query, n, candidates);
  if (gains.maxCoeff() > kTieTol) {
    ArgmaxResult res = argmax_by_id(state.corpus(), candidates, gains);
    return {res.chosen, std::move(res.tie_set), res.max_score, false};
  }
  // Degenerate step: the objective carries no signal, fall back to sim1.
  Vector rel(static_cast<Index>(candidates.size()));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    rel[static_cast<Index>(i)] = sim1(query, state.corpus().doc(candidates[i]));
  }
  ArgmaxResult res = argmax_by_id(state.corpus(), candidates, rel);
  double gain = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i] == res.chosen) {
      gain = gains[static_cast<Index>(i)];
      break;
    }
  }
  return {res.chosen, std::move(res.tie_set), gain, true};
}

std::vector<std::string> ids_of(const Corpus& corpus, const std::vector<Index>& indices) {
  std::vector<std::string> ids;
  ids.reserve(indices.size());
  for (Index d : indices) ids.push_back(corpus.doc(d).id);
  return ids;
}

void check_k(const Corpus& corpus, int k) {
  if (k < 1 || k > corpus.num_docs()) {
    fail(Errc::KTooLarge, "k=" + std::to_string(k) + " outside [1, " +
                              std::to_string(corpus.num_docs()) + "]");
  }
}

}  // namespace

Index mmr_select_next(const SelectionState& state, const Query& query, const MmrConfig& config) {
  const std::vector<Index> candidates = unselected_candidates(state);
  if (candidates.empty()) {
    fail(Errc::NoCandidates, "no candidates to select from");
  }
  return argmax_by_id(state.corpus(), candidates, mmr_scores(state, query, config, candidates))
      .chosen;
}

Index greedy_select_next(const SelectionState& state, const Query& query, int n) {
  return greedy_step(state, query, n).chosen;
}

RankTrace greedy_rank(const Corpus& corpus, const Query& query, const NCallParams& params,
                      bool diagnostics) {
  params.validate();
  check_k(corpus, params.k);
  RankTrace trace;
  SelectionState state(corpus);
  for (int step = 0; step < params.k; ++step) {
    if (diagnostics) {
      trace.dropped_constants.push_back(dropped_constant(state, query, params.n));
    }
    StepOutcome out = greedy_step(state, query, params.n);
    trace.ranking.push_back(corpus.doc(out.chosen).id);
    trace.ranking_indices.push_back(out.chosen);
    trace.step_scores.push_back(out.objective);
    trace.tie_sets.push_back(ids_of(corpus, out.tie_set));
    trace.degenerate_steps.push_back(out.degenerate);
    state = state.extended(out.chosen);
  }
  return trace;
}

RankTrace mmr_rank(const Corpus& corpus, const Query& query, int k, const MmrConfig& config) {
  config.validate();
  check_k(corpus, k);
  RankTrace trace;
  SelectionState state(corpus);
  for (int step = 0; step < k; ++step) {
    const std::vector<Index> candidates = unselected_candidates(state);
    const Vector scores = mmr_scores(state, query, config, candidates);
    ArgmaxResult res = argmax_by_id(corpus, candidates, scores);
    trace.ranking.push_back(corpus.doc(res.chosen).id);
    trace.ranking_indices.push_back(res.chosen);
    trace.step_scores.push_back(res.max_score);
    trace.tie_sets.push_back(ids_of(corpus, res.tie_set));
    trace.degenerate_steps.push_back(scores.maxCoeff() <= kTieTol);
    state = state.extended(res.chosen);
  }
  return trace;
}

double lambda_for(int n, int m) {
  if (n < 1 || m < 0) {
    fail(Errc::InvalidParams, "lambda_for requires n >= 1 and m >= 0");
  }
  return static_cast<double>(n) / static_cast<double>(m + 1);
}

bool lambda_in_mmr_range(double lambda) { return lambda >= 0.0 && lambda <= 1.0; }

double lambda_headline(int n) {
  if (n < 1) {
    fail(Errc::InvalidParams, "lambda_headline requires n >= 1");
  }
  return static_cast<double>(n) / static_cast<double>(n + 1);
}

}  // namespace ncall
