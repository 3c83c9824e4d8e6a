#pragma once
// Experiments around the lambda = n/(n+1) equivalence: ranker comparisons on
// seeded corpora, lambda sweeps, and subtopic-coverage metrics. Everything
// here is a pure function of (seed, params); reports come out identical on
// every run.

#include <string>
#include <vector>

#include "ncall/generator.hpp"
#include "ncall/ranker.hpp"

namespace ncall {

struct EquivalenceReport {
  std::string corpus_id;
  int n = 1;
  int k = 1;
  double greedy_value = 0.0;  // achieved expected n-call@k of the greedy ranking
  double mmr_value = 0.0;     // same metric for MMR at lambda_headline(n)
  double value_gap = 0.0;     // greedy_value - mmr_value, signed
  std::vector<bool> per_step_tieset_match;  // over non-degenerate greedy steps
  int degenerate_step_count = 0;
};

struct SweepRow {
  double lambda = 0.0;
  double mean_value = 0.0;
  double mean_distinct_subtopics = 0.0;
};

struct DiversityMetrics {
  int distinct_subtopics = 0;
  double subtopic_recall = 0.0;  // fraction of query-probable subtopics covered
  bool approximate = false;      // argmax assignment used for fuzzy documents
};

// Runs greedy_rank and mmr_rank(lambda_headline(n), QueryConditioned),
// evaluates both rankings with the exact objective and compares per-step tie
// sets on non-degenerate steps.
EquivalenceReport compare_rankers(const Corpus& corpus, const Query& query, int n, int k,
                                  std::string corpus_id = {});

// For each lambda in grid, ranks `trials` corpora (seeds seed..seed+trials-1)
// with MMR and aggregates the mean achieved objective and mean distinct
// subtopic count. The corpora are shared across grid points.
std::vector<SweepRow> lambda_sweep(const GenParams& params, int n, int k,
                                   const std::vector<double>& grid, int trials);

// Distinct subtopics covered by the ranked documents and the fraction of
// query-probable subtopics among them. Documents without a point mass are
// assigned their argmax subtopic and the result is flagged approximate.
DiversityMetrics diversity_metrics(const Corpus& corpus, const std::vector<std::string>& ranking,
                                   const Query& query);

// Tabular output, fixed columns:
//   lambda,n,k,mean_value,mean_distinct_subtopics,value_gap,degenerate_steps
// Inapplicable columns stay empty.
std::string sweep_csv(const std::vector<SweepRow>& rows, int n, int k);
std::string reports_csv(const std::vector<EquivalenceReport>& reports);

// Same content as JSON arrays (full objects, nothing dropped).
std::string sweep_json(const std::vector<SweepRow>& rows, int n, int k);
std::string reports_json(const std::vector<EquivalenceReport>& reports);

}  // namespace ncall
