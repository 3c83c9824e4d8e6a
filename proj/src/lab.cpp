#include "ncall/lab.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ncall {

namespace {

double achieved_value(const Corpus& corpus, const RankTrace& trace, const Query& query, int n) {
  SelectionState state(corpus, trace.ranking_indices);
  return expected_n_call(state, query,
                         NCallParams{n, static_cast<int>(trace.ranking_indices.size())});
}

}  // namespace

EquivalenceReport compare_rankers(const Corpus& corpus, const Query& query, int n, int k,
                                  std::string corpus_id) {
  NCallParams params{n, k};
  params.validate();

  const RankTrace greedy = greedy_rank(corpus, query, params);
  const MmrConfig config{lambda_headline(n), Sim2Mode::QueryConditioned};
  const RankTrace mmr = mmr_rank(corpus, query, k, config);

  EquivalenceReport report;
  report.corpus_id = std::move(corpus_id);
  report.n = n;
  report.k = k;
  report.greedy_value = achieved_value(corpus, greedy, query, n);
  report.mmr_value = achieved_value(corpus, mmr, query, n);
  report.value_gap = report.greedy_value - report.mmr_value;
  for (int step = 0; step < k; ++step) {
    if (greedy.degenerate_steps[static_cast<std::size_t>(step)]) {
      ++report.degenerate_step_count;
      continue;
    }
    report.per_step_tieset_match.push_back(greedy.tie_sets[static_cast<std::size_t>(step)] ==
                                           mmr.tie_sets[static_cast<std::size_t>(step)]);
  }
  return report;
}

std::vector<SweepRow> lambda_sweep(const GenParams& params, int n, int k,
                                   const std::vector<double>& grid, int trials) {
  NCallParams{n, k}.validate();
  if (trials < 1) {
    fail(Errc::InvalidParams, "trials must be >= 1");
  }
  for (double lambda : grid) {
    if (!lambda_in_mmr_range(lambda)) {
      fail(Errc::InvalidParams, "grid value " + format_double(lambda) + " outside [0, 1]");
    }
  }

  std::vector<std::pair<Corpus, Query>> corpora;
  corpora.reserve(static_cast<std::size_t>(trials));
  for (int i = 0; i < trials; ++i) {
    GenParams trial = params;
    trial.seed = params.seed + static_cast<std::uint64_t>(i);
    corpora.push_back(generate_corpus(trial));
  }

  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double lambda : grid) {
    const MmrConfig config{lambda, Sim2Mode::QueryConditioned};
    double value_sum = 0.0;
    double distinct_sum = 0.0;
    for (const auto& [corpus, query] : corpora) {
      const RankTrace trace = mmr_rank(corpus, query, k, config);
      value_sum += achieved_value(corpus, trace, query, n);
      distinct_sum += diversity_metrics(corpus, trace.ranking, query).distinct_subtopics;
    }
    rows.push_back(SweepRow{lambda, value_sum / trials, distinct_sum / trials});
  }
  return rows;
}

DiversityMetrics diversity_metrics(const Corpus& corpus, const std::vector<std::string>& ranking,
                                   const Query& query) {
  DiversityMetrics out;
  std::set<Index> covered;
  for (const std::string& id : ranking) {
    const Index d = corpus.index_of(id);
    if (d < 0) {
      fail(Errc::UnknownDocumentId, "ranking id '" + id + "' not in corpus");
    }
    const SubtopicDistribution& dist = corpus.doc(d).dist;
    const Index point = dist.point_mass_index();
    if (point >= 0) {
      covered.insert(point);
    } else {
      covered.insert(dist.argmax());
      out.approximate = true;
    }
  }
  out.distinct_subtopics = static_cast<int>(covered.size());

  int probable = 0;
  int hit = 0;
  for (Index t = 0; t < query.dist.size(); ++t) {
    if (query.dist[t] > 0.0) {
      ++probable;
      if (covered.count(t)) ++hit;
    }
  }
  out.subtopic_recall = probable == 0 ? 0.0 : static_cast<double>(hit) / probable;
  return out;
}

namespace {

constexpr const char* kCsvHeader =
    "lambda,n,k,mean_value,mean_distinct_subtopics,value_gap,degenerate_steps\n";

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows, int n, int k) {
  std::ostringstream out;
  out << kCsvHeader;
  for (const SweepRow& row : rows) {
    out << format_double(row.lambda) << ',' << n << ',' << k << ',' << format_double(row.mean_value)
        << ',' << format_double(row.mean_distinct_subtopics) << ",,\n";
  }
  return out.str();
}

std::string reports_csv(const std::vector<EquivalenceReport>& reports) {
  std::ostringstream out;
  out << kCsvHeader;
  for (const EquivalenceReport& r : reports) {
    out << format_double(lambda_headline(r.n)) << ',' << r.n << ',' << r.k << ','
        << format_double(r.greedy_value) << ",," << format_double(r.value_gap) << ','
        << r.degenerate_step_count << '\n';
  }
  return out.str();
}

std::string sweep_json(const std::vector<SweepRow>& rows, int n, int k) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SweepRow& row : rows) {
    arr.push_back({{"lambda", row.lambda},
                   {"n", n},
                   {"k", k},
                   {"mean_value", row.mean_value},
                   {"mean_distinct_subtopics", row.mean_distinct_subtopics}});
  }
  return arr.dump(2) + "\n";
}

std::string reports_json(const std::vector<EquivalenceReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const EquivalenceReport& r : reports) {
    nlohmann::ordered_json obj{{"corpus_id", r.corpus_id},
                               {"n", r.n},
                               {"k", r.k},
                               {"lambda", lambda_headline(r.n)},
                               {"greedy_value", r.greedy_value},
                               {"mmr_value", r.mmr_value},
                               {"value_gap", r.value_gap},
                               {"degenerate_steps", r.degenerate_step_count}};
    obj["per_step_tieset_match"] = r.per_step_tieset_match;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

}  // namespace ncall
