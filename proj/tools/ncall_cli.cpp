// ncall: rank, evaluate, verify, sweep and gen-corpus commands over the
// expected n-call@k / MMR library.
//
// Exit codes: 0 success, 1 validation error (bad input data), 2 usage error
// (bad flags), 3 equivalence verification failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ncall/corpus_io.hpp"
#include "ncall/lab.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace ncall;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerifyFailed = 3;

// Write to a temp file in the target directory, rename on success; a failed
// run never leaves a partial output file behind.
void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      fail(Errc::IoError, "cannot open '" + tmp.string() + "' for writing");
    }
    out << content;
    if (!out.flush()) {
      std::error_code ec;
      fs::remove(tmp, ec);
      fail(Errc::IoError, "failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(Errc::IoError, "cannot rename output into place at '" + path + "'");
  }
}

void emit(const std::optional<std::string>& output_path, const std::string& content) {
  if (output_path) {
    write_file_atomic(*output_path, content);
  } else {
    std::cout << content;
  }
}

json trace_to_json(const RankTrace& trace) {
  json steps = json::array();
  for (std::size_t i = 0; i < trace.ranking.size(); ++i) {
    steps.push_back({{"step", i + 1},
                     {"doc_id", trace.ranking[i]},
                     {"score", trace.step_scores[i]},
                     {"degenerate", static_cast<bool>(trace.degenerate_steps[i])},
                     {"tie_set", trace.tie_sets[i]}});
  }
  json out;
  out["ranking"] = trace.ranking;
  out["steps"] = std::move(steps);
  return out;
}

std::string trace_to_csv(const RankTrace& trace) {
  std::ostringstream out;
  out << "step,doc_id,score,degenerate,tie_set\n";
  for (std::size_t i = 0; i < trace.ranking.size(); ++i) {
    out << (i + 1) << ',' << trace.ranking[i] << ',' << format_double(trace.step_scores[i]) << ','
        << (trace.degenerate_steps[i] ? "true" : "false") << ',';
    for (std::size_t j = 0; j < trace.tie_sets[i].size(); ++j) {
      if (j) out << ';';
      out << trace.tie_sets[i][j];
    }
    out << '\n';
  }
  return out.str();
}

std::vector<std::string> parse_ranking_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(Errc::IoError, "cannot open ranking file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  json root;
  try {
    root = json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::SchemaError, std::string("invalid ranking JSON: ") + e.what());
  }
  const json* arr = nullptr;
  if (root.is_array()) {
    arr = &root;
  } else if (root.is_object() && root.contains("ranking") && root["ranking"].is_array()) {
    arr = &root["ranking"];
  } else {
    fail(Errc::SchemaError, "ranking file must be a JSON array of ids or contain \"ranking\"");
  }
  std::vector<std::string> ids;
  for (const auto& e : *arr) {
    if (!e.is_string()) {
      fail(Errc::SchemaError, "ranking entries must be document id strings");
    }
    ids.push_back(e.get<std::string>());
  }
  return ids;
}

// ---- rank ----------------------------------------------------------------

struct RankArgs {
  std::string corpus_file;
  std::string method;
  int n = 0;
  int k = 0;
  double lambda = 0.0;
  std::string sim2_name;
  std::string format = "json";
  std::optional<std::string> output;
  bool has_n = false;
  bool has_lambda = false;
  bool has_sim2 = false;
};

int cmd_rank(const RankArgs& args) {
  const bool has_n = args.has_n;
  const bool has_lambda = args.has_lambda;
  const bool has_sim2 = args.has_sim2;
  if (has_n && args.n < 1) throw UsageError("--n must be >= 1");
  Sim2Mode sim2_mode = Sim2Mode::QueryConditioned;
  if (has_sim2) {
    if (args.sim2_name == "qcond") {
      sim2_mode = Sim2Mode::QueryConditioned;
    } else if (args.sim2_name == "qfree") {
      sim2_mode = Sim2Mode::QueryFree;
    } else {
      throw UsageError("--sim2 must be qcond or qfree");
    }
  }
  if (args.k < 1) throw UsageError("--k must be >= 1");

  double lambda = args.lambda;
  if (args.method == "greedy") {
    if (!has_n) throw UsageError("--n is required with --method greedy");
    if (has_lambda) throw UsageError("--lambda is only valid with --method mmr");
    if (has_sim2) throw UsageError("--sim2 is only valid with --method mmr");
    if (args.n > args.k) throw UsageError("--n must not exceed --k");
  } else if (args.method == "mmr") {
    if (has_lambda == has_n) {
      throw UsageError("mmr needs exactly one of --lambda or --n (lambda = n/(n+1))");
    }
    if (has_n) lambda = lambda_headline(args.n);
    if (!lambda_in_mmr_range(lambda)) throw UsageError("--lambda must lie in [0, 1]");
  } else {
    throw UsageError("--method must be greedy or mmr");
  }

  auto [corpus, query] = load_corpus_file(args.corpus_file);
  RankTrace trace;
  json extra;
  if (args.method == "greedy") {
    trace = greedy_rank(corpus, query, NCallParams{args.n, args.k});
    extra = {{"method", "greedy"}, {"n", args.n}, {"k", args.k}};
  } else {
    trace = mmr_rank(corpus, query, args.k, MmrConfig{lambda, sim2_mode});
    extra = {{"method", "mmr"},
             {"k", args.k},
             {"lambda", lambda},
             {"sim2", sim2_mode == Sim2Mode::QueryFree ? "qfree" : "qcond"}};
  }

  if (args.format == "csv") {
    emit(args.output, trace_to_csv(trace));
  } else {
    json out = std::move(extra);
    json body = trace_to_json(trace);
    out["ranking"] = std::move(body["ranking"]);
    out["steps"] = std::move(body["steps"]);
    emit(args.output, out.dump(2) + "\n");
  }
  return kExitOk;
}

// ---- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  std::string corpus_file;
  std::string ranking_file;
  int n = 1;
  std::string format = "json";
  std::optional<std::string> output;
};

int cmd_evaluate(const EvaluateArgs& args) {
  if (args.n < 1) throw UsageError("--n must be >= 1");
  auto [corpus, query] = load_corpus_file(args.corpus_file);
  const std::vector<std::string> ids = parse_ranking_file(args.ranking_file);

  std::vector<Index> indices;
  indices.reserve(ids.size());
  for (const std::string& id : ids) {
    const Index d = corpus.index_of(id);
    if (d < 0) {
      fail(Errc::UnknownDocumentId, "ranking id '" + id + "' not in corpus");
    }
    indices.push_back(d);
  }
  if (args.n > static_cast<int>(indices.size())) {
    std::cerr << "warning: n=" << args.n << " exceeds ranking length " << indices.size()
              << "; nothing to evaluate\n";
  }

  json values = json::array();
  std::ostringstream csv;
  csv << "k,value\n";
  for (int k = args.n; k <= static_cast<int>(indices.size()); ++k) {
    SelectionState state(corpus, std::vector<Index>(indices.begin(), indices.begin() + k));
    const double value = expected_n_call(state, query, NCallParams{args.n, k});
    values.push_back({{"k", k}, {"value", value}});
    csv << k << ',' << format_double(value) << '\n';
  }

  if (args.format == "csv") {
    emit(args.output, csv.str());
  } else {
    json out{{"n", args.n}, {"ranking_length", indices.size()}};
    out["values"] = std::move(values);
    emit(args.output, out.dump(2) + "\n");
  }
  return kExitOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::uint64_t seeds = 1;
  std::vector<int> n_range{1, 3};
  std::vector<int> k_range{1, 8};
  int trials = 100;
  double lambda_override = -1.0;
  std::string format = "csv";
  std::optional<std::string> report;
};

int cmd_verify(const VerifyArgs& args) {
  if (args.trials < 1) throw UsageError("--trials must be >= 1");
  if (args.n_range.size() != 2 || args.n_range[0] < 1 || args.n_range[0] > args.n_range[1]) {
    throw UsageError("--n-range expects MIN MAX with 1 <= MIN <= MAX");
  }
  if (args.k_range.size() != 2 || args.k_range[0] < 1 || args.k_range[0] > args.k_range[1]) {
    throw UsageError("--k-range expects MIN MAX with 1 <= MIN <= MAX");
  }
  const bool override_lambda = args.lambda_override >= 0.0;
  if (override_lambda && !lambda_in_mmr_range(args.lambda_override)) {
    throw UsageError("--lambda-override must lie in [0, 1]");
  }

  // Corpus pools shared across the (n, k) grid. All documents are point
  // masses. For n >= 2 exact equivalence needs a point-mass query as well;
  // for n = 1 it holds for any query distribution, so those rows also run
  // against fuzzy-query corpora (where a wrong lambda shows real value loss).
  const auto make_pool = [&](QueryMode mode, std::uint64_t salt) {
    std::vector<std::pair<Corpus, Query>> pool;
    pool.reserve(static_cast<std::size_t>(args.trials));
    for (int i = 0; i < args.trials; ++i) {
      GenParams params;
      params.seed = args.seeds + salt + static_cast<std::uint64_t>(i);
      params.num_subtopics = 2 + i % 5;
      params.num_docs = std::max(args.k_range[1], 8) + i % 5;
      params.deterministic = true;
      params.query_mode = mode;
      pool.push_back(generate_corpus(params));
    }
    return pool;
  };
  const auto point_query_pool = make_pool(QueryMode::Deterministic, 0);
  const auto fuzzy_query_pool = make_pool(QueryMode::DirichletLike, 0x9e3779b9u);

  // With the hidden override in force, rank MMR at that lambda instead of
  // lambda_headline(n); everything else mirrors compare_rankers.
  const auto compare_at = [&](const Corpus& corpus, const Query& query, int n, int k,
                              std::string id) {
    if (!override_lambda) {
      return compare_rankers(corpus, query, n, k, std::move(id));
    }
    EquivalenceReport rep;
    rep.corpus_id = std::move(id);
    rep.n = n;
    rep.k = k;
    const RankTrace greedy = greedy_rank(corpus, query, NCallParams{n, k});
    const RankTrace mmr =
        mmr_rank(corpus, query, k, MmrConfig{args.lambda_override, Sim2Mode::QueryConditioned});
    rep.greedy_value =
        expected_n_call(SelectionState(corpus, greedy.ranking_indices), query, NCallParams{n, k});
    rep.mmr_value =
        expected_n_call(SelectionState(corpus, mmr.ranking_indices), query, NCallParams{n, k});
    rep.value_gap = rep.greedy_value - rep.mmr_value;
    for (int step = 0; step < k; ++step) {
      if (greedy.degenerate_steps[static_cast<std::size_t>(step)]) {
        ++rep.degenerate_step_count;
      } else {
        rep.per_step_tieset_match.push_back(greedy.tie_sets[static_cast<std::size_t>(step)] ==
                                            mmr.tie_sets[static_cast<std::size_t>(step)]);
      }
    }
    return rep;
  };

  std::vector<EquivalenceReport> reports;
  bool gaps_ok = true;
  std::printf("%4s %4s %8s %12s %14s %12s %8s\n", "n", "k", "query", "max|gap|", "tie_mismatch",
              "degenerate", "status");
  for (int n = args.n_range[0]; n <= args.n_range[1]; ++n) {
    for (int k = std::max(n, args.k_range[0]); k <= args.k_range[1]; ++k) {
      struct PoolRun {
        const std::vector<std::pair<Corpus, Query>>* pool;
        const char* name;
      };
      std::vector<PoolRun> runs{{&point_query_pool, "point"}};
      if (n == 1) runs.push_back({&fuzzy_query_pool, "fuzzy"});
      for (const PoolRun& run : runs) {
        double max_gap = 0.0;
        int mismatches = 0;
        int degenerate = 0;
        for (int i = 0; i < args.trials; ++i) {
          const auto& [corpus, query] = (*run.pool)[static_cast<std::size_t>(i)];
          EquivalenceReport rep =
              compare_at(corpus, query, n, k,
                         std::string(run.name) + "-seed-" + std::to_string(args.seeds + i));
          max_gap = std::max(max_gap, std::abs(rep.value_gap));
          for (bool match : rep.per_step_tieset_match) {
            if (!match) ++mismatches;
          }
          degenerate += rep.degenerate_step_count;
          reports.push_back(std::move(rep));
        }
        const bool ok = max_gap <= kTieTol;
        gaps_ok = gaps_ok && ok;
        std::printf("%4d %4d %8s %12.3e %14d %12d %8s\n", n, k, run.name, max_gap, mismatches,
                    degenerate, ok ? "ok" : "FAIL");
      }
    }
  }
  std::printf("verify: %s\n", gaps_ok ? "all value gaps within 1e-12" : "equivalence FAILED");

  if (args.report) {
    emit(args.report,
         args.format == "json" ? reports_json(reports) : reports_csv(reports));
  }
  return gaps_ok ? kExitOk : kExitVerifyFailed;
}

// ---- sweep / gen-corpus ----------------------------------------------------

struct GenArgs {
  std::uint64_t seed = 1;
  int subtopics = 3;
  int docs = 8;
  bool stochastic_docs = false;
  std::string query_mode = "det";
  double skew = 1.0;
};

GenParams to_gen_params(const GenArgs& args) {
  GenParams params;
  params.seed = args.seed;
  params.num_subtopics = args.subtopics;
  params.num_docs = args.docs;
  params.deterministic = !args.stochastic_docs;
  if (args.query_mode == "det") {
    params.query_mode = QueryMode::Deterministic;
  } else if (args.query_mode == "uniform") {
    params.query_mode = QueryMode::Uniform;
  } else if (args.query_mode == "dirichlet") {
    params.query_mode = QueryMode::DirichletLike;
  } else {
    throw UsageError("--query-mode must be det, uniform or dirichlet");
  }
  params.skew = args.skew;
  if (params.num_docs < 1 || params.num_subtopics < 1 || !(params.skew > 0.0)) {
    throw UsageError("need --docs >= 1, --subtopics >= 1, --skew > 0");
  }
  return params;
}

struct SweepArgs {
  GenArgs gen;
  int n = 1;
  int k = 1;
  double grid_step = 0.05;
  std::string grid_list;
  int trials = 100;
  std::string format = "csv";
  std::optional<std::string> output;
};

std::vector<double> build_grid(const SweepArgs& args) {
  std::vector<double> grid;
  if (!args.grid_list.empty()) {
    std::istringstream in(args.grid_list);
    std::string token;
    while (std::getline(in, token, ',')) {
      try {
        grid.push_back(std::stod(token));
      } catch (const std::exception&) {
        throw UsageError("--grid must be a comma-separated list of numbers");
      }
    }
    if (grid.empty()) throw UsageError("--grid must not be empty");
  } else {
    if (!(args.grid_step > 0.0 && args.grid_step <= 1.0)) {
      throw UsageError("--grid-step must lie in (0, 1]");
    }
    // Grid points are i/points rather than accumulated steps, so the values
    // print cleanly and are identical on every run.
    const int points = static_cast<int>(std::round(1.0 / args.grid_step));
    for (int i = 0; i <= points; ++i) {
      grid.push_back(static_cast<double>(i) / points);
    }
  }
  for (double lambda : grid) {
    if (!lambda_in_mmr_range(lambda)) {
      throw UsageError("grid values must lie in [0, 1]");
    }
  }
  return grid;
}

int cmd_sweep(const SweepArgs& args) {
  if (args.trials < 1) throw UsageError("--trials must be >= 1");
  if (args.n < 1 || args.k < args.n) throw UsageError("need 1 <= --n <= --k");
  if (args.k > args.gen.docs) throw UsageError("--k must not exceed --docs");
  const GenParams params = to_gen_params(args.gen);
  const std::vector<double> grid = build_grid(args);
  const std::vector<SweepRow> rows = lambda_sweep(params, args.n, args.k, grid, args.trials);
  emit(args.output, args.format == "json" ? sweep_json(rows, args.n, args.k)
                                          : sweep_csv(rows, args.n, args.k));
  return kExitOk;
}

struct GenCorpusArgs {
  GenArgs gen;
  std::optional<std::string> output;
};

int cmd_gen_corpus(const GenCorpusArgs& args) {
  const GenParams params = to_gen_params(args.gen);
  auto [corpus, query] = generate_corpus(params);
  emit(args.output, serialize_corpus(corpus, query));
  return kExitOk;
}

void add_gen_flags(CLI::App* cmd, GenArgs& args) {
  cmd->add_option("--seed", args.seed, "Generator seed");
  cmd->add_option("--subtopics", args.subtopics, "Number of subtopics");
  cmd->add_option("--docs", args.docs, "Number of documents");
  cmd->add_flag("--stochastic-docs", args.stochastic_docs,
                "Give documents fuzzy subtopic distributions instead of point masses");
  cmd->add_option("--query-mode", args.query_mode, "Query distribution: det, uniform, dirichlet");
  cmd->add_option("--skew", args.skew, "Zipf exponent for subtopic popularity");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"expected n-call@k optimization and MMR diversification"};
  app.require_subcommand(1);

  RankArgs rank_args;
  CLI::App* rank = app.add_subcommand("rank", "Rank a corpus with greedy n-call@k or MMR");
  rank->add_option("corpus", rank_args.corpus_file, "Corpus JSON file")->required();
  rank->add_option("--method", rank_args.method, "greedy or mmr")->required();
  rank->add_option("--n", rank_args.n, "Required relevant count");
  rank->add_option("--k", rank_args.k, "Result set size")->required();
  rank->add_option("--lambda", rank_args.lambda, "MMR trade-off weight");
  rank->add_option("--sim2", rank_args.sim2_name, "MMR diversity metric: qcond or qfree");
  rank->add_option("--format", rank_args.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  rank->add_option("--output", rank_args.output, "Write output to file (atomic)");

  EvaluateArgs eval_args;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Expected n-call at each ranking prefix");
  evaluate->add_option("corpus", eval_args.corpus_file, "Corpus JSON file")->required();
  evaluate->add_option("ranking", eval_args.ranking_file, "Ranking JSON file")->required();
  evaluate->add_option("--n", eval_args.n, "Required relevant count")->required();
  evaluate->add_option("--format", eval_args.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  evaluate->add_option("--output", eval_args.output, "Write output to file (atomic)");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify", "Check greedy vs MMR(lambda = n/(n+1)) equivalence on seeded corpora");
  verify->add_option("--seeds", verify_args.seeds, "Base seed for the corpus pool");
  verify->add_option("--n-range", verify_args.n_range, "n grid: MIN MAX")->expected(2);
  verify->add_option("--k-range", verify_args.k_range, "k grid: MIN MAX")->expected(2);
  verify->add_option("--trials", verify_args.trials, "Corpora per (n, k) cell");
  verify->add_option("--report", verify_args.report, "Write per-corpus reports to file");
  verify->add_option("--format", verify_args.format, "Report format: csv or json")
      ->check(CLI::IsMember({"json", "csv"}));
  verify->add_option("--lambda-override", verify_args.lambda_override)->group("");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "Mean objective and diversity across a lambda grid");
  add_gen_flags(sweep, sweep_args.gen);
  sweep->add_option("--n", sweep_args.n, "Required relevant count")->required();
  sweep->add_option("--k", sweep_args.k, "Result set size")->required();
  sweep->add_option("--grid-step", sweep_args.grid_step, "Lambda grid step over [0, 1]");
  sweep->add_option("--grid", sweep_args.grid_list, "Explicit comma-separated lambda list");
  sweep->add_option("--trials", sweep_args.trials, "Corpora per grid point");
  sweep->add_option("--format", sweep_args.format, "csv or json")
      ->check(CLI::IsMember({"json", "csv"}));
  sweep->add_option("--output", sweep_args.output, "Write output to file (atomic)");

  GenCorpusArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen-corpus", "Emit a seeded synthetic corpus");
  add_gen_flags(gen, gen_args.gen);
  gen->add_option("--output", gen_args.output, "Write corpus to file (atomic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  rank_args.has_n = rank->count("--n") > 0;
  rank_args.has_lambda = rank->count("--lambda") > 0;
  rank_args.has_sim2 = rank->count("--sim2") > 0;

  try {
    if (rank->parsed()) return cmd_rank(rank_args);
    if (evaluate->parsed()) return cmd_evaluate(eval_args);
    if (verify->parsed()) return cmd_verify(verify_args);
    if (sweep->parsed()) return cmd_sweep(sweep_args);
    if (gen->parsed()) return cmd_gen_corpus(gen_args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
