#include <doctest.h>

#include <algorithm>
#include <random>

#include "ncall/objective.hpp"
#include "ncall/ranker.hpp"
#include "test_util.hpp"

using namespace ncall;
using testutil::doc;
using testutil::query;

TEST_CASE("params require 1 <= n <= k") {
  CHECK_NOTHROW(NCallParams{1, 1}.validate());
  CHECK_NOTHROW(NCallParams{3, 8}.validate());
  CHECK_THROWS_AS(NCallParams{0, 1}.validate(), Error);
  CHECK_THROWS_AS(NCallParams{3, 2}.validate(), Error);
  CHECK_THROWS_AS(NCallParams{1, 0}.validate(), Error);
}

TEST_CASE("relevance indicator") {
  const Corpus corpus = testutil::aab_corpus();
  CHECK(relevance_indicator(corpus.subtopic(0), corpus.subtopic(0)) == 1);
  CHECK(relevance_indicator(corpus.subtopic(0), corpus.subtopic(1)) == 0);
  for (Index t = 0; t < corpus.num_subtopics(); ++t) {
    CHECK(relevance_indicator(corpus.subtopic(t), corpus.subtopic(t)) == 1);
  }
}

TEST_CASE("expected n-call on hand-checked corpora") {
  const Corpus corpus = testutil::aab_corpus();

  SUBCASE("certain relevance") {
    const Query q = query("q", {1.0, 0.0});
    const SelectionState state(corpus, {0});
    CHECK(expected_n_call(state, q, NCallParams{1, 1}) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("uniform query marginalizes to one half") {
    const Query q = testutil::uniform_query();
    const SelectionState state(corpus, {0});
    CHECK(expected_n_call(state, q, NCallParams{1, 1}) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("covering both subtopics is certain for n=1") {
    const Query q = testutil::uniform_query();
    const SelectionState state(corpus, {0, 2});
    CHECK(expected_n_call(state, q, NCallParams{1, 2}) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("dimension and size mismatches") {
    const SelectionState state(corpus, {0});
    CHECK_THROWS_AS(expected_n_call(state, query("q", {1.0}), NCallParams{1, 1}), Error);
    CHECK_THROWS_AS(expected_n_call(state, testutil::uniform_query(), NCallParams{1, 2}), Error);
  }
}

TEST_CASE("marginal gain base cases") {
  const Corpus corpus = testutil::aab_corpus();
  const Query uniform = testutil::uniform_query();
  const SelectionState empty(corpus);

  SUBCASE("n=1 on the empty state reduces to sim1") {
    for (Index d = 0; d < corpus.num_docs(); ++d) {
      CHECK(marginal_gain(empty, corpus.doc(d), uniform, 1) ==
            doctest::Approx(sim1(uniform, corpus.doc(d))).epsilon(1e-15));
    }
  }
  SUBCASE("n=2 on the empty state is zero for every candidate") {
    for (Index d = 0; d < corpus.num_docs(); ++d) {
      CHECK(marginal_gain(empty, corpus.doc(d), uniform, 2) == 0.0);
    }
  }
  SUBCASE("an already-relevant selection kills the n=1 gain") {
    const Query qa = query("q", {1.0, 0.0});
    const SelectionState state(corpus, {0});  // a1, deterministic on A
    CHECK(marginal_gain(state, corpus.doc(1), qa, 1) == 0.0);
  }
  SUBCASE("candidate must be new") {
    const SelectionState state(corpus, {0});
    CHECK_THROWS_AS(marginal_gain(state, corpus.doc(0), uniform, 1), Error);
  }
}

TEST_CASE("unrolled objective closed forms") {
  const Corpus corpus({"A", "B"},
                      {doc("d1", {0.3, 0.7}), doc("d2", {0.8, 0.2}), doc("c", {0.6, 0.4})});
  const Query q = query("q", {0.25, 0.75});
  const Document& cand = corpus.doc(2);

  SUBCASE("n=1 multiplies the miss probabilities") {
    const SelectionState state(corpus, {0, 1});
    double expect = 0.0;
    for (Index t = 0; t < 2; ++t) {
      expect += q.dist[t] * cand.dist[t] * (1 - corpus.doc(0).dist[t]) * (1 - corpus.doc(1).dist[t]);
    }
    CHECK(unrolled_objective(state, cand, q, 1) == doctest::Approx(expect).epsilon(1e-14));
  }
  SUBCASE("n=2 sums the two singleton subsets") {
    const SelectionState state(corpus, {0, 1});
    double expect = 0.0;
    for (Index t = 0; t < 2; ++t) {
      const double a = corpus.doc(0).dist[t];
      const double b = corpus.doc(1).dist[t];
      expect += q.dist[t] * cand.dist[t] * (a * (1 - b) + b * (1 - a));
    }
    CHECK(unrolled_objective(state, cand, q, 2) == doctest::Approx(expect).epsilon(1e-14));
  }
  SUBCASE("n beyond the state size has no subsets") {
    const SelectionState state(corpus, {0});
    CHECK(unrolled_objective(state, cand, q, 3) == 0.0);
  }
}

TEST_CASE("unrolled objective equals marginal gain for every n") {
  std::mt19937_64 eng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int subtopics = 2 + static_cast<int>(eng() % 4);
    const int docs = 3 + static_cast<int>(eng() % 6);
    const auto [corpus, q] = generate_corpus(testutil::gen_params(
        900 + trial, subtopics, docs, trial % 2 == 0, QueryMode::DirichletLike));

    std::vector<Index> picks;
    for (Index d = 0; d + 1 < corpus.num_docs(); ++d) picks.push_back(d);
    const SelectionState state(corpus, picks);
    const Document& cand = corpus.doc(corpus.num_docs() - 1);

    const int k = static_cast<int>(state.size()) + 1;
    for (int n = 1; n <= k; ++n) {
      CAPTURE(trial);
      CAPTURE(n);
      CHECK(std::abs(unrolled_objective(state, cand, q, n) - marginal_gain(state, cand, q, n)) <=
            1e-12);
    }
  }
}

TEST_CASE("full objective decomposes into dropped constant plus gain") {
  std::mt19937_64 eng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const auto [corpus, q] = generate_corpus(
        testutil::gen_params(500 + trial, 2 + trial % 4, 5 + trial % 4, false,
                             trial % 2 ? QueryMode::Uniform : QueryMode::DirichletLike));
    std::vector<Index> picks;
    for (Index d = 0; d + 1 < corpus.num_docs(); ++d) picks.push_back(d);
    const SelectionState state(corpus, picks);
    const Index cand = corpus.num_docs() - 1;

    const int k = static_cast<int>(state.size()) + 1;
    for (int n = 1; n <= k; ++n) {
      const double full = expected_n_call(state.extended(cand), q, NCallParams{n, k});
      const double sum = dropped_constant(state, q, n) + marginal_gain(state, corpus.doc(cand), q, n);
      CAPTURE(trial);
      CAPTURE(n);
      CHECK(full == doctest::Approx(sum).epsilon(1e-12));
    }
  }
}

TEST_CASE("objective is monotone in k and antitone in n") {
  std::mt19937_64 eng(13);
  for (int trial = 0; trial < 80; ++trial) {
    const auto [corpus, q] = generate_corpus(testutil::gen_params(
        1500 + trial, 2 + trial % 5, 4 + trial % 6, trial % 3 == 0, QueryMode::DirichletLike));
    const int size = static_cast<int>(corpus.num_docs());
    std::vector<Index> picks;
    for (Index d = 0; d + 1 < size; ++d) picks.push_back(d);
    const SelectionState state(corpus, picks);
    const int k = static_cast<int>(state.size());
    if (k < 1) continue;

    for (int n = 1; n <= k; ++n) {
      const double base = expected_n_call(state, q, NCallParams{n, k});
      const double grown = expected_n_call(state.extended(size - 1), q, NCallParams{n, k + 1});
      CHECK(grown >= base - 1e-12);
      if (n < k) {
        const double stricter = expected_n_call(state, q, NCallParams{n + 1, k});
        CHECK(stricter <= base + 1e-12);
      }
    }
  }
}

TEST_CASE("marginal gain and full objective share their argmax tie set") {
  std::mt19937_64 eng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto [corpus, q] = generate_corpus(testutil::gen_params(
        2600 + trial, 2 + trial % 4, 4 + trial % 5, trial % 2 == 0,
        trial % 3 == 0 ? QueryMode::Deterministic : QueryMode::DirichletLike));
    const int n = 1 + trial % 3;
    const int k = std::min<int>(static_cast<int>(corpus.num_docs()), n + 3);
    if (n > k) continue;

    SelectionState state(corpus);
    for (int step = 1; step <= k; ++step) {
      const std::vector<Index> candidates = unselected_candidates(state);
      const Vector gains = greedy_scores(state, q, n, candidates);

      Vector full(static_cast<Index>(candidates.size()));
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        full[static_cast<Index>(i)] =
            step < n ? 0.0
                     : expected_n_call(state.extended(candidates[i]), q, NCallParams{n, step});
      }
      const auto gain_ties = argmax_by_id(corpus, candidates, gains).tie_set;
      const auto full_ties = argmax_by_id(corpus, candidates, full).tie_set;
      CAPTURE(trial);
      CAPTURE(step);
      CHECK(gain_ties == full_ties);
      state = state.extended(gain_ties.front());
    }
  }
}
