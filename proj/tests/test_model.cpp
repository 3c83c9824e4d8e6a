#include <doctest.h>

#include <functional>

#include "ncall/corpus_io.hpp"
#include "ncall/model.hpp"
#include "test_util.hpp"

using namespace ncall;
using testutil::doc;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ncall::Error");
  return Errc::InvariantViolation;
}

}  // namespace

TEST_CASE("validate_distribution accepts point mass and uniform") {
  const SubtopicDistribution single = validate_distribution({1.0});
  CHECK(single.deterministic());
  CHECK(single.point_mass_index() == 0);

  const SubtopicDistribution half = validate_distribution({0.5, 0.5});
  CHECK_FALSE(half.deterministic());
  CHECK(half.point_mass_index() == -1);
}

TEST_CASE("validate_distribution rejects bad input") {
  CHECK(code_of([] { validate_distribution({}); }) == Errc::EmptyDistribution);
  CHECK(code_of([] { validate_distribution({0.5, -0.5, 1.0}); }) == Errc::NegativeEntry);

  try {
    validate_distribution({0.6, 0.6});
    FAIL("expected SumNotOne");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SumNotOne);
    CHECK(e.detail() == doctest::Approx(1.2));
  }
}

TEST_CASE("sum tolerance is 1e-9, no silent renormalization") {
  CHECK_NOTHROW(validate_distribution({0.5, 0.5 + 0.9e-9}));
  CHECK(code_of([] { validate_distribution({0.5, 0.5 + 1e-8}); }) == Errc::SumNotOne);
}

TEST_CASE("determinism threshold is 1e-12 per entry") {
  CHECK(validate_distribution({1.0 - 1e-13, 1e-13}).deterministic());
  CHECK_FALSE(validate_distribution({1.0 - 1e-10, 1e-10}).deterministic());
  CHECK_FALSE(validate_distribution({0.5, 0.5}).deterministic());
}

TEST_CASE("corpus invariants") {
  CHECK(code_of([] { Corpus({"A"}, {}); }) == Errc::ValidationError);
  CHECK(code_of([] {
          Corpus({"A", "B"}, {doc("x", {1.0, 0.0}), doc("x", {0.0, 1.0})});
        }) == Errc::ValidationError);
  CHECK(code_of([] { Corpus({"A", "B"}, {doc("", {1.0, 0.0})}); }) == Errc::ValidationError);
  CHECK(code_of([] { Corpus({"A", "B"}, {doc("x", {1.0})}); }) == Errc::DimensionMismatch);

  const Corpus corpus = testutil::aab_corpus();
  CHECK(corpus.num_docs() == 3);
  CHECK(corpus.num_subtopics() == 2);
  CHECK(corpus.index_of("a2") == 1);
  CHECK(corpus.index_of("zz") == -1);
  CHECK(corpus.subtopic(1).label == "B");
  CHECK(code_of([&] { corpus.subtopic(2); }) == Errc::InvalidParams);
}

TEST_CASE("selection state rejects duplicates and resolves documents") {
  const Corpus corpus = testutil::aab_corpus();
  SelectionState state(corpus);
  CHECK(state.empty());
  state = state.extended(2);
  state = state.extended(0);
  CHECK(state.size() == 2);
  CHECK(state.contains(2));
  CHECK(state.doc_at(0).id == "b1");
  CHECK(code_of([&] { state.extended(2); }) == Errc::CandidateAlreadySelected);
  CHECK(code_of([&] { state.extended(17); }) == Errc::UnknownDocumentId);
  CHECK(code_of([&] { SelectionState(corpus, {0, 0}); }) == Errc::ValidationError);
}

TEST_CASE("is_deterministic_corpus checks documents and query") {
  const Corpus corpus({"A", "B"}, {doc("a", {1.0, 0.0}), doc("b", {0.0, 1.0})});
  CHECK(is_deterministic_corpus(corpus, testutil::query("q", {1.0, 0.0})));
  CHECK_FALSE(is_deterministic_corpus(corpus, testutil::query("q", {0.5, 0.5})));

  const Corpus fuzzy({"A", "B"}, {doc("a", {0.9, 0.1})});
  CHECK_FALSE(is_deterministic_corpus(fuzzy, testutil::query("q", {1.0, 0.0})));
}

TEST_CASE("parse_corpus reads the documented schema") {
  const std::string text = R"({
    "subtopics": ["A", "B"],
    "query": {"id": "q", "dist": [0.5, 0.5]},
    "documents": [
      {"id": "a1", "dist": [1.0, 0.0]},
      {"id": "b1", "dist": [0.0, 1.0]}
    ]
  })";
  const auto [corpus, query] = parse_corpus(text);
  CHECK(corpus.num_docs() == 2);
  CHECK(corpus.subtopic_labels() == std::vector<std::string>{"A", "B"});
  CHECK(query.id == "q");
  CHECK(query.dist[0] == 0.5);
  CHECK(corpus.doc(0).id == "a1");
  CHECK(corpus.doc(0).dist[0] == 1.0);
}

TEST_CASE("parse_corpus error paths") {
  CHECK(code_of([] { parse_corpus("{nope"); }) == Errc::SchemaError);
  CHECK(code_of([] { parse_corpus("[1,2]"); }) == Errc::SchemaError);
  CHECK(code_of([] {
          parse_corpus(R"({"subtopics":["A"],"query":{"id":"q","dist":[1.0]},
                           "documents":[{"id":"x","dist":[1.0]},{"id":"x","dist":[1.0]}]})");
        }) == Errc::ValidationError);
  // Query dimension disagrees with the subtopic table.
  CHECK(code_of([] {
          parse_corpus(R"({"subtopics":["A","B"],"query":{"id":"q","dist":[1.0]},
                           "documents":[{"id":"x","dist":[1.0,0.0]}]})");
        }) == Errc::SchemaError);
  CHECK(code_of([] {
          parse_corpus(R"({"subtopics":["A","B"],"query":{"id":"q","dist":[1.0,0.0]},
                           "documents":[{"id":"x","dist":[1.0,0.5]}]})");
        }) == Errc::ValidationError);

  // Validation failures carry the offending document id.
  try {
    parse_corpus(R"({"subtopics":["A","B"],"query":{"id":"q","dist":[1.0,0.0]},
                     "documents":[{"id":"weird","dist":[1.5,-0.5]}]})");
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ValidationError);
    CHECK(std::string(e.what()).find("weird") != std::string::npos);
  }
}

TEST_CASE("serialize/parse round-trip is bit-exact") {
  std::mt19937_64 eng(20260809);
  for (int trial = 0; trial < 60; ++trial) {
    GenParams params = testutil::gen_params(
        1000 + static_cast<std::uint64_t>(trial), 2 + trial % 5, 1 + trial % 7, trial % 2 == 0,
        trial % 3 == 0 ? QueryMode::DirichletLike
                       : (trial % 3 == 1 ? QueryMode::Uniform : QueryMode::Deterministic),
        0.5 + uniform01(eng));
    const auto [corpus, query] = generate_corpus(params);
    const std::string text = serialize_corpus(corpus, query);
    const auto [corpus2, query2] = parse_corpus(text);

    REQUIRE(corpus2.num_docs() == corpus.num_docs());
    CHECK(corpus2.subtopic_labels() == corpus.subtopic_labels());
    CHECK(query2.id == query.id);
    CHECK(testutil::bits_equal(query2.dist.probs(), query.dist.probs()));
    CHECK(query2.dist.deterministic() == query.dist.deterministic());
    for (Index d = 0; d < corpus.num_docs(); ++d) {
      CHECK(corpus2.doc(d).id == corpus.doc(d).id);
      CHECK(testutil::bits_equal(corpus2.doc(d).dist.probs(), corpus.doc(d).dist.probs()));
      CHECK(corpus2.doc(d).dist.deterministic() == corpus.doc(d).dist.deterministic());
    }
    // Canonical form: a second round trip gives the same bytes.
    CHECK(serialize_corpus(corpus2, query2) == text);
  }
}
