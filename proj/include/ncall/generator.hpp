#pragma once
// Seeded synthetic corpora. Same seed + params give a bit-identical corpus:
// the generator is mt19937_64 with 53-bit uniforms derived directly from
// engine words, so output does not depend on the standard library's
// distribution implementations.

#include <cstdint>
#include <random>
#include <utility>

#include "ncall/model.hpp"

namespace ncall {

enum class QueryMode { Deterministic, Uniform, DirichletLike };

struct GenParams {
  std::uint64_t seed = 1;
  int num_subtopics = 3;
  int num_docs = 8;
  bool deterministic = true;  // point-mass document subtopics
  QueryMode query_mode = QueryMode::Deterministic;
  double skew = 1.0;  // Zipf exponent for subtopic popularity

  void validate() const;
};

// Uniform draw in (0, 1] from the top 53 bits of one engine word.
double uniform01(std::mt19937_64& eng);

// Subtopic popularity is fixed Zipf weights (t+1)^-skew. Deterministic mode
// samples one subtopic per document from popularity; otherwise documents get
// popularity-weighted positive random vectors, normalized. Query follows
// query_mode: a popularity-sampled point mass, the uniform vector, or a
// random normalized vector. Draw order is documents first, then the query.
std::pair<Corpus, Query> generate_corpus(const GenParams& params);

}  // namespace ncall
