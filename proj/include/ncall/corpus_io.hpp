#pragma once
// Corpus file format (JSON, UTF-8):
//   { "subtopics": ["<label>", ...],
//     "query": { "id": "<id>", "dist": [p, ...] },
//     "documents": [ { "id": "<id>", "dist": [p, ...] }, ... ] }
// Every "dist" must have dimension |subtopics|. Probabilities round-trip
// bit-exact through serialize/parse.

#include <string>
#include <utility>

#include "ncall/model.hpp"

namespace ncall {

// Errors: SchemaError for malformed JSON / wrong shapes / dimension
// mismatches, ValidationError wrapping distribution and id violations with
// the offending document id.
std::pair<Corpus, Query> parse_corpus(const std::string& text);

// Canonical text form; parsing it back yields a field-by-field identical
// corpus with bit-exact probabilities.
std::string serialize_corpus(const Corpus& corpus, const Query& query);

std::pair<Corpus, Query> load_corpus_file(const std::string& path);

}  // namespace ncall
