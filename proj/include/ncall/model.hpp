#pragma once
// Core domain types: subtopic distributions, documents, queries, corpora and
// ordered selection states. All types are immutable after construction and
// safe to share between threads.

#include <Eigen/Dense>
#include <string>
#include <unordered_map>
#include <vector>

#include "ncall/common.hpp"

namespace ncall {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

struct SubtopicId {
  Index index = 0;
  std::string label;

  friend bool operator==(const SubtopicId& a, const SubtopicId& b) {
    return a.index == b.index;
  }
};

// Dense probability vector aligned with the owning corpus subtopic table.
// Construction goes through validated(); accepted vectors have nonnegative
// entries and sum to 1 within kSumTol. Out-of-tolerance input is rejected,
// never renormalized.
class SubtopicDistribution {
 public:
  static SubtopicDistribution validated(Vector probs);
  static SubtopicDistribution point_mass(Index size, Index at);
  static SubtopicDistribution uniform(Index size);

  const Vector& probs() const { return probs_; }
  Index size() const { return probs_.size(); }
  double operator[](Index t) const { return probs_[t]; }

  // True iff one entry is 1 within kPointMassTol and all others are 0
  // within the same tolerance.
  bool deterministic() const;
  // Index of the certain subtopic, or -1 when not deterministic.
  Index point_mass_index() const;
  // Index of the largest entry (first one on exact ties).
  Index argmax() const;

 private:
  explicit SubtopicDistribution(Vector probs) : probs_(std::move(probs)) {}
  Vector probs_;
};

// validate_distribution is the checked constructor for raw probability
// sequences; errors: EmptyDistribution, NegativeEntry, SumNotOne.
SubtopicDistribution validate_distribution(const std::vector<double>& probs);

struct Document {
  std::string id;
  SubtopicDistribution dist;
};

struct Query {
  std::string id;
  SubtopicDistribution dist;
};

// Ordered subtopic table plus the retrieval universe. Invariants: at least
// one document, pairwise-distinct nonempty ids, every distribution dense
// over the subtopic table.
class Corpus {
 public:
  Corpus(std::vector<std::string> subtopic_labels, std::vector<Document> documents);

  Index num_subtopics() const { return static_cast<Index>(labels_.size()); }
  Index num_docs() const { return static_cast<Index>(docs_.size()); }

  const std::vector<std::string>& subtopic_labels() const { return labels_; }
  const std::vector<Document>& documents() const { return docs_; }
  const Document& doc(Index i) const { return docs_.at(static_cast<std::size_t>(i)); }
  SubtopicId subtopic(Index t) const;

  // -1 when the id is unknown.
  Index index_of(const std::string& doc_id) const;

 private:
  std::vector<std::string> labels_;
  std::vector<Document> docs_;
  std::unordered_map<std::string, Index> by_id_;
};

// The ordered selection S_{k-1}: document indices into a corpus, no
// duplicates. Holds a pointer to the corpus; the corpus must outlive it.
class SelectionState {
 public:
  explicit SelectionState(const Corpus& corpus) : corpus_(&corpus) {}
  SelectionState(const Corpus& corpus, std::vector<Index> selected);

  const Corpus& corpus() const { return *corpus_; }
  const std::vector<Index>& selected() const { return selected_; }
  Index size() const { return static_cast<Index>(selected_.size()); }
  bool empty() const { return selected_.empty(); }
  bool contains(Index doc) const;
  const Document& doc_at(Index pos) const { return corpus_->doc(selected_.at(static_cast<std::size_t>(pos))); }

  // Copy of this state with one more selection appended.
  SelectionState extended(Index doc) const;

 private:
  const Corpus* corpus_;
  std::vector<Index> selected_;
};

// True iff every document distribution and the query distribution put all
// mass on a single subtopic.
bool is_deterministic_corpus(const Corpus& corpus, const Query& query);

}  // namespace ncall
