#include "ncall/model.hpp"

#include <algorithm>
#include <cmath>

namespace ncall {

SubtopicDistribution SubtopicDistribution::validated(Vector probs) {
  if (probs.size() == 0) {
    fail(Errc::EmptyDistribution, "empty distribution");
  }
  for (Index i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    if (!(p >= 0.0)) {  // also catches NaN
      fail(Errc::NegativeEntry,
           "negative entry " + format_double(p) + " at index " + std::to_string(i), p);
    }
  }
  const double sum = probs.sum();
  if (std::abs(sum - 1.0) > kSumTol) {
    fail(Errc::SumNotOne, "entries sum to " + format_double(sum) + ", expected 1", sum);
  }
  return SubtopicDistribution(std::move(probs));
}

SubtopicDistribution SubtopicDistribution::point_mass(Index size, Index at) {
  Vector v = Vector::Zero(size);
  v[at] = 1.0;
  return SubtopicDistribution(std::move(v));
}

SubtopicDistribution SubtopicDistribution::uniform(Index size) {
  return validated(Vector::Constant(size, 1.0 / static_cast<double>(size)));
}

bool SubtopicDistribution::deterministic() const { return point_mass_index() >= 0; }

Index SubtopicDistribution::point_mass_index() const {
  Index hit = -1;
  for (Index i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (std::abs(p - 1.0) <= kPointMassTol) {
      if (hit >= 0) return -1;
      hit = i;
    } else if (std::abs(p) > kPointMassTol) {
      return -1;
    }
  }
  return hit;
}

Index SubtopicDistribution::argmax() const {
  Index best = 0;
  probs_.maxCoeff(&best);
  return best;
}

SubtopicDistribution validate_distribution(const std::vector<double>& probs) {
  return SubtopicDistribution::validated(
      Eigen::Map<const Vector>(probs.data(), static_cast<Index>(probs.size())));
}

Corpus::Corpus(std::vector<std::string> subtopic_labels, std::vector<Document> documents)
    : labels_(std::move(subtopic_labels)), docs_(std::move(documents)) {
  if (docs_.empty()) {
    fail(Errc::ValidationError, "corpus has no documents");
  }
  if (labels_.empty()) {
    fail(Errc::ValidationError, "corpus has no subtopics");
  }
  const Index dim = num_subtopics();
  for (Index i = 0; i < num_docs(); ++i) {
    const Document& d = docs_[static_cast<std::size_t>(i)];
    if (d.id.empty()) {
      fail(Errc::ValidationError, "document " + std::to_string(i) + " has an empty id");
    }
    if (d.dist.size() != dim) {
      fail(Errc::DimensionMismatch,
           "document '" + d.id + "' has dimension " + std::to_string(d.dist.size()) +
               ", corpus has " + std::to_string(dim) + " subtopics");
    }
    auto [it, inserted] = by_id_.emplace(d.id, i);
    if (!inserted) {
      fail(Errc::ValidationError, "duplicate document id '" + d.id + "'");
    }
  }
}

SubtopicId Corpus::subtopic(Index t) const {
  if (t < 0 || t >= num_subtopics()) {
    fail(Errc::InvalidParams, "subtopic index " + std::to_string(t) + " out of range");
  }
  return SubtopicId{t, labels_[static_cast<std::size_t>(t)]};
}

Index Corpus::index_of(const std::string& doc_id) const {
  auto it = by_id_.find(doc_id);
  return it == by_id_.end() ? Index{-1} : it->second;
}

SelectionState::SelectionState(const Corpus& corpus, std::vector<Index> selected)
    : corpus_(&corpus), selected_(std::move(selected)) {
  for (std::size_t i = 0; i < selected_.size(); ++i) {
    const Index d = selected_[i];
    if (d < 0 || d >= corpus_->num_docs()) {
      fail(Errc::UnknownDocumentId, "selected index " + std::to_string(d) + " out of range");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (selected_[j] == d) {
        fail(Errc::ValidationError, "duplicate selection of document index " + std::to_string(d));
      }
    }
  }
}

bool SelectionState::contains(Index doc) const {
  return std::find(selected_.begin(), selected_.end(), doc) != selected_.end();
}

SelectionState SelectionState::extended(Index doc) const {
  if (doc < 0 || doc >= corpus_->num_docs()) {
    fail(Errc::UnknownDocumentId, "document index " + std::to_string(doc) + " out of range");
  }
  if (contains(doc)) {
    fail(Errc::CandidateAlreadySelected,
         "document '" + corpus_->doc(doc).id + "' already selected");
  }
  std::vector<Index> next = selected_;
  next.push_back(doc);
  SelectionState out(*corpus_);
  out.selected_ = std::move(next);
  return out;
}

bool is_deterministic_corpus(const Corpus& corpus, const Query& query) {
  if (!query.dist.deterministic()) return false;
  for (const Document& d : corpus.documents()) {
    if (!d.dist.deterministic()) return false;
  }
  return true;
}

}  // namespace ncall
