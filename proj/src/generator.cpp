#include "ncall/generator.hpp"

#include <cmath>
#include <string>

namespace ncall {

namespace {

Vector zipf_weights(int count, double skew) {
  Vector w(count);
  for (int t = 0; t < count; ++t) {
    w[t] = std::pow(static_cast<double>(t + 1), -skew);
  }
  return w / w.sum();
}

Index draw_categorical(std::mt19937_64& eng, const Vector& weights) {
  const double u = uniform01(eng) * weights.sum();
  double acc = 0.0;
  for (Index t = 0; t < weights.size(); ++t) {
    acc += weights[t];
    if (u <= acc) return t;
  }
  return weights.size() - 1;
}

SubtopicDistribution draw_weighted_vector(std::mt19937_64& eng, const Vector& popularity) {
  Vector v(popularity.size());
  for (Index t = 0; t < v.size(); ++t) {
    v[t] = popularity[t] * uniform01(eng);
  }
  return SubtopicDistribution::validated(v / v.sum());
}

std::string padded_id(char prefix, int i, int count) {
  int width = 1;
  for (int c = count - 1; c >= 10; c /= 10) ++width;
  width = std::max(width, 3);
  std::string digits = std::to_string(i);
  return prefix + std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits;
}

}  // namespace

void GenParams::validate() const {
  if (num_docs < 1 || num_subtopics < 1 || !(skew > 0.0)) {
    fail(Errc::InvalidParams, "generator requires num_docs >= 1, num_subtopics >= 1, skew > 0");
  }
}

double uniform01(std::mt19937_64& eng) {
  return (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
}

std::pair<Corpus, Query> generate_corpus(const GenParams& params) {
  params.validate();
  std::mt19937_64 eng(params.seed);
  const Vector popularity = zipf_weights(params.num_subtopics, params.skew);

  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(params.num_subtopics));
  for (int t = 0; t < params.num_subtopics; ++t) {
    labels.push_back("t" + std::to_string(t));
  }

  std::vector<Document> docs;
  docs.reserve(static_cast<std::size_t>(params.num_docs));
  for (int i = 0; i < params.num_docs; ++i) {
    SubtopicDistribution dist =
        params.deterministic
            ? SubtopicDistribution::point_mass(params.num_subtopics, draw_categorical(eng, popularity))
            : draw_weighted_vector(eng, popularity);
    docs.push_back(Document{padded_id('d', i, params.num_docs), std::move(dist)});
  }

  SubtopicDistribution qdist = [&] {
    switch (params.query_mode) {
      case QueryMode::Deterministic:
        return SubtopicDistribution::point_mass(params.num_subtopics,
                                                draw_categorical(eng, popularity));
      case QueryMode::Uniform:
        return SubtopicDistribution::uniform(params.num_subtopics);
      case QueryMode::DirichletLike:
      default:
        return draw_weighted_vector(eng, popularity);
    }
  }();

  return {Corpus(std::move(labels), std::move(docs)), Query{"q", std::move(qdist)}};
}

}  // namespace ncall
