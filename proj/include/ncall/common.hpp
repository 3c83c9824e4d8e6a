#pragma once
// Shared error type and numeric tolerances.
//
// Probabilities are plain doubles throughout. Input distributions must sum
// to 1 within kSumTol and are never renormalized; score comparisons and
// point-mass checks use the tighter kTieTol / kPointMassTol.

#include <charconv>
#include <stdexcept>
#include <string>

namespace ncall {

inline constexpr double kSumTol = 1e-9;        // |sum(p) - 1| on accepted distributions
inline constexpr double kPointMassTol = 1e-12; // |p - 1| for an entry to count as certain
inline constexpr double kTieTol = 1e-12;       // score ties and equivalence checks
inline constexpr int kBruteForceMaxItems = 20; // 2^k enumeration cap

enum class Errc {
  EmptyDistribution,
  NegativeEntry,
  SumNotOne,
  SchemaError,
  ValidationError,
  ProbabilityOutOfRange,
  TooManyItems,
  DimensionMismatch,
  CandidateAlreadySelected,
  NoCandidates,
  KTooLarge,
  UnknownDocumentId,
  InvalidParams,
  InvariantViolation,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, double detail = 0.0)
      : std::runtime_error(what), code_(code), detail_(detail) {}

  Errc code() const { return code_; }
  // Numeric payload, e.g. the actual sum behind a SumNotOne rejection.
  double detail() const { return detail_; }

 private:
  Errc code_;
  double detail_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what, double detail = 0.0) {
  throw Error(code, what, detail);
}

// Shortest round-trip decimal form; shared by CSV and report writers so
// output stays byte-stable across runs.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace ncall
