#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torusact/lattice.hpp"

namespace torusact {

/// Primitive, sign-canonical copy of v (first non-zero entry positive).
/// Throws NotPrimitive when gcd of the entries is not 1.
IntVector normalize_weight(IntVector v);

/// Sign-canonical copy of v without the primitivity requirement.
IntVector sign_normalize(IntVector v);

/// Ordering used for canonical forms: entries compared by (|v|, v < 0).
bool entry_less(Int x, Int y);
bool weights_less(const std::vector<IntVector>& a, const std::vector<IntVector>& b);

class WeightedOrbitSpace {
 public:
  static constexpr std::size_t kMinRank = 2;
  static constexpr std::size_t kMaxRank = 4;

  WeightedOrbitSpace() = default;
  /// Validates rank (2..4), N >= rank, vector lengths; normalizes each weight.
  WeightedOrbitSpace(std::size_t rank, std::vector<IntVector> weights);

  std::size_t rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<IntVector>& weights() const noexcept { return weights_; }
  const IntVector& weight(std::size_t i) const { return weights_.at(i); }

  /// N x rank matrix with the weights as rows.
  IntMatrix matrix() const;

  WeightedOrbitSpace rotated(std::size_t start) const;
  WeightedOrbitSpace reversed() const;
  /// Applies x -> A x to every weight and renormalizes.
  WeightedOrbitSpace transformed(const IntMatrix& a) const;

  std::string to_string() const;

  friend bool operator==(const WeightedOrbitSpace&, const WeightedOrbitSpace&) = default;

 private:
  std::size_t rank_ = 0;
  std::vector<IntVector> weights_;
};

/// Same total order as the canonical forms: N first, then entries.
bool operator<(const WeightedOrbitSpace& a, const WeightedOrbitSpace& b);

struct LegalityReport {
  bool legal = false;
  std::vector<std::pair<std::size_t, std::size_t>> failing_pairs;
  bool spans = false;
  std::optional<std::vector<std::size_t>> simply_connected_certificate;
  /// No rank-sized minor is non-zero: the manifold splits off a circle factor.
  bool product_split = false;
};

LegalityReport is_legal(const WeightedOrbitSpace& s);

/// True when the 2 x n matrix [x; y] extends to a unimodular matrix.
bool is_legal_pair(const IntVector& x, const IntVector& y);

struct WitnessReport {
  std::optional<std::vector<std::size_t>> indices;
  bool spans = false;
  bool product_split = false;
};

/// First rank-subset (lexicographic on indices) of the rows with determinant +-1.
WitnessReport simply_connected_witness(const IntMatrix& weights);
WitnessReport simply_connected_witness(const WeightedOrbitSpace& s);

/// Z^n / <weights>.
AbelianGroup pi1_bound(const IntMatrix& weights);
AbelianGroup pi1_bound(const WeightedOrbitSpace& s);

struct CanonicalForm {
  WeightedOrbitSpace space;
  /// Canonical weight i = +-transform * (input weight at position i of the
  /// rotated/reversed sequence).
  IntMatrix transform;
  std::size_t start = 0;
  bool reversed = false;
};

/// Minimum over the class of s among representatives whose first two weights
/// are e1, e2. Ranks 2 and 3 only. With `oriented`, reversal is not a move.
CanonicalForm canonicalize(const WeightedOrbitSpace& s, bool oriented = false);

bool are_equivalent(const WeightedOrbitSpace& a, const WeightedOrbitSpace& b, bool oriented = false);

}  // namespace torusact
