#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torusact/classify.hpp"
#include "torusact/lattice.hpp"
#include "torusact/orbit_space.hpp"

namespace torusact {

// Coordinates of (q1, q2) = (alpha1 + beta1 j, alpha2 + beta2 j) in S3 x S3.
enum Coordinate : std::uint8_t { kAlpha1 = 0, kBeta1 = 1, kAlpha2 = 2, kBeta2 = 3 };

/// Bit i set when coordinate i is non-zero.
using SupportPattern = std::uint8_t;

constexpr SupportPattern support_of(std::initializer_list<Coordinate> coords) {
  SupportPattern s = 0;
  for (Coordinate c : coords) s = static_cast<SupportPattern>(s | (1u << c));
  return s;
}

bool is_realizable(SupportPattern s);
std::string support_to_string(SupportPattern s);

/// z acts with exponents a, b, c, d on alpha1, beta1, alpha2, beta2.
struct CircleActionParams {
  Int a = 0, b = 0, c = 0, d = 0;
  friend bool operator==(const CircleActionParams&, const CircleActionParams&) = default;
};

/// z-exponents (a, b, c, d) and w-exponents (-n, k, m, l).
struct T2ActionParams {
  Int a = 0, b = 0, c = 0, d = 0;
  Int n = 0, k = 0, m = 0, l = 0;

  static T2ActionParams inffree(Int r, Int lambda) { return {1, 1, 0, 0, r, r + lambda, 1, 1}; }
  static T2ActionParams unifree() { return {1, 0, -1, 1, 0, 1, 1, 1}; }

  std::string to_string() const;
  friend bool operator==(const T2ActionParams&, const T2ActionParams&) = default;
};

/// Characters of T4 = (u, v, w, z) on (alpha1, beta1, alpha2, beta2):
/// rows (0,0,-n,a), (1,0,k,b), (0,0,m,c), (0,1,l,d).
IntMatrix torus_weight_matrix(const T2ActionParams& p);
IntMatrix torus_weight_matrix(const Dim5Params& p);

/// Characters of the three-torus (u, w, z) acting by
/// (z w^-r u^-s alpha1 + z w^(r+1) u^s beta1 j, w u^-1 alpha2 + w u beta2 j).
IntMatrix orbifold_weight_matrix(Int r, Int s);

/// A subtorus H (columns of `embedding`) and a complementary torus C with
/// [embedding | complement] unimodular.
struct SubtorusSplit {
  IntMatrix embedding;   // t x h
  IntMatrix complement;  // t x (t - h)

  static SubtorusSplit with_completion(const IntMatrix& embedding);
  /// Coordinate subtori: columns e_i for the given indices.
  static SubtorusSplit coordinates(std::size_t t, std::vector<std::size_t> embedded, std::vector<std::size_t> residual);
};

/// Closed subgroup of a torus T^m: identity component of the given dimension
/// times a finite group with the listed invariant factors.
struct ClosedSubgroup {
  std::size_t dimension = 0;
  IntVector component_orders;
  /// Primitive generators of the identity component's lattice (sign-canonical).
  std::vector<IntVector> slopes;

  bool trivial() const noexcept { return dimension == 0 && component_orders.empty(); }
  /// Number of elements when finite.
  Int order() const;
  std::string to_string() const;
};

/// Throws NotFreeSubtorus unless every realizable support restricts W to an
/// injective, saturated map on H.
void check_free_subtorus(const IntMatrix& w, const SubtorusSplit& split);

/// Stabilizer, inside the residual torus T/H written in the complement's
/// coordinates, of a point whose non-zero coordinates are exactly S.
ClosedSubgroup induced_stabilizer(const IntMatrix& w, const SubtorusSplit& split, SupportPattern s);

struct IsotropyDiagram {
  /// Arcs in the order top, left, bottom, right of the figures:
  /// [S1xS3], [S3xS1], [S1_jxS3], [S3xS1_j].
  static constexpr std::array<SupportPattern, 4> kArcs{
      support_of({kAlpha1, kAlpha2, kBeta2}),
      support_of({kAlpha1, kBeta1, kAlpha2}),
      support_of({kBeta1, kAlpha2, kBeta2}),
      support_of({kAlpha1, kBeta1, kBeta2}),
  };
  /// Vertices [S1xS1], [S1xS1_j], [S1_jxS1_j], [S1_jxS1].
  static constexpr std::array<SupportPattern, 4> kVertices{
      support_of({kAlpha1, kAlpha2}),
      support_of({kAlpha1, kBeta2}),
      support_of({kBeta1, kBeta2}),
      support_of({kBeta1, kAlpha2}),
  };

  std::array<ClosedSubgroup, 4> arcs;
  std::array<ClosedSubgroup, 4> vertices;
  /// Present when the arc stabilizers are circles (residual rank >= 2).
  std::optional<WeightedOrbitSpace> orbit_space;
};

IsotropyDiagram induced_orbit_space(const IntMatrix& w, const SubtorusSplit& split);

bool is_free_circle(const CircleActionParams& p);
ManifoldType w2_class(const CircleActionParams& p);

struct T2Freeness {
  bool free = false;
  std::array<Int, 3> eps{0, 0, 0};  // eps2, eps3, eps4
  std::string failing;              // first failing condition when not free
};

T2Freeness is_free_t2(const T2ActionParams& p);

ManifoldType classify_t2_quotient(const T2ActionParams& p);

/// Induced diagram of T2_uv on the quotient by T2_wz.
IsotropyDiagram t2_quotient_diagram(const T2ActionParams& p);
/// Induced diagram of T3_uvw on the quotient by the z-circle.
IsotropyDiagram circle_quotient_diagram(const Dim5Params& p);

T2ActionParams realize_dim4(const WeightedOrbitSpace& target);
Dim5Params realize_dim5(const WeightedOrbitSpace& target);

struct ExtensionWitness {
  Int x = 0;           // Bezout family index
  Int p = 0, q = 0;    // circle slope (p, q, 1) in T3_uvw
  Int k = 0, l = 0, m = 0, n = 0;
  T2ActionParams t2;   // free T2 action containing the circle
};

struct ExtensionResult {
  enum class Status { Found, NecessaryConditionFails, SearchExhausted };
  Status status = Status::SearchExhausted;
  std::optional<ExtensionWitness> witness;
  Int bound = 0;
};

std::string to_string(ExtensionResult::Status s);

/// bd +- ac +- ad +- bc == 0 for some choice of signs.
bool s1act_holds(const CircleActionParams& p);
Int default_extension_bound(const CircleActionParams& p);

ExtensionResult extend_circle_to_t2(const CircleActionParams& p, std::optional<Int> bound = std::nullopt);
/// Single-threaded reference of the same search; identical results.
ExtensionResult extend_circle_to_t2_serial(const CircleActionParams& p, std::optional<Int> bound = std::nullopt);

/// Exponents of the circle z -> (w, z) = (z^p, z^q) inside the T2 action.
CircleActionParams sub_circle(const T2ActionParams& base, Int p, Int q);
ManifoldType circle_bundle_total_space(const T2ActionParams& base, Int p, Int q);

}  // namespace torusact
