#pragma once

#include <cstddef>
#include <string>

#include "torusact/lattice.hpp"
#include "torusact/orbit_space.hpp"

namespace torusact {

struct ManifoldType {
  enum class Tag {
    S4,
    CP2,
    S2xS2,
    CP2sharpCP2,
    CP2sharpMinusCP2,
    S5,
    S3xS2,
    S3twistS2,
    ConnectedSumDim4,
    ProductWithCircle,
    NotSimplyConnected,
  };

  Tag tag = Tag::S4;
  std::size_t count = 0;  // ConnectedSumDim4 only
  AbelianGroup group;     // NotSimplyConnected only

  static ManifoldType of(Tag t) { return ManifoldType{t, 0, {}}; }
  static ManifoldType connected_sum(std::size_t b2) { return ManifoldType{Tag::ConnectedSumDim4, b2, {}}; }
  static ManifoldType not_simply_connected(AbelianGroup g) {
    return ManifoldType{Tag::NotSimplyConnected, 0, std::move(g)};
  }

  std::string to_string() const;

  friend bool operator==(const ManifoldType&, const ManifoldType&) = default;
};

struct Dim5Params {
  Int a = 0, b = 0, c = 0, d = 0;
  Int k = 0, l = 0, m = 0, n = 0;

  friend bool operator==(const Dim5Params&, const Dim5Params&) = default;
};

/// Weights x3 = (bm - ck, dm - cl, c), x4 = (-bn - ak, -dn - al, a).
WeightedOrbitSpace dim5_weights(const Dim5Params& p);

ManifoldType classify_dim4(const WeightedOrbitSpace& s);

/// Requires x1 = e1, x2 = e2. Note b is stored as pz - rx.
Dim5Params extract_dim5_params(const WeightedOrbitSpace& s);

ManifoldType classify_dim5(const WeightedOrbitSpace& s);

/// Z_gcd(r, z) for a canonical-position rank-3 space with four weights.
AbelianGroup pi1_dim5_exact(const WeightedOrbitSpace& s);

struct LensSpace {
  enum class Kind { Sphere, S2xS1, Lens };
  Int order = 0;  // absolute value
  Int twist = 0;
  Kind kind = Kind::Lens;

  std::string to_string() const;
  friend bool operator==(const LensSpace&, const LensSpace&) = default;
};

struct BoundaryLensSpaces {
  LensSpace l1;
  LensSpace l2;
};

BoundaryLensSpaces boundary_lens_spaces(const WeightedOrbitSpace& s);

}  // namespace torusact
