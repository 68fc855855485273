#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "torusact/biquotient.hpp"
#include "torusact/classify.hpp"
#include "torusact/orbit_space.hpp"

namespace torusact {

struct CensusRow {
  WeightedOrbitSpace canonical;
  ManifoldType type;
  AbelianGroup pi1;
  std::optional<T2ActionParams> t2;    // rank 2
  std::optional<Dim5Params> circle;    // rank 3
  bool verified = false;
};

struct Census {
  std::size_t rank = 0;
  Int bound = 0;
  std::vector<CensusRow> rows;
};

/// Primitive, sign-canonical vectors with entries in [-bound, bound], in
/// lexicographic order.
std::vector<IntVector> census_vectors(std::size_t rank, Int bound);

/// Canonical forms of all legal, simply connected four-weight orbit spaces
/// with entries in [-bound, bound], sorted.
std::vector<WeightedOrbitSpace> census_classes_serial(std::size_t rank, Int bound);
std::vector<WeightedOrbitSpace> census_classes_parallel(std::size_t rank, Int bound);

CensusRow census_row(const WeightedOrbitSpace& canonical);

Census census_serial(std::size_t rank, Int bound);
Census census_parallel(std::size_t rank, Int bound);

/// Calls f(space) for every legal, simply connected four-weight sequence
/// with entries in [-bound, bound] (all rotations and reflections included).
template <typename F>
void for_each_census_input(std::size_t rank, Int bound, F&& f);

namespace detail {
std::vector<std::vector<char>> adjacency(const std::vector<IntVector>& vectors);
bool simply_connected(const WeightedOrbitSpace& s);
void check_census_arguments(std::size_t rank, Int bound);
}  // namespace detail

template <typename F>
void for_each_census_input(std::size_t rank, Int bound, F&& f) {
  detail::check_census_arguments(rank, bound);
  const auto vectors = census_vectors(rank, bound);
  const auto adj = detail::adjacency(vectors);
  const std::size_t count = vectors.size();
  for (std::size_t i0 = 0; i0 < count; ++i0)
    for (std::size_t i1 = 0; i1 < count; ++i1) {
      if (!adj[i0][i1]) continue;
      for (std::size_t i2 = 0; i2 < count; ++i2) {
        if (!adj[i1][i2]) continue;
        for (std::size_t i3 = 0; i3 < count; ++i3) {
          if (!adj[i2][i3] || !adj[i3][i0]) continue;
          WeightedOrbitSpace s(rank, {vectors[i0], vectors[i1], vectors[i2], vectors[i3]});
          if (detail::simply_connected(s)) f(s);
        }
      }
    }
}

}  // namespace torusact
