#include "torusact/census.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <set>

namespace torusact {

namespace detail {

void check_census_arguments(std::size_t rank, Int bound) {
  if (rank != 2 && rank != 3)
    throw Error(ErrorKind::UnsupportedRank, "census supports ranks 2 and 3, got " + std::to_string(rank));
  if (bound < 0) throw Error(ErrorKind::DimensionMismatch, "negative entry bound");
}

std::vector<std::vector<char>> adjacency(const std::vector<IntVector>& vectors) {
  const std::size_t n = vectors.size();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) adj[i][j] = adj[j][i] = is_legal_pair(vectors[i], vectors[j]) ? 1 : 0;
  return adj;
}

bool simply_connected(const WeightedOrbitSpace& s) {
  if (s.rank() == 2) return simply_connected_witness(s).indices.has_value();
  // Z^3 / <x_i> is trivial exactly when the maximal minors are coprime.
  const IntMatrix m = s.matrix();
  Int g = 0;
  for (std::size_t skip = 0; skip < s.size() && g != 1; ++skip) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (i != skip) rows.push_back(i);
    if (rows.size() == 3) g = gcd(g, determinant(m.select_rows(rows)));
  }
  return g == 1;
}

}  // namespace detail

std::vector<IntVector> census_vectors(std::size_t rank, Int bound) {
  detail::check_census_arguments(rank, bound);
  std::vector<IntVector> out;
  IntVector v(rank, -bound);
  for (;;) {
    if (gcd(v) == 1 && sign_normalize(v) == v) out.push_back(v);
    std::size_t i = rank;
    while (i > 0 && v[i - 1] == bound) {
      v[i - 1] = -bound;
      --i;
    }
    if (i == 0) break;
    ++v[i - 1];
  }
  return out;
}

namespace {

using Cycle = std::array<std::size_t, 4>;

// Smallest among the rotations and reflections of the index cycle.
bool dihedral_minimal(const Cycle& c) {
  for (std::size_t start = 0; start < 4; ++start) {
    Cycle fwd{}, bwd{};
    for (std::size_t i = 0; i < 4; ++i) {
      fwd[i] = c[(start + i) % 4];
      bwd[i] = c[(start + 4 - i) % 4];
    }
    if (fwd < c || bwd < c) return false;
  }
  return true;
}

// Canonical forms of the legal, simply connected cycles starting at i0.
void collect_from(std::size_t rank, const std::vector<IntVector>& vectors, const std::vector<std::vector<char>>& adj,
                  std::size_t i0, std::set<WeightedOrbitSpace>& out) {
  const std::size_t n = vectors.size();
  for (std::size_t i1 = 0; i1 < n; ++i1) {
    if (!adj[i0][i1]) continue;
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      if (!adj[i1][i2]) continue;
      for (std::size_t i3 = 0; i3 < n; ++i3) {
        if (!adj[i2][i3] || !adj[i3][i0]) continue;
        if (!dihedral_minimal({i0, i1, i2, i3})) continue;
        const WeightedOrbitSpace s(rank, {vectors[i0], vectors[i1], vectors[i2], vectors[i3]});
        if (!detail::simply_connected(s)) continue;
        out.insert(canonicalize(s).space);
      }
    }
  }
}

}  // namespace

std::vector<WeightedOrbitSpace> census_classes_serial(std::size_t rank, Int bound) {
  const auto vectors = census_vectors(rank, bound);
  const auto adj = detail::adjacency(vectors);
  std::set<WeightedOrbitSpace> classes;
  for (std::size_t i0 = 0; i0 < vectors.size(); ++i0) collect_from(rank, vectors, adj, i0, classes);
  return {classes.begin(), classes.end()};
}

std::vector<WeightedOrbitSpace> census_classes_parallel(std::size_t rank, Int bound) {
  const auto vectors = census_vectors(rank, bound);
  const auto adj = detail::adjacency(vectors);
  const auto n = static_cast<std::ptrdiff_t>(vectors.size());
  std::set<WeightedOrbitSpace> classes;
  std::exception_ptr failure;
#pragma omp parallel
  {
    std::set<WeightedOrbitSpace> local;
#pragma omp for schedule(dynamic, 1) nowait
    for (std::ptrdiff_t i0 = 0; i0 < n; ++i0) {
      try {
        collect_from(rank, vectors, adj, static_cast<std::size_t>(i0), local);
      } catch (...) {
#pragma omp critical(torusact_census_failure)
        if (!failure) failure = std::current_exception();
      }
    }
#pragma omp critical(torusact_census_merge)
    classes.merge(local);
  }
  if (failure) std::rethrow_exception(failure);
  return {classes.begin(), classes.end()};
}

CensusRow census_row(const WeightedOrbitSpace& canonical) {
  CensusRow row{canonical, {}, pi1_bound(canonical), std::nullopt, std::nullopt, false};
  if (canonical.rank() == 2) {
    row.type = classify_dim4(canonical);
    try {
      row.t2 = realize_dim4(canonical);
      row.verified = true;
    } catch (const Error&) {
      row.verified = false;
    }
  } else {
    row.type = classify_dim5(canonical);
    try {
      row.circle = realize_dim5(canonical);
      row.verified = true;
    } catch (const Error&) {
      row.verified = false;
    }
  }
  return row;
}

Census census_serial(std::size_t rank, Int bound) {
  Census out{rank, bound, {}};
  for (const auto& s : census_classes_serial(rank, bound)) out.rows.push_back(census_row(s));
  return out;
}

Census census_parallel(std::size_t rank, Int bound) {
  Census out{rank, bound, {}};
  const auto classes = census_classes_parallel(rank, bound);
  out.rows.resize(classes.size());
  const auto n = static_cast<std::ptrdiff_t>(classes.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      out.rows[idx] = census_row(classes[idx]);
    } catch (...) {
#pragma omp critical(torusact_census_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace torusact
