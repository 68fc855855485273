#pragma once

// Exact integer linear algebra on small dense matrices.
//
// All arithmetic is on 64-bit integers with overflow detection: any operation
// whose result does not fit raises Error(ErrorKind::Overflow) instead of
// wrapping. Matrices in this project are at most 8x8 with small entries.
// Smith decomposition alone falls back to multiprecision internally.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "torusact/error.hpp"

namespace torusact {

using Int = std::int64_t;
using IntVector = std::vector<Int>;

namespace detail {
[[noreturn]] void overflow(const char* op);
}  // namespace detail

inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) detail::overflow("addition");
  return r;
}

inline Int checked_sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) detail::overflow("subtraction");
  return r;
}

inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) detail::overflow("multiplication");
  return r;
}

inline Int checked_neg(Int a) { return checked_sub(0, a); }
inline Int checked_abs(Int a) { return a < 0 ? checked_neg(a) : a; }

/// Non-negative gcd; gcd(0, 0) == 0.
Int gcd(Int a, Int b);
Int gcd(std::span<const Int> values);

/// Floor division and the matching non-negative remainder for b != 0.
Int floor_div(Int a, Int b);
Int floor_mod(Int a, Int b);

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<Int>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(std::span<const IntVector> rows);
  static IntMatrix from_columns(std::span<const IntVector> cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Int operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVector row(std::size_t r) const;
  IntVector column(std::size_t c) const;
  void set_row(std::size_t r, std::span<const Int> values);

  IntMatrix transposed() const;
  /// Submatrix built from the given row indices, all columns kept.
  IntMatrix select_rows(std::span<const std::size_t> indices) const;
  IntMatrix select_columns(std::span<const std::size_t> indices) const;
  /// Columns of `right` appended after the columns of this matrix.
  IntMatrix hconcat(const IntMatrix& right) const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_columns(std::size_t a, std::size_t b);
  /// row[target] += factor * row[source]
  void add_row_multiple(std::size_t target, std::size_t source, Int factor);
  /// col[target] += factor * col[source]
  void add_column_multiple(std::size_t target, std::size_t source, Int factor);
  void negate_row(std::size_t r);
  void negate_column(std::size_t c);

  bool is_zero() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, std::span<const Int> v);

struct BezoutResult {
  Int g = 0;
  Int s = 0;
  Int t = 0;
  friend bool operator==(const BezoutResult&, const BezoutResult&) = default;
};

/// g = gcd(a, c) >= 0 with a*s + c*t = g. Among all valid pairs, |s| is
/// minimal and ties are broken towards s >= 0. When c == 0 the pair is
/// (sign(a), 0); gcd_ext(0, 0) = (0, 0, 0).
BezoutResult gcd_ext(Int a, Int c);

/// Exact determinant by fraction-free (Bareiss) elimination.
Int determinant(const IntMatrix& m);

struct SmithDecomposition {
  IntMatrix U;  // rows x rows, unimodular
  IntMatrix D;  // rows x cols, diagonal
  IntMatrix V;  // cols x cols, unimodular

  std::size_t rank() const;
  /// Diagonal entries d_1 | d_2 | ... (zeros included, length min(rows, cols)).
  IntVector diagonal() const;
};

/// U * m * V = D with D diagonal, non-negative and a divisibility chain.
/// Pivots are chosen by minimal non-zero absolute value; no randomisation.
/// When that elimination overflows or leaves transforms above 2^24 the
/// decomposition is redone in multiprecision (Hermite form first, then a
/// size-reduction pass) and only the final U, D, V must fit in 64 bits.
SmithDecomposition smith_normal_form(const IntMatrix& m);

/// Finitely generated abelian group Z^free_rank + Z_t1 + ... with t1 | t2 | ...
struct AbelianGroup {
  std::size_t free_rank = 0;
  IntVector torsion;

  bool trivial() const noexcept { return free_rank == 0 && torsion.empty(); }
  bool finite() const noexcept { return free_rank == 0; }
  /// Order of a finite group; throws for infinite groups.
  Int order() const;
  std::string to_string() const;

  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;
};

/// Z^cols / (row lattice of m).
AbelianGroup quotient_group(const IntMatrix& m);

/// Row-style Hermite normal form of the row lattice of m: zero rows dropped,
/// pivots positive, entries above a pivot reduced into [0, pivot).
IntMatrix hermite_normal_form(const IntMatrix& m);

/// Square matrix with |det| = 1 whose first k rows are `rows`.
/// Throws NotCompletable when the rows do not span a primitive sublattice.
IntMatrix unimodular_complete(std::span<const IntVector> rows, std::size_t n);
IntMatrix unimodular_complete(const IntMatrix& rows);

/// Inverse of a unimodular matrix (throws NotCompletable if |det| != 1).
IntMatrix inverse_unimodular(const IntMatrix& m);

/// Basis of {v in Z^cols : m v = 0} in Hermite normal form (rows of the result
/// are the basis vectors, each primitive).
std::vector<IntVector> integer_kernel(const IntMatrix& m);

std::string to_string(std::span<const Int> v);

}  // namespace torusact
