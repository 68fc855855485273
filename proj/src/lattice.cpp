#include "torusact/lattice.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <utility>

namespace torusact {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotCompletable: return "NotCompletable";
    case ErrorKind::NotPrimitive: return "NotPrimitive";
    case ErrorKind::RankTooSmall: return "RankTooSmall";
    case ErrorKind::UnsupportedRank: return "UnsupportedRank";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::IllegalOrbitSpace: return "IllegalOrbitSpace";
    case ErrorKind::NotCanonicalPosition: return "NotCanonicalPosition";
    case ErrorKind::GcdConditionViolated: return "GcdConditionViolated";
    case ErrorKind::InconsistentShear: return "InconsistentShear";
    case ErrorKind::UnsupportedWeightCount: return "UnsupportedWeightCount";
    case ErrorKind::OrientationDiscrepancy: return "OrientationDiscrepancy";
    case ErrorKind::DegenerateAction: return "DegenerateAction";
    case ErrorKind::NotFree: return "NotFree";
    case ErrorKind::NotFreeSubtorus: return "NotFreeSubtorus";
    case ErrorKind::UnrealizableSupport: return "UnrealizableSupport";
    case ErrorKind::StabilizerRankUnexpected: return "StabilizerRankUnexpected";
    case ErrorKind::EpsilonClassMismatch: return "EpsilonClassMismatch";
    case ErrorKind::NotRealizable: return "NotRealizable";
    case ErrorKind::RoundTripFailed: return "RoundTripFailed";
    case ErrorKind::SlopesNotCoprime: return "SlopesNotCoprime";
    case ErrorKind::ParityMismatch: return "ParityMismatch";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace detail {

void overflow(const char* op) { throw Error(ErrorKind::Overflow, std::string("64-bit overflow in ") + op); }

}  // namespace detail

Int gcd(Int a, Int b) {
  a = checked_abs(a);
  b = checked_abs(b);
  while (b != 0) {
    Int r = a % b;
    a = b;
    b = r;
  }
  return a;
}

Int gcd(std::span<const Int> values) {
  Int g = 0;
  for (Int v : values) g = gcd(g, v);
  return g;
}

Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Int floor_mod(Int a, Int b) {
  Int r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r < 0 ? r + checked_abs(b) : r;
}

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<Int>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(std::span<const IntVector> rows) {
  if (rows.empty()) return {};
  IntMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
  return m;
}

IntMatrix IntMatrix::from_columns(std::span<const IntVector> cols) {
  return from_rows(cols).transposed();
}

IntVector IntMatrix::row(std::size_t r) const {
  return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

IntVector IntMatrix::column(std::size_t c) const {
  IntVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void IntMatrix::set_row(std::size_t r, std::span<const Int> values) {
  if (values.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "row length");
  std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(r * cols_));
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix IntMatrix::select_rows(std::span<const std::size_t> indices) const {
  IntMatrix m(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i)
    for (std::size_t c = 0; c < cols_; ++c) m(i, c) = (*this)(indices[i], c);
  return m;
}

IntMatrix IntMatrix::select_columns(std::span<const std::size_t> indices) const {
  IntMatrix m(rows_, indices.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < indices.size(); ++j) m(r, j) = (*this)(r, indices[j]);
  return m;
}

IntMatrix IntMatrix::hconcat(const IntMatrix& right) const {
  if (right.rows_ != rows_) throw Error(ErrorKind::DimensionMismatch, "hconcat row counts differ");
  IntMatrix m(rows_, cols_ + right.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c);
    for (std::size_t c = 0; c < right.cols_; ++c) m(r, cols_ + c) = right(r, c);
  }
  return m;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
}

void IntMatrix::swap_columns(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
}

void IntMatrix::add_row_multiple(std::size_t target, std::size_t source, Int factor) {
  if (factor == 0) return;
  for (std::size_t c = 0; c < cols_; ++c)
    (*this)(target, c) = checked_add((*this)(target, c), checked_mul(factor, (*this)(source, c)));
}

void IntMatrix::add_column_multiple(std::size_t target, std::size_t source, Int factor) {
  if (factor == 0) return;
  for (std::size_t r = 0; r < rows_; ++r)
    (*this)(r, target) = checked_add((*this)(r, target), checked_mul(factor, (*this)(r, source)));
}

void IntMatrix::negate_row(std::size_t r) {
  for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = checked_neg((*this)(r, c));
}

void IntMatrix::negate_column(std::size_t c) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = checked_neg((*this)(r, c));
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Int v) { return v == 0; });
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r) os << ',';
    os << torusact::to_string(row(r));
  }
  os << ']';
  return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "matrix product");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Int acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc = checked_add(acc, checked_mul(a(i, k), b(k, j)));
      out(i, j) = acc;
    }
  return out;
}

IntVector operator*(const IntMatrix& a, std::span<const Int> v) {
  if (a.cols() != v.size()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
  IntVector out(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) out[i] = checked_add(out[i], checked_mul(a(i, k), v[k]));
  return out;
}

std::string to_string(std::span<const Int> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// gcd / determinant

BezoutResult gcd_ext(Int a, Int c) {
  if (a == 0 && c == 0) return {0, 0, 0};
  // Euclid on absolute values, then fix signs.
  Int r0 = checked_abs(a), r1 = checked_abs(c);
  Int s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    Int q = r0 / r1;
    r0 = std::exchange(r1, checked_sub(r0, checked_mul(q, r1)));
    s0 = std::exchange(s1, checked_sub(s0, checked_mul(q, s1)));
    t0 = std::exchange(t1, checked_sub(t0, checked_mul(q, t1)));
  }
  const Int g = r0;
  Int s = a < 0 ? -s0 : s0;
  if (c == 0) return {g, s, 0};
  // All solutions: s + k * |c|/g. Pick the representative of least |s|.
  const Int step = checked_abs(c) / g;
  s = floor_mod(s, step);
  if (step - s < s) s -= step;
  const Int t = checked_sub(g, checked_mul(a, s)) / c;
  return {g, s, t};
}

Int determinant(const IntMatrix& m) {
  if (!m.square()) throw Error(ErrorKind::NonSquare, "determinant of " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int num = checked_sub(checked_mul(a(i, j), a(k, k)), checked_mul(a(i, k), a(k, j)));
        a(i, j) = num / prev;  // exact by Sylvester's identity
      }
    prev = a(k, k);
  }
  return checked_mul(sign, a(n - 1, n - 1));
}

// ---------------------------------------------------------------------------
// Smith normal form

std::size_t SmithDecomposition::rank() const {
  std::size_t r = 0;
  const std::size_t k = std::min(D.rows(), D.cols());
  while (r < k && D(r, r) != 0) ++r;
  return r;
}

IntVector SmithDecomposition::diagonal() const {
  const std::size_t k = std::min(D.rows(), D.cols());
  IntVector out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = D(i, i);
  return out;
}

namespace {

// Quotient rounded to the nearest integer, so remainders lie in [-|b|/2, |b|/2].
Int nearest_div(Int a, Int b) {
  const Int q = floor_div(a, b);
  const Int r = checked_sub(a, checked_mul(q, b));
  return checked_mul(2, checked_abs(r)) > checked_abs(b) ? checked_add(q, 1) : q;
}

}  // namespace

namespace {

SmithDecomposition smith_fixed_width(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  SmithDecomposition s{IntMatrix::identity(rows), m, IntMatrix::identity(cols)};
  IntMatrix& D = s.D;
  IntMatrix& U = s.U;
  IntMatrix& V = s.V;

  auto row_swap = [&](std::size_t a, std::size_t b) { D.swap_rows(a, b); U.swap_rows(a, b); };
  auto col_swap = [&](std::size_t a, std::size_t b) { D.swap_columns(a, b); V.swap_columns(a, b); };
  auto row_add = [&](std::size_t t, std::size_t src, Int f) { D.add_row_multiple(t, src, f); U.add_row_multiple(t, src, f); };
  auto col_add = [&](std::size_t t, std::size_t src, Int f) { D.add_column_multiple(t, src, f); V.add_column_multiple(t, src, f); };

  const std::size_t steps = std::min(rows, cols);
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // Pivot: minimal non-zero |entry| in the trailing block.
      std::size_t pr = rows, pc = cols;
      Int best = 0;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          Int v = checked_abs(D(i, j));
          if (v != 0 && (best == 0 || v < best)) {
            best = v;
            pr = i;
            pc = j;
          }
        }
      if (best == 0) return s;  // trailing block is zero
      row_swap(t, pr);
      col_swap(t, pc);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (D(i, t) == 0) continue;
        row_add(i, t, checked_neg(nearest_div(D(i, t), D(t, t))));
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (D(t, j) == 0) continue;
        col_add(j, t, checked_neg(nearest_div(D(t, j), D(t, t))));
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Pivot must divide the rest of the block for the divisibility chain.
      std::size_t bad_row = rows;
      for (std::size_t i = t + 1; i < rows && bad_row == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (D(i, j) % D(t, t) != 0) {
            bad_row = i;
            break;
          }
      if (bad_row == rows) break;
      row_add(t, bad_row, 1);
    }
    if (D(t, t) < 0) {
      D.negate_row(t);
      U.negate_row(t);
    }
  }
  return s;
}

}  // namespace

namespace {

using Big = boost::multiprecision::cpp_int;
using BigMatrix = std::vector<std::vector<Big>>;

BigMatrix to_big(const IntMatrix& m) {
  BigMatrix out(m.rows(), std::vector<Big>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

BigMatrix big_identity(std::size_t n) {
  BigMatrix out(n, std::vector<Big>(n));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1;
  return out;
}

IntMatrix to_fixed(const BigMatrix& m, std::size_t rows, std::size_t cols) {
  IntMatrix out(rows, cols);
  const Big lo = std::numeric_limits<Int>::min(), hi = std::numeric_limits<Int>::max();
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      if (m[i][j] < lo || m[i][j] > hi) detail::overflow("Smith transform");
      out(i, j) = static_cast<Int>(m[i][j]);
    }
  return out;
}

Big big_floor_div(const Big& a, const Big& b) {
  Big q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Nearest integer to num / den, den > 0.
Big round_div(const Big& num, const Big& den) { return big_floor_div(2 * num + den, 2 * den); }

Big dot(const std::vector<Big>& a, const std::vector<Big>& b) {
  Big s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void add_multiple(std::vector<Big>& target, const std::vector<Big>& source, const Big& f) {
  for (std::size_t i = 0; i < target.size(); ++i) target[i] += f * source[i];
}

// Row Hermite form H = U * A; U is returned in place of the identity it starts from.
void big_row_hnf(BigMatrix& H, BigMatrix& U) {
  const std::size_t rows = H.size(), cols = rows ? H[0].size() : 0;
  std::size_t t = 0;
  for (std::size_t c = 0; c < cols && t < rows; ++c) {
    for (std::size_t i = t + 1; i < rows; ++i) {
      if (H[i][c] == 0) continue;
      // 2x2 unimodular step sending (H[t][c], H[i][c]) to (g, 0).
      Big a = H[t][c], b = H[i][c], x0 = 1, x1 = 0, y0 = 0, y1 = 1;
      while (b != 0) {
        Big q = big_floor_div(a, b);
        Big r = a - q * b;
        a = b;
        b = r;
        Big nx = x0 - q * x1, ny = y0 - q * y1;
        x0 = x1;
        x1 = nx;
        y0 = y1;
        y1 = ny;
      }
      const Big p = H[t][c] / a, q = H[i][c] / a;
      auto mix = [&](BigMatrix& M) {
        for (std::size_t j = 0; j < M[t].size(); ++j) {
          Big top = x0 * M[t][j] + y0 * M[i][j];
          Big bottom = -q * M[t][j] + p * M[i][j];
          M[t][j] = std::move(top);
          M[i][j] = std::move(bottom);
        }
      };
      mix(H);
      mix(U);
    }
    if (H[t][c] == 0) continue;
    if (H[t][c] < 0) {
      for (auto& v : H[t]) v = -v;
      for (auto& v : U[t]) v = -v;
    }
    for (std::size_t i = 0; i < t; ++i) {
      const Big f = -big_floor_div(H[i][c], H[t][c]);
      if (f == 0) continue;
      add_multiple(H[i], H[t], f);
      add_multiple(U[i], U[t], f);
    }
    ++t;
  }
}

// Minimal-pivot diagonalisation, same strategy as the fixed-width version.
void big_diagonalize(BigMatrix& D, BigMatrix& U, BigMatrix& V) {
  const std::size_t rows = D.size(), cols = rows ? D[0].size() : 0;
  auto col_add = [&](std::size_t t, std::size_t src, const Big& f) {
    for (auto& r : D) r[t] += f * r[src];
    for (auto& r : V) r[t] += f * r[src];
  };
  auto nearest = [](const Big& a, const Big& b) {
    Big q = big_floor_div(a, b);
    Big r = a - q * b;
    return 2 * abs(r) > abs(b) ? Big(q + 1) : q;
  };
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      std::size_t pr = rows, pc = cols;
      Big best = 0;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          Big v = abs(D[i][j]);
          if (v != 0 && (best == 0 || v < best)) {
            best = v;
            pr = i;
            pc = j;
          }
        }
      if (best == 0) return;
      std::swap(D[t], D[pr]);
      std::swap(U[t], U[pr]);
      for (auto& r : D) std::swap(r[t], r[pc]);
      for (auto& r : V) std::swap(r[t], r[pc]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (D[i][t] == 0) continue;
        const Big f = -nearest(D[i][t], D[t][t]);
        add_multiple(D[i], D[t], f);
        add_multiple(U[i], U[t], f);
        if (D[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (D[t][j] == 0) continue;
        col_add(j, t, -nearest(D[t][j], D[t][t]));
        if (D[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      std::size_t bad_row = rows;
      for (std::size_t i = t + 1; i < rows && bad_row == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (D[i][j] % D[t][t] != 0) {
            bad_row = i;
            break;
          }
      if (bad_row == rows) break;
      add_multiple(D[t], D[bad_row], 1);
      add_multiple(U[t], U[bad_row], 1);
    }
    if (D[t][t] < 0) {
      for (auto& v : D[t]) v = -v;
      for (auto& v : U[t]) v = -v;
    }
  }
}

// Shrinks U and V without changing U * A * V = D, using the moves that fix D:
// kernel columns of V and zero rows of U can be added anywhere, and for
// positions j, k below the rank, col_k(V) += c * col_j(V) is paired with
// row_j(U) -= (c * d_j / d_k) * row_k(U) whenever d_k divides c * d_j.
void big_reduce(const std::vector<Big>& d, BigMatrix& U, BigMatrix& V) {
  const std::size_t rows = U.size(), cols = V.size();
  std::size_t rank = 0;
  while (rank < d.size() && d[rank] != 0) ++rank;
  std::vector<std::vector<Big>> vcols(cols, std::vector<Big>(cols));
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = 0; j < cols; ++j) vcols[j][i] = V[i][j];

  for (int pass = 0; pass < 64; ++pass) {
    bool changed = false;
    for (std::size_t k = 0; k < cols; ++k)
      for (std::size_t j = 0; j < cols; ++j) {
        if (j == k) continue;
        if (j >= rank) {
          const Big den = dot(vcols[j], vcols[j]);
          if (den == 0) continue;
          const Big f = round_div(-dot(vcols[k], vcols[j]), den);
          if (f == 0) continue;
          add_multiple(vcols[k], vcols[j], f);
          changed = true;
        } else if (k < rank) {
          const Big c0 = d[k] / boost::multiprecision::gcd(d[j], d[k]);
          const Big u0 = c0 * d[j] / d[k];
          const Big den = c0 * c0 * dot(vcols[j], vcols[j]) + u0 * u0 * dot(U[k], U[k]);
          if (den == 0) continue;
          const Big num = u0 * dot(U[j], U[k]) - c0 * dot(vcols[k], vcols[j]);
          const Big f = round_div(num, den);
          if (f == 0) continue;
          add_multiple(vcols[k], vcols[j], f * c0);
          add_multiple(U[j], U[k], -f * u0);
          changed = true;
        }
      }
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t z = rank; z < rows; ++z) {
        if (z == i) continue;
        const Big den = dot(U[z], U[z]);
        if (den == 0) continue;
        const Big f = round_div(-dot(U[i], U[z]), den);
        if (f == 0) continue;
        add_multiple(U[i], U[z], f);
        changed = true;
      }
    if (!changed) break;
  }
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = 0; j < cols; ++j) V[i][j] = vcols[j][i];
}

// Hermite form first keeps the transforms close to their minimal size; the
// reduction pass then removes most of what is left.
SmithDecomposition smith_multiprecision(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  BigMatrix H = to_big(m), U1 = big_identity(rows);
  big_row_hnf(H, U1);
  BigMatrix U2 = big_identity(rows), V = big_identity(cols);
  big_diagonalize(H, U2, V);
  BigMatrix U(rows, std::vector<Big>(rows));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rows; ++j)
      for (std::size_t k = 0; k < rows; ++k) U[i][j] += U2[i][k] * U1[k][j];
  std::vector<Big> d(std::min(rows, cols));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = H[i][i];
  big_reduce(d, U, V);
  return {to_fixed(U, rows, rows), to_fixed(H, rows, cols), to_fixed(V, cols, cols)};
}

bool small_transforms(const SmithDecomposition& s) {
  constexpr Int kLimit = Int{1} << 24;
  auto small = [&](const IntMatrix& M) {
    for (std::size_t i = 0; i < M.rows(); ++i)
      for (std::size_t j = 0; j < M.cols(); ++j)
        if (M(i, j) > kLimit || M(i, j) < -kLimit) return false;
    return true;
  };
  return small(s.U) && small(s.V);
}

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& m) {
  try {
    SmithDecomposition s = smith_fixed_width(m);
    if (small_transforms(s)) return s;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Overflow) throw;
  }
  return smith_multiprecision(m);
}

Int AbelianGroup::order() const {
  if (free_rank != 0) throw Error(ErrorKind::DimensionMismatch, "order of an infinite group");
  Int o = 1;
  for (Int t : torsion) o = checked_mul(o, t);
  return o;
}

std::string AbelianGroup::to_string() const {
  if (trivial()) return "trivial";
  std::ostringstream os;
  bool first = true;
  if (free_rank == 1) {
    os << "Z";
    first = false;
  } else if (free_rank > 1) {
    os << "Z^" << free_rank;
    first = false;
  }
  for (Int t : torsion) {
    if (!first) os << " x ";
    os << "Z_" << t;
    first = false;
  }
  return os.str();
}

AbelianGroup quotient_group(const IntMatrix& m) {
  AbelianGroup g;
  if (m.rows() == 0) {
    g.free_rank = m.cols();
    return g;
  }
  const auto snf = smith_normal_form(m);
  const std::size_t rank = snf.rank();
  g.free_rank = m.cols() - rank;
  for (std::size_t i = 0; i < rank; ++i)
    if (snf.D(i, i) > 1) g.torsion.push_back(snf.D(i, i));
  return g;
}

// ---------------------------------------------------------------------------
// Hermite normal form, completion, kernels

IntMatrix hermite_normal_form(const IntMatrix& m) {
  IntMatrix a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t pivot_row = 0;
  std::vector<std::size_t> pivot_cols;
  for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
    // Euclid down the column until a single non-zero entry remains at pivot_row.
    for (;;) {
      std::size_t best = rows;
      for (std::size_t r = pivot_row; r < rows; ++r)
        if (a(r, c) != 0 && (best == rows || checked_abs(a(r, c)) < checked_abs(a(best, c)))) best = r;
      if (best == rows) break;
      a.swap_rows(pivot_row, best);
      bool done = true;
      for (std::size_t r = pivot_row + 1; r < rows; ++r) {
        if (a(r, c) == 0) continue;
        a.add_row_multiple(r, pivot_row, checked_neg(a(r, c) / a(pivot_row, c)));
        if (a(r, c) != 0) done = false;
      }
      if (done) break;
    }
    if (a(pivot_row, c) == 0) continue;
    if (a(pivot_row, c) < 0) a.negate_row(pivot_row);
    for (std::size_t r = 0; r < pivot_row; ++r)
      a.add_row_multiple(r, pivot_row, checked_neg(floor_div(a(r, c), a(pivot_row, c))));
    pivot_cols.push_back(c);
    ++pivot_row;
  }
  IntMatrix out(pivot_row, cols);
  for (std::size_t r = 0; r < pivot_row; ++r)
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = a(r, c);
  return out;
}

IntMatrix unimodular_complete(const IntMatrix& rows) {
  const std::size_t k = rows.rows(), n = rows.cols();
  if (k > n) throw Error(ErrorKind::NotCompletable, "more rows than columns");
  if (k == 0) return IntMatrix::identity(n);
  const auto snf = smith_normal_form(rows);
  for (std::size_t i = 0; i < k; ++i)
    if (snf.D(i, i) != 1)
      throw Error(ErrorKind::NotCompletable,
                  "rows " + rows.to_string() + " have invariant factor " + std::to_string(snf.D(i, i)));
  // rows = U^-1 [I 0] V^-1, so the trailing rows of V^-1 complete it.
  const IntMatrix v_inv = inverse_unimodular(snf.V);
  IntMatrix tail(n - k, n);
  for (std::size_t r = k; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) tail(r - k, c) = v_inv(r, c);
  const IntMatrix reduced = hermite_normal_form(tail);
  IntMatrix out(n, n);
  for (std::size_t r = 0; r < k; ++r) out.set_row(r, rows.row(r));
  for (std::size_t r = 0; r < n - k; ++r) out.set_row(k + r, reduced.row(r));
  return out;
}

IntMatrix unimodular_complete(std::span<const IntVector> rows, std::size_t n) {
  if (rows.empty()) return IntMatrix::identity(n);
  for (const auto& r : rows)
    if (r.size() != n) throw Error(ErrorKind::DimensionMismatch, "completion row length");
  return unimodular_complete(IntMatrix::from_rows(rows));
}

IntMatrix inverse_unimodular(const IntMatrix& m) {
  if (!m.square()) throw Error(ErrorKind::NonSquare, "inverse of non-square matrix");
  const auto snf = smith_normal_form(m);
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (snf.D(i, i) != 1) throw Error(ErrorKind::NotCompletable, "matrix is not unimodular: " + m.to_string());
  // U m V = I  =>  m^-1 = V U
  return snf.V * snf.U;
}

std::vector<IntVector> integer_kernel(const IntMatrix& m) {
  const std::size_t cols = m.cols();
  if (m.rows() == 0) {
    std::vector<IntVector> basis;
    for (std::size_t i = 0; i < cols; ++i) {
      IntVector e(cols, 0);
      e[i] = 1;
      basis.push_back(std::move(e));
    }
    return basis;
  }
  const auto snf = smith_normal_form(m);
  const std::size_t rank = snf.rank();
  if (rank == cols) return {};
  IntMatrix raw(cols - rank, cols);
  for (std::size_t j = rank; j < cols; ++j)
    for (std::size_t i = 0; i < cols; ++i) raw(j - rank, i) = snf.V(i, j);
  const IntMatrix h = hermite_normal_form(raw);
  std::vector<IntVector> basis;
  for (std::size_t r = 0; r < h.rows(); ++r) basis.push_back(h.row(r));
  return basis;
}

}  // namespace torusact
