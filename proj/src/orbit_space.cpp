#include "torusact/orbit_space.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace torusact {

IntVector sign_normalize(IntVector v) {
  for (Int x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (Int& y : v) y = checked_neg(y);
    break;
  }
  return v;
}

IntVector normalize_weight(IntVector v) {
  if (gcd(v) != 1) throw Error(ErrorKind::NotPrimitive, "weight " + to_string(v) + " is not primitive");
  return sign_normalize(std::move(v));
}

bool entry_less(Int x, Int y) {
  const Int ax = checked_abs(x), ay = checked_abs(y);
  if (ax != ay) return ax < ay;
  return x > y;  // equal magnitude: the positive one first
}

bool weights_less(const std::vector<IntVector>& a, const std::vector<IntVector>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    for (std::size_t j = 0; j < std::min(x.size(), y.size()); ++j) {
      if (x[j] == y[j]) continue;
      return entry_less(x[j], y[j]);
    }
    if (x.size() != y.size()) return x.size() < y.size();
  }
  return false;
}

// ---------------------------------------------------------------------------

WeightedOrbitSpace::WeightedOrbitSpace(std::size_t rank, std::vector<IntVector> weights) : rank_(rank) {
  if (rank < kMinRank) throw Error(ErrorKind::RankTooSmall, "rank " + std::to_string(rank) + " < 2");
  if (rank > kMaxRank) throw Error(ErrorKind::UnsupportedRank, "rank " + std::to_string(rank) + " > 4");
  if (weights.size() < rank)
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(weights.size()) + " weights for rank " + std::to_string(rank));
  weights_.reserve(weights.size());
  for (auto& w : weights) {
    if (w.size() != rank)
      throw Error(ErrorKind::DimensionMismatch, "weight " + torusact::to_string(w) + " has wrong length");
    weights_.push_back(normalize_weight(std::move(w)));
  }
}

IntMatrix WeightedOrbitSpace::matrix() const { return IntMatrix::from_rows(weights_); }

WeightedOrbitSpace WeightedOrbitSpace::rotated(std::size_t start) const {
  WeightedOrbitSpace out = *this;
  std::rotate(out.weights_.begin(), out.weights_.begin() + static_cast<std::ptrdiff_t>(start % size()),
              out.weights_.end());
  return out;
}

WeightedOrbitSpace WeightedOrbitSpace::reversed() const {
  WeightedOrbitSpace out = *this;
  std::reverse(out.weights_.begin(), out.weights_.end());
  return out;
}

WeightedOrbitSpace WeightedOrbitSpace::transformed(const IntMatrix& a) const {
  if (a.rows() != rank_ || a.cols() != rank_) throw Error(ErrorKind::DimensionMismatch, "transform size");
  WeightedOrbitSpace out = *this;
  for (auto& w : out.weights_) w = normalize_weight(a * w);
  return out;
}

std::string WeightedOrbitSpace::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (i) os << ',';
    os << torusact::to_string(weights_[i]);
  }
  return os.str();
}

bool operator<(const WeightedOrbitSpace& a, const WeightedOrbitSpace& b) {
  if (a.rank() != b.rank()) return a.rank() < b.rank();
  return weights_less(a.weights(), b.weights());
}

// ---------------------------------------------------------------------------

bool is_legal_pair(const IntVector& x, const IntVector& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "weights of different lengths");
  if (x.size() == 2) {
    const Int det = checked_sub(checked_mul(x[0], y[1]), checked_mul(x[1], y[0]));
    return det == 1 || det == -1;
  }
  if (x.size() == 3) {
    const IntVector c{checked_sub(checked_mul(x[1], y[2]), checked_mul(x[2], y[1])),
                      checked_sub(checked_mul(x[2], y[0]), checked_mul(x[0], y[2])),
                      checked_sub(checked_mul(x[0], y[1]), checked_mul(x[1], y[0]))};
    return gcd(c) == 1;
  }
  const IntMatrix m = IntMatrix::from_rows(std::vector<IntVector>{x, y});
  const auto snf = smith_normal_form(m);
  return snf.D(0, 0) == 1 && snf.D(1, 1) == 1;
}

namespace {

// Calls f(indices) for each k-subset of {0..n-1} in lexicographic order until f returns true.
template <typename F>
bool for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    if (f(idx)) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

WitnessReport simply_connected_witness(const IntMatrix& weights) {
  WitnessReport report;
  const std::size_t n = weights.cols();
  for_each_subset(weights.rows(), n, [&](const std::vector<std::size_t>& idx) {
    const Int det = determinant(weights.select_rows(idx));
    if (det != 0) report.spans = true;
    if (det == 1 || det == -1) {
      report.indices = idx;
      return true;
    }
    return false;
  });
  report.product_split = !report.spans;
  return report;
}

WitnessReport simply_connected_witness(const WeightedOrbitSpace& s) { return simply_connected_witness(s.matrix()); }

AbelianGroup pi1_bound(const IntMatrix& weights) { return quotient_group(weights); }

AbelianGroup pi1_bound(const WeightedOrbitSpace& s) { return quotient_group(s.matrix()); }

LegalityReport is_legal(const WeightedOrbitSpace& s) {
  if (s.rank() < WeightedOrbitSpace::kMinRank) throw Error(ErrorKind::RankTooSmall, "rank below 2");
  LegalityReport report;
  const std::size_t n = s.size();
  const std::size_t pairs = n == 2 ? 1 : n;
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::size_t j = (i + 1) % n;
    if (!is_legal_pair(s.weight(i), s.weight(j))) report.failing_pairs.emplace_back(i, j);
  }
  report.legal = report.failing_pairs.empty();
  const auto witness = simply_connected_witness(s);
  report.spans = witness.spans;
  report.simply_connected_certificate = witness.indices;
  report.product_split = witness.product_split;
  return report;
}

// ---------------------------------------------------------------------------
// Canonical forms

namespace {

using Vec3 = std::array<Int, 3>;

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {checked_sub(checked_mul(a[1], b[2]), checked_mul(a[2], b[1])),
          checked_sub(checked_mul(a[2], b[0]), checked_mul(a[0], b[2])),
          checked_sub(checked_mul(a[0], b[1]), checked_mul(a[1], b[0]))};
}

Int dot(const Vec3& a, const Vec3& b) {
  return checked_add(checked_add(checked_mul(a[0], b[0]), checked_mul(a[1], b[1])), checked_mul(a[2], b[2]));
}

Vec3 to_vec3(const IntVector& v) { return {v[0], v[1], v.size() > 2 ? v[2] : 0}; }

void sign_normalize(Vec3& v, std::size_t rank) {
  for (std::size_t i = 0; i < rank; ++i) {
    if (v[i] == 0) continue;
    if (v[i] < 0)
      for (std::size_t j = 0; j < rank; ++j) v[j] = checked_neg(v[j]);
    return;
  }
}

// -1, 0, 1 for a < b, a == b, a > b in the entry order.
int compare(const Vec3& a, const Vec3& b, std::size_t rank) {
  for (std::size_t i = 0; i < rank; ++i) {
    if (a[i] == b[i]) continue;
    return entry_less(a[i], b[i]) ? -1 : 1;
  }
  return 0;
}

// Integers s minimizing |p + s*r| (r != 0); one or two values, ascending.
std::array<Int, 2> nearest_shears(Int p, Int r, std::size_t& count) {
  const Int lo = floor_div(checked_neg(p), r);
  const Int hi = checked_add(lo, 1);
  const Int cost_lo = checked_abs(checked_add(p, checked_mul(lo, r)));
  const Int cost_hi = checked_abs(checked_add(p, checked_mul(hi, r)));
  count = cost_lo == cost_hi ? 2 : 1;
  if (cost_lo < cost_hi || cost_lo == cost_hi) return {lo, hi};
  return {hi, lo};
}

// Rows A with A*y0 = e1 and A*y1 = e2 (|det A| = 1); rank 2 uses the 2x2 block.
std::array<Vec3, 3> standard_position(const Vec3& y0, const Vec3& y1, std::size_t rank) {
  if (rank == 2) {
    const Int det = checked_sub(checked_mul(y0[0], y1[1]), checked_mul(y1[0], y0[1]));
    if (det != 1 && det != -1) throw Error(ErrorKind::IllegalOrbitSpace, "adjacent weights are not a basis");
    return {Vec3{checked_mul(det, y1[1]), checked_mul(det, checked_neg(y1[0])), 0},
            Vec3{checked_mul(det, checked_neg(y0[1])), checked_mul(det, y0[0]), 0}, Vec3{0, 0, 1}};
  }
  const Vec3 c = cross(y0, y1);
  const auto first = gcd_ext(c[0], c[1]);
  const auto second = gcd_ext(first.g, c[2]);
  if (second.g != 1) throw Error(ErrorKind::IllegalOrbitSpace, "adjacent weights do not span a primitive plane");
  const Vec3 z{checked_mul(first.s, second.s), checked_mul(first.t, second.s), second.t};
  // det [y0; y1; z] = z . (y0 x y1) = 1, so the inverse transpose is the cofactor matrix.
  return {cross(y1, z), cross(z, y0), c};
}

Vec3 apply(const std::array<Vec3, 3>& a, const Vec3& v, std::size_t rank) {
  Vec3 out{0, 0, 0};
  for (std::size_t i = 0; i < rank; ++i) out[i] = rank == 2 ? checked_add(checked_mul(a[i][0], v[0]), checked_mul(a[i][1], v[1])) : dot(a[i], v);
  return out;
}

struct Move {
  Int s1 = 1, s2 = 1, s = 0, t = 0;

  Vec3 apply(const Vec3& v) const {
    return {checked_add(checked_mul(s1, v[0]), checked_mul(s, v[2])),
            checked_add(checked_mul(s2, v[1]), checked_mul(t, v[2])), v[2]};
  }
  IntMatrix matrix(std::size_t rank) const {
    if (rank == 2) return IntMatrix{{s1, 0}, {0, s2}};
    return IntMatrix{{s1, 0, s}, {0, s2, t}, {0, 0, 1}};
  }
};

IntMatrix to_matrix(const std::array<Vec3, 3>& a, std::size_t rank) {
  IntMatrix m(rank, rank);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j) m(i, j) = a[i][j];
  return m;
}

}  // namespace

CanonicalForm canonicalize(const WeightedOrbitSpace& s, bool oriented) {
  if (s.rank() > 3) throw Error(ErrorKind::UnsupportedRank, "canonical forms are implemented for ranks 2 and 3");
  const std::size_t n = s.size();
  const std::size_t rank = s.rank();
  const std::size_t pairs = n == 2 ? 1 : n;
  for (std::size_t i = 0; i < pairs; ++i)
    if (!is_legal_pair(s.weight(i), s.weight((i + 1) % n))) throw Error(ErrorKind::IllegalOrbitSpace, s.to_string());

  std::vector<Vec3> input(n), positioned(n), candidate(n), best;
  for (std::size_t i = 0; i < n; ++i) input[i] = to_vec3(s.weight(i));

  std::array<Vec3, 3> best_a0{};
  Move best_move;
  std::size_t best_start = 0;
  bool best_rev = false;

  // Compares the move's image with the current best, stopping at the first
  // differing weight, and adopts it when smaller.
  auto offer = [&](const Move& move, const std::array<Vec3, 3>& a0, std::size_t start, bool rev) {
    bool smaller = best.empty();
    std::size_t i = 0;
    for (; i < n; ++i) {
      candidate[i] = rank == 2 ? Vec3{checked_mul(move.s1, positioned[i][0]), checked_mul(move.s2, positioned[i][1]), 0}
                               : move.apply(positioned[i]);
      sign_normalize(candidate[i], rank);
      if (smaller) continue;
      const int c = compare(candidate[i], best[i], rank);
      if (c > 0) return;
      if (c < 0) smaller = true;
    }
    if (!smaller) return;
    best = candidate;
    best_a0 = a0;
    best_move = move;
    best_start = start;
    best_rev = rev;
  };

  for (std::size_t start = 0; start < n; ++start) {
    for (bool rev : {false, true}) {
      if (rev && oriented) continue;
      auto at = [&](std::size_t j) { return input[rev ? (start + n - j % n) % n : (start + j) % n]; };
      const auto a0 = standard_position(at(0), at(1), rank);
      std::size_t pivot = n;
      for (std::size_t j = 0; j < n; ++j) {
        positioned[j] = apply(a0, at(j), rank);
        if (rank == 3 && j >= 2 && pivot == n && positioned[j][2] != 0) pivot = j;
      }
      for (Int s1 : {1, -1})
        for (Int s2 : {1, -1}) {
          if (rank == 2) {
            if (s1 == 1) offer(Move{1, s2, 0, 0}, a0, start, rev);
            continue;
          }
          std::array<Int, 2> ss{0, 0}, ts{0, 0};
          std::size_t ns = 1, nt = 1;
          if (pivot < n) {
            const Vec3& w = positioned[pivot];
            ss = nearest_shears(checked_mul(s1, w[0]), w[2], ns);
            ts = nearest_shears(checked_mul(s2, w[1]), w[2], nt);
          }
          for (std::size_t i = 0; i < ns; ++i)
            for (std::size_t j = 0; j < nt; ++j) offer(Move{s1, s2, ss[i], ts[j]}, a0, start, rev);
        }
    }
  }

  std::vector<IntVector> weights(n);
  for (std::size_t i = 0; i < n; ++i) weights[i].assign(best[i].begin(), best[i].begin() + static_cast<std::ptrdiff_t>(rank));
  return CanonicalForm{WeightedOrbitSpace(rank, std::move(weights)), best_move.matrix(rank) * to_matrix(best_a0, rank),
                       best_start, best_rev};
}

bool are_equivalent(const WeightedOrbitSpace& a, const WeightedOrbitSpace& b, bool oriented) {
  if (a.rank() != b.rank())
    throw Error(ErrorKind::RankMismatch,
                "ranks " + std::to_string(a.rank()) + " and " + std::to_string(b.rank()));
  if (a.size() != b.size()) return false;
  return canonicalize(a, oriented).space == canonicalize(b, oriented).space;
}

}  // namespace torusact
