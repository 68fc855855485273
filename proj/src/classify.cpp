#include "torusact/classify.hpp"

#include <array>

namespace torusact {

std::string ManifoldType::to_string() const {
  switch (tag) {
    case Tag::S4: return "S4";
    case Tag::CP2: return "CP2";
    case Tag::S2xS2: return "S2xS2";
    case Tag::CP2sharpCP2: return "CP2#CP2";
    case Tag::CP2sharpMinusCP2: return "CP2#-CP2";
    case Tag::S5: return "S5";
    case Tag::S3xS2: return "S3xS2";
    case Tag::S3twistS2: return "S3twistS2";
    case Tag::ConnectedSumDim4: return "ConnectedSumDim4(" + std::to_string(count) + ")";
    case Tag::ProductWithCircle: return "ProductWithCircle";
    case Tag::NotSimplyConnected: return "NotSimplyConnected(" + group.to_string() + ")";
  }
  return "?";
}

std::string LensSpace::to_string() const {
  switch (kind) {
    case Kind::Sphere: return "S3";
    case Kind::S2xS1: return "S2xS1";
    case Kind::Lens: return "L(" + std::to_string(order) + ";" + std::to_string(twist) + ")";
  }
  return "?";
}

WeightedOrbitSpace dim5_weights(const Dim5Params& p) {
  const IntVector x3{checked_sub(checked_mul(p.b, p.m), checked_mul(p.c, p.k)),
                     checked_sub(checked_mul(p.d, p.m), checked_mul(p.c, p.l)), p.c};
  const IntVector x4{checked_sub(checked_neg(checked_mul(p.b, p.n)), checked_mul(p.a, p.k)),
                     checked_sub(checked_neg(checked_mul(p.d, p.n)), checked_mul(p.a, p.l)), p.a};
  return WeightedOrbitSpace(3, {{1, 0, 0}, {0, 1, 0}, x3, x4});
}

namespace {

void require_rank(const WeightedOrbitSpace& s, std::size_t rank) {
  if (s.rank() != rank)
    throw Error(ErrorKind::RankMismatch, "expected rank " + std::to_string(rank) + ", got " + std::to_string(s.rank()));
}

void require_legal(const WeightedOrbitSpace& s) {
  if (!is_legal(s).legal) throw Error(ErrorKind::IllegalOrbitSpace, s.to_string());
}

// Canonical rank-2 form x1 = e1, x2 = e2, x3 = (1, b), x4 = (c, d), d = +-1.
ManifoldType classify_four_fixed_points(const WeightedOrbitSpace& canonical) {
  const Int a = canonical.weight(2)[0], b = canonical.weight(2)[1];
  const Int c = canonical.weight(3)[0], d = canonical.weight(3)[1];
  if (a != 1 || (d != 1 && d != -1))
    throw Error(ErrorKind::IllegalOrbitSpace, "unexpected canonical form " + canonical.to_string());
  const Int bc = checked_mul(b, c);
  if (bc == 2 || bc == -2) return ManifoldType::of(ManifoldType::Tag::CP2sharpCP2);
  if (bc != 0) throw Error(ErrorKind::IllegalOrbitSpace, "unexpected canonical form " + canonical.to_string());
  const Int k = checked_add(b, c);
  return ManifoldType::of(k % 2 == 0 ? ManifoldType::Tag::S2xS2 : ManifoldType::Tag::CP2sharpMinusCP2);
}

bool in_canonical_position(const WeightedOrbitSpace& s) {
  return s.weight(0) == IntVector{1, 0, 0} && s.weight(1) == IntVector{0, 1, 0};
}

void require_canonical_position(const WeightedOrbitSpace& s) {
  require_rank(s, 3);
  if (s.size() != 4) throw Error(ErrorKind::UnsupportedWeightCount, "expected four weights");
  if (!in_canonical_position(s))
    throw Error(ErrorKind::NotCanonicalPosition, s.to_string() + " does not start with e1, e2");
}

// Solves a*k = u and c*k = v for k; at least one of a, c is non-zero.
Int solve_shear(Int a, Int u, Int c, Int v, const char* name) {
  std::optional<Int> k;
  auto take = [&](Int coeff, Int rhs) {
    if (coeff == 0) {
      if (rhs != 0) throw Error(ErrorKind::InconsistentShear, std::string(name) + ": 0 = " + std::to_string(rhs));
      return;
    }
    if (rhs % coeff != 0)
      throw Error(ErrorKind::InconsistentShear, std::string(name) + " is not integral");
    const Int value = rhs / coeff;
    if (k && *k != value) throw Error(ErrorKind::InconsistentShear, std::string(name) + " determinations disagree");
    k = value;
  };
  take(a, u);
  take(c, v);
  if (!k) throw Error(ErrorKind::InconsistentShear, std::string(name) + " is undetermined");
  return *k;
}

}  // namespace

ManifoldType classify_dim4(const WeightedOrbitSpace& s) {
  require_rank(s, 2);
  require_legal(s);
  const auto witness = simply_connected_witness(s);
  if (!witness.indices) {
    if (!witness.spans) return ManifoldType::of(ManifoldType::Tag::ProductWithCircle);
    return ManifoldType::not_simply_connected(pi1_bound(s));
  }
  switch (s.size()) {
    case 2: return ManifoldType::of(ManifoldType::Tag::S4);
    case 3: return ManifoldType::of(ManifoldType::Tag::CP2);
    case 4: {
      // The sign conventions depend on the direction of travel around the
      // disk; both directions must give the same answer.
      const ManifoldType forward = classify_four_fixed_points(canonicalize(s, true).space);
      const ManifoldType backward = classify_four_fixed_points(canonicalize(s.reversed(), true).space);
      if (!(forward == backward))
        throw Error(ErrorKind::OrientationDiscrepancy,
                    s.to_string() + ": " + forward.to_string() + " vs " + backward.to_string());
      return forward;
    }
    default: return ManifoldType::connected_sum(s.size() - 2);
  }
}

Dim5Params extract_dim5_params(const WeightedOrbitSpace& s) {
  require_canonical_position(s);
  const Int p = s.weight(2)[0], q = s.weight(2)[1], r = s.weight(2)[2];
  const Int x = s.weight(3)[0], y = s.weight(3)[1], z = s.weight(3)[2];

  const Int py_qx = checked_sub(checked_mul(p, y), checked_mul(q, x));
  const Int rx_pz = checked_sub(checked_mul(r, x), checked_mul(p, z));
  const Int qz_ry = checked_sub(checked_mul(q, z), checked_mul(r, y));
  if (gcd(r, z) != 1) throw Error(ErrorKind::GcdConditionViolated, "gcd(r,z) != 1");
  if (gcd(p, r) != 1) throw Error(ErrorKind::GcdConditionViolated, "gcd(p,r) != 1");
  if (gcd(y, z) != 1) throw Error(ErrorKind::GcdConditionViolated, "gcd(y,z) != 1");
  const std::array<Int, 3> minors{py_qx, rx_pz, qz_ry};
  if (gcd(minors) != 1) throw Error(ErrorKind::GcdConditionViolated, "gcd(py-qx,rx-pz,qz-ry) != 1");

  Dim5Params out;
  out.a = z;
  out.b = checked_neg(rx_pz);
  out.c = r;
  out.d = qz_ry;
  const auto bez = gcd_ext(out.c, out.a);  // c*n + a*m = 1
  out.n = bez.s;
  out.m = bez.t;
  // x = -bn - ak, p = bm - ck
  out.k = solve_shear(out.a, checked_sub(checked_neg(checked_mul(out.b, out.n)), x), out.c,
                      checked_sub(checked_mul(out.b, out.m), p), "k");
  // y = -dn - al, q = dm - cl
  out.l = solve_shear(out.a, checked_sub(checked_neg(checked_mul(out.d, out.n)), y), out.c,
                      checked_sub(checked_mul(out.d, out.m), q), "l");
  return out;
}

AbelianGroup pi1_dim5_exact(const WeightedOrbitSpace& s) {
  require_canonical_position(s);
  const Int g = gcd(s.weight(2)[2], s.weight(3)[2]);
  AbelianGroup out;
  if (g == 0)
    out.free_rank = 1;
  else if (g > 1)
    out.torsion.push_back(g);
  return out;
}

ManifoldType classify_dim5(const WeightedOrbitSpace& s) {
  require_rank(s, 3);
  require_legal(s);
  if (s.size() > 4)
    throw Error(ErrorKind::UnsupportedWeightCount, std::to_string(s.size()) + " weights in dimension 5");
  const auto witness = simply_connected_witness(s);
  if (!witness.spans) return ManifoldType::of(ManifoldType::Tag::ProductWithCircle);
  if (s.size() == 3) {
    const AbelianGroup g = pi1_bound(s);
    if (!g.trivial()) return ManifoldType::not_simply_connected(g);
    return ManifoldType::of(ManifoldType::Tag::S5);
  }
  const WeightedOrbitSpace canonical = canonicalize(s).space;
  const AbelianGroup g = pi1_dim5_exact(canonical);
  if (!g.trivial()) return ManifoldType::not_simply_connected(g);
  const Dim5Params p = extract_dim5_params(canonical);
  const Int sum = checked_add(checked_add(p.a, p.b), checked_add(p.c, p.d));
  return ManifoldType::of(sum % 2 != 0 ? ManifoldType::Tag::S3twistS2 : ManifoldType::Tag::S3xS2);
}

namespace {

LensSpace make_lens(Int order, Int twist) {
  LensSpace l;
  l.order = checked_abs(order);
  l.twist = twist;
  l.kind = l.order == 1 ? LensSpace::Kind::Sphere : l.order == 0 ? LensSpace::Kind::S2xS1 : LensSpace::Kind::Lens;
  return l;
}

}  // namespace

BoundaryLensSpaces boundary_lens_spaces(const WeightedOrbitSpace& s) {
  require_canonical_position(s);
  const Int p = s.weight(2)[0], q = s.weight(2)[1], r = s.weight(2)[2];
  const Int x = s.weight(3)[0], y = s.weight(3)[1], z = s.weight(3)[2];
  const auto bez = gcd_ext(y, z);  // lambda*y + mu*z = 1
  const Int lambda = bez.s, mu = bez.t;
  BoundaryLensSpaces out;
  out.l1 = make_lens(r, p);
  const Int shift = checked_mul(checked_add(checked_mul(lambda, q), checked_mul(mu, r)), x);
  out.l2 = make_lens(checked_sub(checked_mul(q, z), checked_mul(r, y)), checked_sub(p, shift));
  return out;
}

}  // namespace torusact
