#include "torusact/biquotient.hpp"

#include <exception>
#include <limits>
#include <sstream>

namespace torusact {

bool is_realizable(SupportPattern s) {
  const bool first = (s & support_of({kAlpha1, kBeta1})) != 0;
  const bool second = (s & support_of({kAlpha2, kBeta2})) != 0;
  return first && second && (s & ~0xFu) == 0;
}

std::string support_to_string(SupportPattern s) {
  static constexpr const char* names[] = {"alpha1", "beta1", "alpha2", "beta2"};
  std::string out = "{";
  bool first = true;
  for (unsigned i = 0; i < 4; ++i) {
    if (!(s & (1u << i))) continue;
    if (!first) out += ",";
    out += names[i];
    first = false;
  }
  return out + "}";
}

std::string T2ActionParams::to_string() const {
  std::ostringstream os;
  os << "(a,b,c,d,n,k,m,l)=(" << a << ',' << b << ',' << c << ',' << d << ',' << n << ',' << k << ',' << m << ','
     << l << ')';
  return os.str();
}

namespace {

IntMatrix weight_matrix(Int a, Int b, Int c, Int d, Int n, Int k, Int m, Int l) {
  return IntMatrix{
      {0, 0, checked_neg(n), a},
      {1, 0, k, b},
      {0, 0, m, c},
      {0, 1, l, d},
  };
}

std::vector<std::size_t> support_rows(SupportPattern s) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < 4; ++i)
    if (s & (1u << i)) rows.push_back(i);
  return rows;
}

constexpr std::array<SupportPattern, 9> kRealizableSupports{
    support_of({kAlpha1, kAlpha2}),
    support_of({kAlpha1, kBeta2}),
    support_of({kBeta1, kAlpha2}),
    support_of({kBeta1, kBeta2}),
    support_of({kAlpha1, kBeta1, kAlpha2}),
    support_of({kAlpha1, kBeta1, kBeta2}),
    support_of({kAlpha1, kAlpha2, kBeta2}),
    support_of({kBeta1, kAlpha2, kBeta2}),
    support_of({kAlpha1, kBeta1, kAlpha2, kBeta2}),
};

ClosedSubgroup stabilizer_unchecked(const IntMatrix& w, const SubtorusSplit& split, SupportPattern s) {
  const IntMatrix rows = w.select_rows(support_rows(s));
  const IntMatrix pe = rows * split.embedding;
  const IntMatrix pc = rows * split.complement;
  const std::size_t m = split.complement.cols();

  // c is in the stabilizer iff pc*c lies in Z^S + span_R(pe), i.e. iff
  // lambda*pc*c is integral for every lambda in the left kernel of pe.
  const auto left_kernel = integer_kernel(pe.transposed());
  ClosedSubgroup out;
  if (left_kernel.empty()) {
    out.dimension = m;
    for (std::size_t i = 0; i < m; ++i) {
      IntVector e(m, 0);
      e[i] = 1;
      out.slopes.push_back(std::move(e));
    }
    return out;
  }
  const IntMatrix q = IntMatrix::from_rows(left_kernel) * pc;
  const auto snf = smith_normal_form(q);
  const std::size_t rank = snf.rank();
  out.dimension = m - rank;
  for (std::size_t i = 0; i < rank; ++i)
    if (snf.D(i, i) > 1) out.component_orders.push_back(snf.D(i, i));
  for (auto& v : integer_kernel(q)) out.slopes.push_back(sign_normalize(std::move(v)));
  return out;
}

}  // namespace

IntMatrix torus_weight_matrix(const T2ActionParams& p) { return weight_matrix(p.a, p.b, p.c, p.d, p.n, p.k, p.m, p.l); }

IntMatrix torus_weight_matrix(const Dim5Params& p) { return weight_matrix(p.a, p.b, p.c, p.d, p.n, p.k, p.m, p.l); }

IntMatrix orbifold_weight_matrix(Int r, Int s) {
  // columns (u, w, z)
  return IntMatrix{
      {checked_neg(s), checked_neg(r), 1},
      {s, checked_add(r, 1), 1},
      {-1, 1, 0},
      {1, 1, 0},
  };
}

SubtorusSplit SubtorusSplit::with_completion(const IntMatrix& embedding) {
  const IntMatrix full = unimodular_complete(embedding.transposed()).transposed();
  std::vector<std::size_t> tail;
  for (std::size_t j = embedding.cols(); j < full.cols(); ++j) tail.push_back(j);
  return SubtorusSplit{embedding, full.select_columns(tail)};
}

SubtorusSplit SubtorusSplit::coordinates(std::size_t t, std::vector<std::size_t> embedded,
                                         std::vector<std::size_t> residual) {
  if (embedded.size() + residual.size() != t) throw Error(ErrorKind::DimensionMismatch, "coordinate split");
  const IntMatrix id = IntMatrix::identity(t);
  SubtorusSplit out{id.select_columns(embedded), id.select_columns(residual)};
  if (checked_abs(determinant(out.embedding.hconcat(out.complement))) != 1)
    throw Error(ErrorKind::DimensionMismatch, "coordinate split repeats a coordinate");
  return out;
}

Int ClosedSubgroup::order() const {
  if (dimension != 0) throw Error(ErrorKind::DimensionMismatch, "order of a positive-dimensional subgroup");
  Int o = 1;
  for (Int d : component_orders) o = checked_mul(o, d);
  return o;
}

std::string ClosedSubgroup::to_string() const {
  std::ostringstream os;
  if (dimension == 0) {
    os << (component_orders.empty() ? "trivial" : "finite");
  } else {
    os << (dimension == 1 ? "circle" : "T^" + std::to_string(dimension));
    if (dimension == 1) os << ' ' << torusact::to_string(slopes.front());
  }
  for (Int d : component_orders) os << " x Z_" << d;
  return os.str();
}

void check_free_subtorus(const IntMatrix& w, const SubtorusSplit& split) {
  if (split.embedding.rows() != w.cols() || split.complement.rows() != w.cols())
    throw Error(ErrorKind::DimensionMismatch, "split does not match the weight matrix");
  if (checked_abs(determinant(split.embedding.hconcat(split.complement))) != 1)
    throw Error(ErrorKind::NotFreeSubtorus, "embedding and complement do not form a basis");
  const std::size_t h = split.embedding.cols();
  for (SupportPattern s : kRealizableSupports) {
    const IntMatrix pe = w.select_rows(support_rows(s)) * split.embedding;
    const auto snf = smith_normal_form(pe);
    bool ok = snf.rank() == h;
    for (std::size_t i = 0; ok && i < h; ++i) ok = snf.D(i, i) == 1;
    if (!ok) throw Error(ErrorKind::NotFreeSubtorus, "non-trivial isotropy on support " + support_to_string(s));
  }
}

ClosedSubgroup induced_stabilizer(const IntMatrix& w, const SubtorusSplit& split, SupportPattern s) {
  if (!is_realizable(s)) throw Error(ErrorKind::UnrealizableSupport, support_to_string(s));
  check_free_subtorus(w, split);
  return stabilizer_unchecked(w, split, s);
}

IsotropyDiagram induced_orbit_space(const IntMatrix& w, const SubtorusSplit& split) {
  check_free_subtorus(w, split);
  const std::size_t t = w.cols();
  if (t < 3) throw Error(ErrorKind::StabilizerRankUnexpected, "ambient torus too small");
  IsotropyDiagram out;
  for (std::size_t i = 0; i < 4; ++i) {
    out.vertices[i] = stabilizer_unchecked(w, split, IsotropyDiagram::kVertices[i]);
    out.arcs[i] = stabilizer_unchecked(w, split, IsotropyDiagram::kArcs[i]);
    // Every coordinate that vanishes frees one circle of the ambient torus.
    if (out.vertices[i].dimension != t - 2 || out.arcs[i].dimension != t - 3)
      throw Error(ErrorKind::StabilizerRankUnexpected,
                  "vertex " + out.vertices[i].to_string() + ", arc " + out.arcs[i].to_string());
  }
  if (t - 3 == 1 && split.complement.cols() >= 2) {
    std::vector<IntVector> weights;
    for (const auto& arc : out.arcs) weights.push_back(arc.slopes.front());
    out.orbit_space = WeightedOrbitSpace(split.complement.cols(), std::move(weights));
  }
  return out;
}

// ---------------------------------------------------------------------------

bool is_free_circle(const CircleActionParams& p) {
  if ((p.a == 0 && p.b == 0) || (p.c == 0 && p.d == 0))
    throw Error(ErrorKind::DegenerateAction, "one quaternion factor is not acted on");
  return gcd(p.a, p.c) == 1 && gcd(p.a, p.d) == 1 && gcd(p.b, p.c) == 1 && gcd(p.b, p.d) == 1;
}

ManifoldType w2_class(const CircleActionParams& p) {
  if (!is_free_circle(p)) throw Error(ErrorKind::NotFree, "circle action is not free");
  const Int sum = checked_add(checked_add(p.a, p.b), checked_add(p.c, p.d));
  const bool odd = sum % 2 != 0;
  const int evens = (p.a % 2 == 0) + (p.b % 2 == 0) + (p.c % 2 == 0) + (p.d % 2 == 0);
  if (odd != (evens == 1)) throw Error(ErrorKind::ParityMismatch, "odd sum without a unique even entry");
  return ManifoldType::of(odd ? ManifoldType::Tag::S3twistS2 : ManifoldType::Tag::S3xS2);
}

T2Freeness is_free_t2(const T2ActionParams& p) {
  T2Freeness out;
  const Int det = checked_add(checked_mul(p.a, p.m), checked_mul(p.c, p.n));
  if (det != 1) {
    out.failing = "am+cn = " + std::to_string(det);
    return out;
  }
  const std::array<std::pair<const char*, Int>, 3> conditions{{
      {"al+dn", checked_add(checked_mul(p.a, p.l), checked_mul(p.d, p.n))},
      {"bm-ck", checked_sub(checked_mul(p.b, p.m), checked_mul(p.c, p.k))},
      {"bl-dk", checked_sub(checked_mul(p.b, p.l), checked_mul(p.d, p.k))},
  }};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& [name, value] = conditions[i];
    if (value != 1 && value != -1) {
      out.failing = std::string(name) + " = " + std::to_string(value);
      return out;
    }
    out.eps[i] = value;
  }
  out.free = true;
  return out;
}

IsotropyDiagram t2_quotient_diagram(const T2ActionParams& p) {
  return induced_orbit_space(torus_weight_matrix(p), SubtorusSplit::coordinates(4, {2, 3}, {0, 1}));
}

IsotropyDiagram circle_quotient_diagram(const Dim5Params& p) {
  return induced_orbit_space(torus_weight_matrix(p), SubtorusSplit::coordinates(4, {3}, {0, 1, 2}));
}

ManifoldType classify_t2_quotient(const T2ActionParams& p) {
  const auto freeness = is_free_t2(p);
  if (!freeness.free) throw Error(ErrorKind::NotFree, p.to_string() + ": " + freeness.failing);
  const ManifoldType type = classify_dim4(*t2_quotient_diagram(p).orbit_space);
  const Int product = freeness.eps[0] * freeness.eps[1] * freeness.eps[2];
  const bool consistent = product == -1 ? type.tag == ManifoldType::Tag::CP2sharpCP2
                                        : (type.tag == ManifoldType::Tag::S2xS2 ||
                                           type.tag == ManifoldType::Tag::CP2sharpMinusCP2);
  if (!consistent)
    throw Error(ErrorKind::EpsilonClassMismatch,
                p.to_string() + " has eps product " + std::to_string(product) + " but quotient " + type.to_string());
  return type;
}

T2ActionParams realize_dim4(const WeightedOrbitSpace& target) {
  if (target.rank() != 2) throw Error(ErrorKind::RankMismatch, "realize_dim4 needs rank 2");
  if (target.size() != 4) throw Error(ErrorKind::UnsupportedWeightCount, "realize_dim4 needs four weights");
  const ManifoldType type = classify_dim4(target);
  T2ActionParams params;
  if (type.tag == ManifoldType::Tag::CP2sharpCP2) {
    params = T2ActionParams::unifree();
  } else if (type.tag == ManifoldType::Tag::S2xS2 || type.tag == ManifoldType::Tag::CP2sharpMinusCP2) {
    const WeightedOrbitSpace canonical = canonicalize(target).space;
    // canonical x3 = (1, b), x4 = (c, d) with bc = 0
    const Int k = checked_add(canonical.weight(2)[1], canonical.weight(3)[0]);
    const Int lambda = floor_mod(k, 2);
    params = T2ActionParams::inffree((k - lambda) / 2, lambda);
  } else {
    throw Error(ErrorKind::NotRealizable, target.to_string() + " is " + type.to_string());
  }
  const auto diagram = t2_quotient_diagram(params);
  if (!diagram.orbit_space || !are_equivalent(*diagram.orbit_space, target))
    throw Error(ErrorKind::RoundTripFailed, target.to_string() + " via " + params.to_string());
  return params;
}

Dim5Params realize_dim5(const WeightedOrbitSpace& target) {
  if (target.rank() != 3) throw Error(ErrorKind::RankMismatch, "realize_dim5 needs rank 3");
  if (target.size() != 4) throw Error(ErrorKind::UnsupportedWeightCount, "realize_dim5 needs four weights");
  // Inputs already in position x1 = e1, x2 = e2 are read as given.
  const bool positioned = target.weight(0) == IntVector{1, 0, 0} && target.weight(1) == IntVector{0, 1, 0};
  const Dim5Params params = extract_dim5_params(positioned ? target : canonicalize(target).space);
  const auto diagram = circle_quotient_diagram(params);
  if (!diagram.orbit_space || !are_equivalent(*diagram.orbit_space, target))
    throw Error(ErrorKind::RoundTripFailed, target.to_string());
  return params;
}

// ---------------------------------------------------------------------------
// Extension of a free circle to a free two-torus

std::string to_string(ExtensionResult::Status s) {
  switch (s) {
    case ExtensionResult::Status::Found: return "Found";
    case ExtensionResult::Status::NecessaryConditionFails: return "NecessaryConditionFails";
    case ExtensionResult::Status::SearchExhausted: return "SearchExhausted";
  }
  return "?";
}

bool s1act_holds(const CircleActionParams& p) {
  const Int bd = checked_mul(p.b, p.d), ac = checked_mul(p.a, p.c);
  const Int ad = checked_mul(p.a, p.d), bc = checked_mul(p.b, p.c);
  for (Int s1 : {1, -1})
    for (Int s2 : {1, -1})
      for (Int s3 : {1, -1}) {
        const Int v = checked_add(checked_add(bd, checked_mul(s1, ac)),
                                  checked_add(checked_mul(s2, ad), checked_mul(s3, bc)));
        if (v == 0) return true;
      }
  return false;
}

Int default_extension_bound(const CircleActionParams& p) {
  const Int total = checked_add(checked_add(checked_abs(p.a), checked_abs(p.b)),
                                checked_add(checked_abs(p.c), checked_abs(p.d)));
  return checked_add(checked_mul(4, total), 4);
}

namespace {

// 0, 1, -1, 2, -2, ...
Int centered(Int index) { return index % 2 == 1 ? (index + 1) / 2 : -(index / 2); }

// Solutions v of coeff*v + shift = +-1, in the order +1, -1; enumerates the
// bounded window when coeff is zero.
std::vector<Int> unit_solutions(Int coeff, Int shift, Int bound) {
  std::vector<Int> out;
  if (coeff == 0) {
    if (shift == 1 || shift == -1)
      for (Int i = 0; i <= 2 * bound; ++i) out.push_back(centered(i));
    return out;
  }
  for (Int sigma : {1, -1}) {
    const Int num = checked_sub(sigma, shift);
    if (num % coeff == 0) out.push_back(num / coeff);
  }
  return out;
}

std::optional<ExtensionWitness> try_family_member(const CircleActionParams& p, Int m0, Int n0, Int x, Int bound) {
  ExtensionWitness w;
  w.x = x;
  w.m = checked_sub(m0, checked_mul(p.c, x));
  w.n = checked_add(n0, checked_mul(p.a, x));
  // a*Q + d*n = +-1 and c*P - b*m = +-1
  const auto qs = unit_solutions(p.a, checked_mul(p.d, w.n), bound);
  const auto ps = unit_solutions(p.c, checked_neg(checked_mul(p.b, w.m)), bound);
  for (Int q : qs)
    for (Int pp : ps) {
      const Int last = checked_sub(checked_mul(p.b, q), checked_mul(p.d, pp));
      if (last != 1 && last != -1) continue;
      w.p = pp;
      w.q = q;
      w.k = 0;
      w.l = 0;
      w.t2 = T2ActionParams{p.a, p.b, p.c, p.d, w.n, pp, w.m, q};
      if (!is_free_t2(w.t2).free) continue;
      return w;
    }
  return std::nullopt;
}

ExtensionResult extension_prologue(const CircleActionParams& p, std::optional<Int>& bound) {
  if (!is_free_circle(p)) throw Error(ErrorKind::NotFree, "circle action is not free");
  ExtensionResult result;
  result.bound = bound.value_or(default_extension_bound(p));
  bound = result.bound;
  result.status = s1act_holds(p) ? ExtensionResult::Status::SearchExhausted
                                 : ExtensionResult::Status::NecessaryConditionFails;
  return result;
}

}  // namespace

ExtensionResult extend_circle_to_t2_serial(const CircleActionParams& p, std::optional<Int> bound) {
  ExtensionResult result = extension_prologue(p, bound);
  if (result.status == ExtensionResult::Status::NecessaryConditionFails) return result;
  const auto bez = gcd_ext(p.c, p.a);  // a*m0 + c*n0 = 1
  for (Int i = 0; i <= 2 * result.bound; ++i) {
    if (auto w = try_family_member(p, bez.t, bez.s, centered(i), result.bound)) {
      result.status = ExtensionResult::Status::Found;
      result.witness = w;
      return result;
    }
  }
  return result;
}

ExtensionResult extend_circle_to_t2(const CircleActionParams& p, std::optional<Int> bound) {
  ExtensionResult result = extension_prologue(p, bound);
  if (result.status == ExtensionResult::Status::NecessaryConditionFails) return result;
  const auto bez = gcd_ext(p.c, p.a);
  const Int count = 2 * result.bound + 1;
  Int best = std::numeric_limits<Int>::max();
  std::optional<ExtensionWitness> found;
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
  for (Int i = 0; i < count; ++i) {
    Int current;
#pragma omp atomic read
    current = best;
    if (i > current) continue;
    try {
      auto w = try_family_member(p, bez.t, bez.s, centered(i), result.bound);
      if (!w) continue;
#pragma omp critical(torusact_extension)
      {
        if (i < best) {
          best = i;
          found = w;
        }
      }
    } catch (...) {
#pragma omp critical(torusact_extension_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  if (found) {
    result.status = ExtensionResult::Status::Found;
    result.witness = found;
  }
  return result;
}

// ---------------------------------------------------------------------------

CircleActionParams sub_circle(const T2ActionParams& base, Int p, Int q) {
  auto mix = [&](Int w_exp, Int z_exp) { return checked_add(checked_mul(p, w_exp), checked_mul(q, z_exp)); };
  return CircleActionParams{mix(checked_neg(base.n), base.a), mix(base.k, base.b), mix(base.m, base.c),
                            mix(base.l, base.d)};
}

ManifoldType circle_bundle_total_space(const T2ActionParams& base, Int p, Int q) {
  if (gcd(p, q) != 1)
    throw Error(ErrorKind::SlopesNotCoprime, "(" + std::to_string(p) + "," + std::to_string(q) + ")");
  const auto freeness = is_free_t2(base);
  if (!freeness.free) throw Error(ErrorKind::NotFree, base.to_string() + ": " + freeness.failing);
  const CircleActionParams circle = sub_circle(base, p, q);
  // A circle moving only one factor acts by a Hopf action there; the
  // quotient is S2 x S3 whenever that action is free.
  auto unit = [](Int v) { return v == 1 || v == -1; };
  if (circle.c == 0 && circle.d == 0) {
    if (!unit(circle.a) || !unit(circle.b)) throw Error(ErrorKind::NotFree, "sub-circle is not free");
    return ManifoldType::of(ManifoldType::Tag::S3xS2);
  }
  if (circle.a == 0 && circle.b == 0) {
    if (!unit(circle.c) || !unit(circle.d)) throw Error(ErrorKind::NotFree, "sub-circle is not free");
    return ManifoldType::of(ManifoldType::Tag::S3xS2);
  }
  return w2_class(circle);
}

}  // namespace torusact
