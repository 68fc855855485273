#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "torusact/biquotient.hpp"

using namespace torusact;
using Tag = ManifoldType::Tag;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::ParseError;
}

const SubtorusSplit kT2Split = SubtorusSplit::coordinates(4, {2, 3}, {0, 1});
const SubtorusSplit kCircleSplit = SubtorusSplit::coordinates(4, {3}, {0, 1, 2});

std::vector<SupportPattern> realizable_patterns() {
  std::vector<SupportPattern> out;
  for (unsigned s = 0; s < 16; ++s)
    if (is_realizable(static_cast<SupportPattern>(s))) out.push_back(static_cast<SupportPattern>(s));
  return out;
}

}  // namespace

TEST_CASE("support patterns") {
  CHECK(realizable_patterns().size() == 9);
  CHECK_FALSE(is_realizable(support_of({kAlpha1, kBeta1})));
  CHECK(is_realizable(support_of({kBeta1, kAlpha2})));
}

TEST_CASE("free circle actions") {
  CHECK(is_free_circle({1, 1, 1, 1}));
  CHECK(is_free_circle({-1, 3, 16, 5}));
  CHECK_FALSE(is_free_circle({2, 3, 4, 5}));
  CHECK(kind_of([] { is_free_circle({0, 0, 1, 1}); }) == ErrorKind::DegenerateAction);

  CHECK(w2_class({1, 1, 1, 1}).tag == Tag::S3xS2);
  CHECK(w2_class({-1, 3, 16, 5}).tag == Tag::S3twistS2);
  CHECK(w2_class({1, -1, 1, 0}).tag == Tag::S3twistS2);
  CHECK(kind_of([] { w2_class({2, 3, 4, 5}); }) == ErrorKind::NotFree);

  for (Int a = -5; a <= 5; ++a)
    for (Int b = -5; b <= 5; ++b)
      for (Int c = -5; c <= 5; ++c)
        for (Int d = -5; d <= 5; ++d) {
          if ((a == 0 && b == 0) || (c == 0 && d == 0)) continue;
          const CircleActionParams p{a, b, c, d};
          if (!is_free_circle(p)) continue;
          const int evens = (a % 2 == 0) + (b % 2 == 0) + (c % 2 == 0) + (d % 2 == 0);
          CHECK((w2_class(p).tag == Tag::S3twistS2) == (evens == 1));
        }
}

TEST_CASE("free two-torus actions") {
  for (Int r = -3; r <= 3; ++r)
    for (Int lambda : {0, 1}) {
      const auto f = is_free_t2(T2ActionParams::inffree(r, lambda));
      CHECK(f.free);
      CHECK(f.eps == std::array<Int, 3>{1, 1, 1});
    }
  const auto uni = is_free_t2(T2ActionParams::unifree());
  CHECK(uni.free);
  CHECK(uni.eps == std::array<Int, 3>{1, 1, -1});
  const auto bad = is_free_t2({1, 1, 0, 3, 0, 1, 1, 1});
  CHECK_FALSE(bad.free);
  CHECK_FALSE(bad.failing.empty());
}

TEST_CASE("quotients of free two-torus actions") {
  CHECK(classify_t2_quotient(T2ActionParams::inffree(0, 0)).tag == Tag::S2xS2);
  CHECK(classify_t2_quotient(T2ActionParams::inffree(1, 1)).tag == Tag::CP2sharpMinusCP2);
  CHECK(classify_t2_quotient(T2ActionParams::unifree()).tag == Tag::CP2sharpCP2);
  CHECK(kind_of([] { classify_t2_quotient({1, 1, 0, 3, 0, 1, 1, 1}); }) == ErrorKind::NotFree);
}

TEST_CASE("quotient type follows the sign trichotomy") {
  std::size_t free_count = 0;
  const Int bound = 3;
  for (Int a = -bound; a <= bound; ++a)
    for (Int c = -bound; c <= bound; ++c)
      for (Int m = -bound; m <= bound; ++m)
        for (Int n = -bound; n <= bound; ++n) {
          if (a * m + c * n != 1) continue;
          for (Int b = -bound; b <= bound; ++b)
            for (Int d = -bound; d <= bound; ++d)
              for (Int k = -bound; k <= bound; ++k)
                for (Int l = -bound; l <= bound; ++l) {
                  const Int e2 = a * l + d * n, e3 = b * m - c * k, e4 = b * l - d * k;
                  if (std::abs(e2) != 1 || std::abs(e3) != 1 || std::abs(e4) != 1) continue;
                  ++free_count;
                  const T2ActionParams p{a, b, c, d, n, k, m, l};
                  const auto type = classify_t2_quotient(p).tag;
                  if (e2 * e3 * e4 == -1) CHECK(type == Tag::CP2sharpCP2);
                  else CHECK((type == Tag::S2xS2 || type == Tag::CP2sharpMinusCP2));
                }
        }
  CHECK(free_count > 100);
}

TEST_CASE("induced stabilizers") {
  for (Int r = -4; r <= 4; ++r)
    for (Int lambda : {0, 1}) {
      const auto w = torus_weight_matrix(T2ActionParams::inffree(r, lambda));
      const auto g = induced_stabilizer(w, kT2Split, support_of({kAlpha1, kBeta1, kBeta2}));
      CHECK(g.dimension == 1);
      CHECK(g.component_orders.empty());
      REQUIRE(g.slopes.size() == 1);
      CHECK(g.slopes[0] == normalize_weight({2 * r + lambda, 1}));
      CHECK(induced_stabilizer(w, kT2Split, 0xF).trivial());
    }
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto p = oracle::random_dim5(rng, 5);
    const auto w = torus_weight_matrix(p);
    const auto g = induced_stabilizer(w, kCircleSplit, support_of({kBeta1, kAlpha2, kBeta2}));
    REQUIRE(g.slopes.size() == 1);
    CHECK(g.slopes[0] == normalize_weight({p.b * p.m - p.c * p.k, p.d * p.m - p.c * p.l, p.c}));
    CHECK(induced_stabilizer(w, kCircleSplit, 0xF).trivial());
  }
  const auto w = torus_weight_matrix(T2ActionParams::inffree(0, 0));
  CHECK(kind_of([&] { induced_stabilizer(w, kT2Split, support_of({kAlpha1, kBeta1})); }) ==
        ErrorKind::UnrealizableSupport);
  CHECK_THROWS_AS(induced_stabilizer(torus_weight_matrix(Dim5Params{2, 3, 4, 5, 0, 0, 0, 0}), kCircleSplit, 0xF),
                  Error);
}

TEST_CASE("stabilizer orders agree with sampling") {
  std::mt19937_64 rng(12);
  std::vector<std::pair<IntMatrix, SubtorusSplit>> cases;
  for (Int r : {-2, 0, 3})
    for (Int lambda : {0, 1}) cases.emplace_back(torus_weight_matrix(T2ActionParams::inffree(r, lambda)), kT2Split);
  cases.emplace_back(torus_weight_matrix(T2ActionParams::unifree()), kT2Split);
  for (int i = 0; i < 4; ++i) cases.emplace_back(torus_weight_matrix(oracle::random_dim5(rng, 4)), kCircleSplit);
  for (Int r : {1, -2})
    cases.emplace_back(orbifold_weight_matrix(r, 1), SubtorusSplit::coordinates(3, {1, 2}, {0}));
  for (const auto& [w, split] : cases)
    for (SupportPattern s : realizable_patterns()) {
      const auto g = induced_stabilizer(w, split, s);
      CHECK(oracle::sampled_stabilizer_count(w, split, s, 12) == oracle::predicted_torsion_count(g, 12));
    }
}

TEST_CASE("induced diagrams match the closed forms") {
  for (Int r = -10; r <= 10; ++r)
    for (Int lambda : {0, 1}) {
      const auto d = t2_quotient_diagram(T2ActionParams::inffree(r, lambda));
      REQUIRE(d.orbit_space.has_value());
      CHECK(*d.orbit_space == oracle::dim4_figure(r, lambda));
      for (const auto& v : d.vertices) CHECK(v.dimension == 2);
    }
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const auto p = oracle::random_dim5(rng, 6);
    const auto d = circle_quotient_diagram(p);
    REQUIRE(d.orbit_space.has_value());
    CHECK(*d.orbit_space == oracle::dim5_figure(p));
    for (const auto& v : d.vertices) CHECK(v.dimension == 2);
  }
}

TEST_CASE("residual circle on the orbifold quotients") {
  for (Int r = -3; r <= 3; ++r)
    for (Int s = -3; s <= 3; ++s) {
      const auto w = orbifold_weight_matrix(r, s);
      for (const auto& split : {SubtorusSplit::coordinates(3, {1, 2}, {0}), SubtorusSplit::coordinates(3, {0, 2}, {1})}) {
        const auto d = induced_orbit_space(w, split);
        CHECK_FALSE(d.orbit_space.has_value());
        CHECK(d.arcs[0].order() == 2);
        CHECK(d.arcs[1].order() == std::abs(2 * (r + s) + 1));
        CHECK(d.arcs[2].order() == 2);
        CHECK(d.arcs[3].order() == std::abs(2 * (r - s) + 1));
        for (const auto& v : d.vertices) CHECK(v.dimension == 1);
      }
    }
}

TEST_CASE("realization") {
  const auto r2 = realize_dim4(WeightedOrbitSpace(2, {{1, 0}, {0, 1}, {1, 0}, {4, 1}}));
  CHECK(r2 == T2ActionParams::inffree(2, 0));
  CHECK(realize_dim4(WeightedOrbitSpace(2, {{1, 0}, {0, 1}, {1, 0}, {3, 1}})) == T2ActionParams::inffree(1, 1));
  CHECK(realize_dim4(WeightedOrbitSpace(2, {{1, 0}, {0, 1}, {1, 1}, {2, 1}})) == T2ActionParams::unifree());
  CHECK(kind_of([] { realize_dim4(WeightedOrbitSpace(2, {{1, 0}, {0, 1}, {1, 0}, {0, 1}, {1, 1}})); }) ==
        ErrorKind::UnsupportedWeightCount);

  const WeightedOrbitSpace a(3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 2}, {1, 1, 3}});
  CHECK(realize_dim5(a) == Dim5Params{3, 1, 2, 1, 0, 0, 1, -1});
  const WeightedOrbitSpace b(3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 1}, {0, 0, 1}});
  CHECK(realize_dim5(b) == Dim5Params{1, 1, 1, 1, 0, 0, 1, 0});

  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    const auto target = oracle::random_move(rng, oracle::dim5_figure(oracle::random_dim5(rng, 5)));
    const auto p = realize_dim5(target);
    CHECK(oracle::equivalent(*circle_quotient_diagram(p).orbit_space, target) == true);
  }
}

TEST_CASE("circle extension") {
  const auto none = extend_circle_to_t2({-1, 3, 16, 5});
  CHECK(none.status == ExtensionResult::Status::NecessaryConditionFails);
  CHECK_FALSE(s1act_holds({-1, 3, 16, 5}));

  const auto found = extend_circle_to_t2({1, 1, 1, 1});
  REQUIRE(found.status == ExtensionResult::Status::Found);
  const auto& w = *found.witness;
  CHECK(w.m == 1);
  CHECK(w.n == 0);
  CHECK(w.q + w.l == 1);
  CHECK(w.p + w.k == 2);
  CHECK(is_free_t2(w.t2).free);

  // (c, d) = (0, 0) leaves the second factor untouched
  CHECK(kind_of([] { extend_circle_to_t2({1, 1, 0, 0}); }) == ErrorKind::DegenerateAction);
  CHECK(kind_of([] { extend_circle_to_t2({2, 3, 4, 5}); }) == ErrorKind::NotFree);
  CHECK(default_extension_bound({1, -2, 3, 4}) == 44);

  for (Int a = -3; a <= 3; ++a)
    for (Int b = -3; b <= 3; ++b)
      for (Int c = -3; c <= 3; ++c)
        for (Int d = -3; d <= 3; ++d) {
          if ((a == 0 && b == 0) || (c == 0 && d == 0)) continue;
          const CircleActionParams p{a, b, c, d};
          if (!is_free_circle(p)) continue;
          const auto par = extend_circle_to_t2(p, 12);
          const auto ser = extend_circle_to_t2_serial(p, 12);
          CHECK(par.status == ser.status);
          if (par.status == ExtensionResult::Status::NecessaryConditionFails) CHECK_FALSE(s1act_holds(p));
          if (par.status != ExtensionResult::Status::Found) continue;
          CHECK(par.witness->x == ser.witness->x);
          CHECK(par.witness->t2 == ser.witness->t2);
          const auto& t = par.witness->t2;
          CHECK(is_free_t2(t).free);
          CHECK(t.a == a);
          CHECK(t.b == b);
          CHECK(t.c == c);
          CHECK(t.d == d);
        }
}

TEST_CASE("principal circle bundles") {
  CHECK(sub_circle(T2ActionParams::inffree(2, 1), 3, 5) == CircleActionParams{5 - 3 * 2, 5 + 3 * 3, 3, 3});
  for (Int r = -2; r <= 2; ++r) {
    CHECK(circle_bundle_total_space(T2ActionParams::inffree(r, 0), 2, 3).tag == Tag::S3xS2);
    CHECK(circle_bundle_total_space(T2ActionParams::inffree(r, 1), 1, 0).tag == Tag::S3twistS2);
  }
  CHECK(circle_bundle_total_space(T2ActionParams::unifree(), 1, 1).tag == Tag::S3xS2);
  CHECK(kind_of([] { circle_bundle_total_space(T2ActionParams::unifree(), 2, 4); }) == ErrorKind::SlopesNotCoprime);
  CHECK(kind_of([] { circle_bundle_total_space({1, 1, 0, 3, 0, 1, 1, 1}, 1, 1); }) == ErrorKind::NotFree);
}
