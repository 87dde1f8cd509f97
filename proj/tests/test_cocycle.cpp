#include <doctest.h>

#include "helpers.hpp"

using namespace hyp;
using hyp::testing::lp_brute_force;
using hyp::testing::random_ray;
using hyp::testing::random_word;

TEST_CASE("beta values and symmetries") {
  const SpaceModel sp = SpaceModel::free_group(2);
  const GroupModel& m = sp.group();
  const auto ray = [&](const char* u, const char* v) {
    return BoundaryPoint::ray(make_ray(m, m.parse(u), m.parse(v)));
  };

  // beta_e = 0 everywhere, beta vanishes on the diagonal
  CHECK(beta(sp, m.parse("1"), ray("1", "ab"), ray("1", "Ba")) == 0.0);
  CHECK(beta(sp, m.parse("abAB"), ray("1", "ab"), ray("1", "ab")) == 0.0);

  // g = a separates [a] from [A]
  CHECK(beta(sp, m.parse("a"), ray("1", "ab"), ray("A", "b")) == 1.0);

  Rng rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    const Word g = random_word(m, rng, static_cast<int>(rng.below(6)));
    const BoundaryRay xi = random_ray(m, rng), eta = random_ray(m, rng);
    const double b = beta(sp, g, BoundaryPoint::ray(xi), BoundaryPoint::ray(eta));
    const double br = beta(sp, g, BoundaryPoint::ray(eta), BoundaryPoint::ray(xi));
    CHECK(b == -br);                             // antisymmetry, exact
    CHECK(std::abs(b) <= sp.distance(Word(), g));  // |beta_g| <= d(p, gp)
  }
}

TEST_CASE("beta is dominated by the Lipschitz bound") {
  const SpaceModel sp = SpaceModel::free_group(2);
  const GroupModel& m = sp.group();
  const VisualMetricParams vm = VisualMetricParams::validated(sp, 1.0);
  Rng rng(53);
  for (const char* gw : {"a", "ab", "aBa"}) {
    const Word g = m.parse(gw);
    const double kappa = lipschitz_constant(sp, vm, g, m.length(g) + 2);
    for (int trial = 0; trial < 200; ++trial) {
      const BoundaryRay xi = random_ray(m, rng), eta = random_ray(m, rng);
      if (xi == eta) continue;
      const double b =
          beta(sp, g, BoundaryPoint::ray(xi), BoundaryPoint::ray(eta));
      const double d =
          dcheck(sp, vm, BoundaryPoint::ray(xi), BoundaryPoint::ray(eta));
      CHECK(std::abs(b) <= kappa * d + 1e-12);
    }
  }
}

TEST_CASE("cocycle identity is exact on trees") {
  const SpaceModel sp = SpaceModel::free_group(2);
  const GroupModel& m = sp.group();
  Rng rng(57);

  std::vector<std::pair<BoundaryPoint, BoundaryPoint>> samples;
  for (int i = 0; i < 1000; ++i)
    samples.emplace_back(BoundaryPoint::ray(random_ray(m, rng)),
                         BoundaryPoint::ray(random_ray(m, rng)));

  // h = e gives zero defect trivially
  CHECK(cocycle_identity_defect(sp, m.parse("ab"), m.parse("1"), samples) == 0.0);
  CHECK(cocycle_identity_defect(sp, m.parse("a"), m.parse("b"), samples) == 0.0);
  CHECK(cocycle_identity_defect(sp, m.parse("ab"), m.parse("ab"), samples) == 0.0);

  for (int trial = 0; trial < 40; ++trial) {
    const Word g = random_word(m, rng, 1 + static_cast<int>(rng.below(4)));
    const Word h = random_word(m, rng, 1 + static_cast<int>(rng.below(4)));
    CHECK(cocycle_identity_defect(sp, g, h, samples) == 0.0);
  }

  // free product backend, same exactness
  const SpaceModel zz = SpaceModel::free_product({2, 3});
  Rng rng2(59);
  std::vector<std::pair<BoundaryPoint, BoundaryPoint>> samples2;
  for (int i = 0; i < 300; ++i)
    samples2.emplace_back(BoundaryPoint::ray(random_ray(zz.group(), rng2)),
                          BoundaryPoint::ray(random_ray(zz.group(), rng2)));
  for (int trial = 0; trial < 20; ++trial) {
    const Word g = random_word(zz.group(), rng2, 1 + static_cast<int>(rng2.below(4)));
    const Word h = random_word(zz.group(), rng2, 1 + static_cast<int>(rng2.below(4)));
    CHECK(cocycle_identity_defect(zz, g, h, samples2) == 0.0);
  }
}

TEST_CASE("lp norm of beta_a is 3/8 for every p") {
  const SpaceModel sp = SpaceModel::free_group(2);
  const GroupModel& m = sp.group();
  const AnalyticTreeMeasure nu(sp);
  const double delta = nu.delta();

  for (const double p : {2.5, 3.0, 4.0}) {
    const LpResult r = lp_norm(sp, nu, delta, 1.0, m.parse("a"), p, 6);
    CHECK(r.value == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(r.certified);
    CHECK(r.certified_error == 0.0);
  }
  // ||beta_e||_p = 0
  CHECK(lp_norm(sp, nu, delta, 1.0, m.parse("1"), 3.0, 2).value == 0.0);
}

TEST_CASE("lp norm agrees with the brute-force cell-pair oracle") {
  const SpaceModel sp = SpaceModel::free_group(2);
  const GroupModel& m = sp.group();
  const AnalyticTreeMeasure nu(sp);
  const double delta = nu.delta();

  // the oracle accumulates ~1e6 descending terms, so it only carries about
  // eleven digits itself
  for (const char* gw : {"a", "aa", "ab", "aB", "abAB", "aaaa"}) {
    const Word g = m.parse(gw);
    for (const double p : {2.5, 3.0}) {
      const double brute = lp_brute_force(sp, nu, delta, g, p, 6);
      const LpResult fast = lp_norm(sp, nu, delta, 1.0, g, p, 6);
      CHECK(fast.value == doctest::Approx(brute).epsilon(1e-10));
    }
  }

  // depth-5 powers of a against the oracle at two depths (depth independence)
  const Word a4 = m.pow(m.parse("a"), 4);
  CHECK(lp_norm(sp, nu, delta, 1.0, a4, 3.0, 5).value ==
        doctest::Approx(lp_brute_force(sp, nu, delta, a4, 3.0, 6)).epsilon(1e-10));

  // free products with clique half-corrections, asymmetric Perron masses
  const SpaceModel zz = SpaceModel::free_product({2, 3});
  const AnalyticTreeMeasure nuz(zz);
  for (const char* gw : {"a", "b", "ab", "abb", "bab"}) {
    const Word g = zz.group().parse(gw);
    const double brute = lp_brute_force(zz, nuz, nuz.delta(), g, 3.0, 5);
    const LpResult fast = lp_norm(zz, nuz, nuz.delta(), 1.0, g, 3.0, 5);
    CHECK(fast.value == doctest::Approx(brute).epsilon(1e-10));
  }
  const SpaceModel z34 = SpaceModel::free_product({3, 4});
  const AnalyticTreeMeasure nu34(z34);
  for (const char* gw : {"ab", "abb", "aabbb"}) {
    const Word g = z34.group().parse(gw);
    const double brute = lp_brute_force(z34, nu34, nu34.delta(), g, 2.5, 4);
    const LpResult fast = lp_norm(z34, nu34, nu34.delta(), 1.0, g, 2.5, 4);
    CHECK(fast.value == doctest::Approx(brute).epsilon(1e-10));
  }
}

TEST_CASE("on F_k the norm only sees the length of g") {
  // the uniform cylinder measure only sees prefix depths, so equal-length
  // elements have equal norms
  const SpaceModel sp = SpaceModel::free_group(2);
  const GroupModel& m = sp.group();
  const AnalyticTreeMeasure nu(sp);
  Rng rng(101);
  for (int len : {2, 3, 4}) {
    const double reference =
        lp_norm(sp, nu, nu.delta(), 1.0, m.pow(m.parse("a"), len), 3.0, len + 1).value;
    for (int trial = 0; trial < 20; ++trial) {
      const Word g = random_word(m, rng, len);
      CHECK(lp_norm(sp, nu, nu.delta(), 1.0, g, 3.0, len + 1).value ==
            doctest::Approx(reference).epsilon(1e-12));
    }
  }
}

TEST_CASE("hand-derived lp values on the free group") {
  const SpaceModel sp = SpaceModel::free_group(2);
  const GroupModel& m = sp.group();
  const AnalyticTreeMeasure nu(sp);
  const double delta = nu.delta();

  // ||beta_{a^2}||_3^3 = ||beta_{ab}||_3^3 = 3/2: the class masses only see
  // depths, so equal-length elements have equal norms under the uniform
  // measure
  CHECK(lp_norm(sp, nu, delta, 1.0, m.parse("aa"), 3.0, 4).value ==
        doctest::Approx(1.5).epsilon(1e-13));
  CHECK(lp_norm(sp, nu, delta, 1.0, m.parse("ab"), 3.0, 4).value ==
        doctest::Approx(1.5).epsilon(1e-13));
  CHECK(lp_norm(sp, nu, delta, 1.0, m.pow(m.parse("a"), 4), 3.0, 5).value ==
        doctest::Approx(5.0).epsilon(1e-13));
  CHECK(lp_norm(sp, nu, delta, 1.0, m.pow(m.parse("a"), 8), 3.0, 9).value ==
        doctest::Approx(3190.0 / 243.0).epsilon(1e-13));
}

TEST_CASE("lp norm preconditions and certification") {
  const SpaceModel sp = SpaceModel::free_group(2);
  const GroupModel& m = sp.group();
  const AnalyticTreeMeasure nu(sp);
  const double delta = nu.delta();

  CHECK_THROWS_AS((void)lp_norm(sp, nu, delta, 1.0, m.parse("ab"), 3.0, 2), Error);
  CHECK_THROWS_AS((void)lp_norm(sp, nu, delta, 1.0, m.parse("a"), 0.5, 4), Error);

  // 2 delta / eps0 = 2 ln 3 = 2.197: p = 2 is computable but uncertified
  const LpResult r = lp_norm(sp, nu, delta, 1.0, m.parse("a"), 2.0, 4);
  CHECK(!r.certified);
  CHECK(r.value == doctest::Approx(0.375).epsilon(1e-14));

  // empirical measures must be deep enough to cover the whole of g
  Schedule s;
  const EmpiricalMeasure emp(sp, ps_measure(sp, s, 3, 1e-3));
  CHECK_NOTHROW((void)lp_norm(sp, emp, delta, 1.0, m.parse("ab"), 3.0, 4));
  CHECK_THROWS_AS((void)lp_norm(sp, emp, delta, 1.0, m.pow(m.parse("a"), 5), 3.0, 7),
                  Error);
}

TEST_CASE("norm bound chain") {
  const SpaceModel sp = SpaceModel::free_group(2);
  const GroupModel& m = sp.group();
  const VisualMetricParams vm = VisualMetricParams::validated(sp, 1.0);
  const AnalyticTreeMeasure nu(sp);
  const double delta = nu.delta();

  for (const char* gw : {"a", "ab", "aab"}) {
    const Word g = m.parse(gw);
    for (const double p : {2.5, 3.0, 4.0}) {
      const double bound = lp_upper_bound(sp, vm, delta, g, p, m.length(g) + 2);
      const double value = lp_norm(sp, nu, delta, 1.0, g, p, m.length(g) + 1).value;
      CHECK(value <= bound * (1.0 + 1e-12));
    }
  }
  CHECK_THROWS_AS((void)lp_upper_bound(sp, vm, delta, m.parse("a"), 2.0, 4), Error);
}
