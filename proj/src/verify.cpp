#include "hyp/verify.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "hyp/cache.hpp"
#include "hyp/cone.hpp"
#include "hyp/csv.hpp"
#include "hyp/parallel.hpp"
#include "hyp/rng.hpp"

namespace hyp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Word random_word(const GroupModel& m, Rng& rng, int len) {
  std::vector<Syllable> st;
  std::optional<Syllable> last;
  for (int i = 0; i < len; ++i) {
    const auto choices = m.allowed_steps(last);
    st.push_back(choices[rng.below(choices.size())]);
    last = st.back();
  }
  return m.from_steps(st);
}

BoundaryRay random_ray(const GroupModel& m, Rng& rng) {
  for (;;) {
    const Word u = random_word(m, rng, static_cast<int>(rng.below(5)));
    const Word v = random_word(m, rng, 1 + static_cast<int>(rng.below(4)));
    try {
      return make_ray(m, u, v);
    } catch (const Error&) {
    }
  }
}

std::string fmt(double v) { return fmt_g17(v); }

// The criteria run on pinned reference parameters; only execution knobs come
// from the user configuration.
RunConfig reference_config(const RunConfig& user, const std::string& model) {
  RunConfig ref;
  ref.model = model;
  ref.threads = user.threads;
  ref.seed = user.seed;
  ref.cache_dir = user.cache_dir;
  ref.out_dir = user.out_dir;
  return ref;
}

CriterionResult c1_tree_four_point(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  const SpaceModel f2 = SpaceModel::free_group(2);
  const auto ball = f2.enumerate_ball(6.0, RunConfig{}.memory_budget);
  const double delta = f2.four_point_delta(ball, resolve_threads(cfg.threads));
  const double elapsed = seconds_since(t0);

  CsvWriter csv(cfg.out_dir + "/fourpoint.csv", cfg.hash());
  csv.header({"model", "radius", "points", "delta"});
  csv.row({"free-group:2", "6", std::to_string(ball.size()), fmt(delta)});

  CriterionResult r{1, "tree-four-point-exact", false, ""};
  r.pass = delta == 0.0 && elapsed < 10.0;
  std::ostringstream os;
  os << "delta = " << delta << " over " << ball.size() << " points (radius 6), "
     << elapsed << " s";
  r.detail = os.str();
  return r;
}

CriterionResult c2_critical_exponents(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  const auto f2 = critical_exponent(SpaceModel::free_group(2), 12);
  const double t_f2 = seconds_since(t0);
  const auto t1 = Clock::now();
  const auto f3 = critical_exponent(SpaceModel::free_group(3), 12);
  const double t_f3 = seconds_since(t1);

  CsvWriter csv(cfg.out_dir + "/critical_exponent.csv", cfg.hash());
  csv.header({"model", "delta_hat", "target", "fit_min", "fit_max", "residual"});
  csv.row({"free-group:2", fmt(f2.delta_hat), fmt(std::log(3.0)),
           std::to_string(f2.fit_min), std::to_string(f2.fit_max), fmt(f2.residual)});
  csv.row({"free-group:3", fmt(f3.delta_hat), fmt(std::log(5.0)),
           std::to_string(f3.fit_min), std::to_string(f3.fit_max), fmt(f3.residual)});

  CriterionResult r{2, "critical-exponents", false, ""};
  const double e2 = std::abs(f2.delta_hat - std::log(3.0));
  const double e3 = std::abs(f3.delta_hat - std::log(5.0));
  r.pass = e2 <= 1e-2 && e3 <= 1e-2 && t_f2 < 60.0 && t_f3 < 60.0;
  std::ostringstream os;
  os << "F2: " << f2.delta_hat << " (err " << e2 << "), F3: " << f3.delta_hat
     << " (err " << e3 << ")";
  r.detail = os.str();
  return r;
}

CriterionResult c3_ps_convergence(const RunConfig& cfg,
                                  const DiscreteBoundaryMeasure& ps9,
                                  const SpaceModel& f2) {
  const GroupModel& gm = f2.group();

  double worst1 = 0.0, worst2 = 0.0;
  {
    CsvWriter csv(cfg.out_dir + "/ps_depth1.csv", cfg.hash());
    csv.header({"cell", "mass"});
    for (const Word& w : f2.cells_at_depth(1)) {
      const double mass = ps9.cylinder_mass(gm, w);
      worst1 = std::max(worst1, std::abs(mass - 0.25));
      csv.row({gm.str(w), fmt(mass)});
    }
  }
  {
    CsvWriter csv(cfg.out_dir + "/ps_depth2.csv", cfg.hash());
    csv.header({"cell", "mass"});
    for (const Word& w : f2.cells_at_depth(2)) {
      const double mass = ps9.cylinder_mass(gm, w);
      worst2 = std::max(worst2, std::abs(mass - 1.0 / 12.0));
      csv.row({gm.str(w), fmt(mass)});
    }
  }
  const double defect = ps9.refinement_defect(f2);

  CriterionResult r{3, "ps-convergence", false, ""};
  r.pass = worst1 <= 1e-3 && worst2 <= 1e-3 && defect < 1e-6;
  std::ostringstream os;
  os << "depth-1 max |mass - 1/4| = " << worst1 << ", depth-2 max |mass - 1/12| = "
     << worst2 << ", refinement defect = " << defect << ", Cauchy gap = "
     << ps9.cauchy_gap;
  r.detail = os.str();
  return r;
}

CriterionResult c4_radon_nikodym(const RunConfig& cfg, const EmpiricalMeasure& nu9,
                                 const SpaceModel& f2) {
  const GroupModel& gm = f2.group();
  const double delta = std::log(3.0);

  CsvWriter csv(cfg.out_dir + "/rn_check.csv", cfg.hash());
  csv.header({"g", "max_rel_error"});
  double worst = 0.0;
  for (const Word& g : f2.enumerate_ball(3.0, RunConfig{}.memory_budget)) {
    const double err = rn_max_rel_error(f2, nu9, delta, g, 6);
    worst = std::max(worst, err);
    csv.row({gm.str(g), fmt(err)});
  }

  // the two cited cell ratios hit exactly with analytic masses
  const AnalyticTreeMeasure exact(f2);
  const double ratio_in =
      exact.cylinder_mass(gm.parse("aaa")) / exact.cylinder_mass(gm.parse("aa"));
  const double ratio_out =
      exact.cylinder_mass(gm.parse("b")) / exact.cylinder_mass(gm.parse("Ab"));
  const double exact_err = std::max(std::abs(ratio_in * 3.0 - 1.0),
                                    std::abs(ratio_out / 3.0 - 1.0));

  CriterionResult r{4, "radon-nikodym", false, ""};
  r.pass = worst <= 1e-3 && exact_err <= 1e-12;
  std::ostringstream os;
  os << "max relative error " << worst << " over |g| <= 3 at depth 6; "
     << "analytic cell ratios off by " << exact_err;
  r.detail = os.str();
  return r;
}

CriterionResult c5_bm_invariance(const RunConfig& cfg, const EmpiricalMeasure& nu9,
                                 const SpaceModel& f2) {
  const GroupModel& gm = f2.group();
  const double delta = std::log(3.0);

  CsvWriter csv(cfg.out_dir + "/bm_invariance.csv", cfg.hash());
  csv.header({"g", "max_rel_defect"});
  double worst = 0.0;
  for (const Word& g : f2.enumerate_ball(3.0, RunConfig{}.memory_budget)) {
    const double defect = bm_invariance_defect(f2, nu9, delta, g, 4);
    worst = std::max(worst, defect);
    csv.row({gm.str(g), fmt(defect)});
  }

  CriterionResult r{5, "bm-invariance", false, ""};
  r.pass = worst <= 1e-6;
  std::ostringstream os;
  os << "max invariance defect " << worst << " over depth-4 pairs, |g| <= 3";
  r.detail = os.str();
  return r;
}

CriterionResult c6_moebius(const RunConfig& cfg, const SpaceModel& f2) {
  const GroupModel& gm = f2.group();
  const VisualMetricParams vm = VisualMetricParams::validated(f2, 1.0);
  Rng rng(cfg.seed + 6);

  std::int64_t identity_checks = 0, cross_checks = 0;
  bool all_ok = true;
  CsvWriter csv(cfg.out_dir + "/moebius.csv", cfg.hash());
  csv.header({"g", "identity_samples", "cross_ratio_samples", "exact"});

  for (const Word& g : f2.enumerate_ball(4.0, RunConfig{}.memory_budget)) {
    std::int64_t done_id = 0, done_cr = 0;
    bool ok = true;
    while (done_id < 1000) {
      const BoundaryRay xi = random_ray(gm, rng), eta = random_ray(gm, rng);
      if (xi == eta) continue;
      ok = ok && moebius_identity_check(f2, vm, g, BoundaryPoint::ray(xi),
                                        BoundaryPoint::ray(eta));
      ++done_id;
    }
    while (done_cr < 1000) {
      const BoundaryRay z1 = random_ray(gm, rng), z2 = random_ray(gm, rng);
      const BoundaryRay z3 = random_ray(gm, rng), z4 = random_ray(gm, rng);
      if (z1 == z2 || z1 == z3 || z1 == z4 || z2 == z3 || z2 == z4 || z3 == z4)
        continue;
      // cross-ratio invariance in exact exponent arithmetic
      const auto expo = [&](const BoundaryRay& a, const BoundaryRay& b,
                            const BoundaryRay& c, const BoundaryRay& d) {
        return ext_gromov2(gm, a, c) + ext_gromov2(gm, b, d) -
               ext_gromov2(gm, a, d) - ext_gromov2(gm, b, c);
      };
      const std::int64_t before = expo(z1, z2, z3, z4);
      const std::int64_t after =
          expo(translate(gm, g, z1), translate(gm, g, z2), translate(gm, g, z3),
               translate(gm, g, z4));
      ok = ok && before == after;
      ++done_cr;
    }
    identity_checks += done_id;
    cross_checks += done_cr;
    all_ok = all_ok && ok;
    csv.row({gm.str(g), std::to_string(done_id), std::to_string(done_cr),
             ok ? "1" : "0"});
  }

  CriterionResult r{6, "moebius-structure", all_ok, ""};
  std::ostringstream os;
  os << identity_checks << " identity and " << cross_checks
     << " cross-ratio samples across |g| <= 4, all exact: " << (all_ok ? "yes" : "no");
  r.detail = os.str();
  return r;
}

CriterionResult c7_cocycle(const RunConfig& cfg, const SpaceModel& f2) {
  const GroupModel& gm = f2.group();
  const VisualMetricParams vm = VisualMetricParams::validated(f2, 1.0);
  const AnalyticTreeMeasure nu(f2);
  const double delta = nu.delta();
  Rng rng(cfg.seed + 7);

  // identity defect over 1000 random (g, h, xi, eta) with |g|, |h| <= 4
  double worst_defect = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Word g = random_word(gm, rng, static_cast<int>(rng.below(5)));
    const Word h = random_word(gm, rng, static_cast<int>(rng.below(5)));
    const std::vector<std::pair<BoundaryPoint, BoundaryPoint>> sample{
        {BoundaryPoint::ray(random_ray(gm, rng)),
         BoundaryPoint::ray(random_ray(gm, rng))}};
    worst_defect = std::max(worst_defect, cocycle_identity_defect(f2, g, h, sample));
  }

  // ||beta_a||_p^p = 3/8 and the norm bound chain
  CsvWriter csv(cfg.out_dir + "/cocycle_norms.csv", cfg.hash());
  csv.header({"g", "p", "norm_p_pow_p", "certified_error", "upper_bound"});
  double worst_norm_err = 0.0;
  bool bound_ok = true;
  for (const double p : {2.5, 3.0, 4.0}) {
    const LpResult lp = lp_norm(f2, nu, delta, vm.epsilon0, gm.parse("a"), p, 6);
    worst_norm_err = std::max(worst_norm_err, std::abs(lp.value - 0.375));
    const double bound = lp_upper_bound(f2, vm, delta, gm.parse("a"), p, 4);
    bound_ok = bound_ok && lp.value <= bound * (1.0 + 1e-12);
    csv.row({"a", fmt(p), fmt(lp.value), fmt(lp.certified_error), fmt(bound)});
  }
  for (const char* gw : {"ab", "aBa"}) {
    for (const double p : {3.0, 4.0}) {
      const Word g = gm.parse(gw);
      const LpResult lp = lp_norm(f2, nu, delta, vm.epsilon0, g, p, gm.length(g) + 1);
      const double bound = lp_upper_bound(f2, vm, delta, g, p, gm.length(g) + 2);
      bound_ok = bound_ok && lp.value <= bound * (1.0 + 1e-12);
      csv.row({gw, fmt(p), fmt(lp.value), fmt(lp.certified_error), fmt(bound)});
    }
  }

  CriterionResult r{7, "cocycle-values", false, ""};
  r.pass = worst_defect == 0.0 && worst_norm_err <= 1e-12 && bound_ok;
  std::ostringstream os;
  os << "identity defect " << worst_defect << ", max |norm - 3/8| = "
     << worst_norm_err << ", bound chain " << (bound_ok ? "holds" : "violated");
  r.detail = os.str();
  return r;
}

CriterionResult c8_cone(const RunConfig& cfg, const SpaceModel& f2) {
  const GroupModel& gm = f2.group();
  const VisualMetricParams vm = VisualMetricParams::validated(f2, 1.0);
  Rng rng(cfg.seed + 8);

  bool invariance_ok = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const Word g = random_word(gm, rng, static_cast<int>(rng.below(5)));
    invariance_ok = invariance_ok &&
                    bullet_invariance_exact(f2, g,
                                            BoundaryPoint::ray(random_ray(gm, rng)),
                                            BoundaryPoint::ray(random_ray(gm, rng)));
  }

  const double lam_a = eigenvalue_lambda(f2, vm, gm.parse("a"));
  const double lam_err = std::abs(lam_a - std::exp(0.5));

  CsvWriter csv(cfg.out_dir + "/cone_lambda.csv", cfg.hash());
  csv.header({"g", "translation_length", "lambda"});
  bool all_expanding = true;
  for (const Word& g : f2.enumerate_ball(4.0, RunConfig{}.memory_budget)) {
    const IsometryClass cls = classify(f2, g);
    if (!cls.hyperbolic()) continue;
    const double lam = eigenvalue_lambda(f2, vm, g);
    all_expanding = all_expanding && lam > 1.0;
    csv.row({gm.str(g), fmt(cls.translation_length), fmt(lam)});
  }

  // A_n = g^n A_0 as exact regions, plus the straddle flags at depth 4
  bool an_ok = true;
  for (const char* gw : {"a", "ab"}) {
    const Word g = gm.parse(gw);
    for (const std::int64_t n : {-2, -1, 0, 1, 2, 3}) {
      std::vector<Word> translated;
      for (const Word& w : a_n_cover(f2, g, n - 1)) translated.push_back(gm.mul(g, w));
      an_ok = an_ok && region_normal_form(f2, translated) == a_n_cover(f2, g, n);
    }
  }
  const AnPartition part = a_n_partition(f2, vm, gm.parse("a"), 4);
  an_ok = an_ok && part.flagged.size() == 2 &&
          gm.str(part.flagged[0]) == "aaaa" && gm.str(part.flagged[1]) == "AAAA";

  CriterionResult r{8, "cone-model", false, ""};
  r.pass = invariance_ok && lam_err <= 1e-12 && all_expanding && an_ok;
  std::ostringstream os;
  os << "iota invariance " << (invariance_ok ? "exact" : "violated")
     << ", |lambda(a) - e^(1/2)| = " << lam_err << ", all sampled lambda > 1: "
     << (all_expanding ? "yes" : "no") << ", A_n equivariance "
     << (an_ok ? "exact" : "violated");
  r.detail = os.str();
  return r;
}

CriterionResult c9_growth(const RunConfig& cfg, const SpaceModel& f2) {
  const auto t0 = Clock::now();
  const GroupModel& gm = f2.group();
  const VisualMetricParams vm = VisualMetricParams::validated(f2, 1.0);
  const AnalyticTreeMeasure nu(f2);

  const GrowthResult res = growth_experiment(f2, nu, vm, nu.delta(), gm.parse("a"),
                                             3.0, {1, 2, 4, 8, 16}, 8);
  const double elapsed = seconds_since(t0);

  CsvWriter csv(cfg.out_dir + "/growth_experiment.csv", cfg.hash());
  csv.header({"n", "norm_p_pow_p", "certified_error", "depth", "certified_blocks",
              "block_lower_bound"});
  for (const auto& pt : res.series)
    csv.row({std::to_string(pt.n), fmt(pt.value), fmt(pt.certified_error),
             std::to_string(res.depth), std::to_string(pt.certified_blocks),
             fmt(pt.block_lower_bound)});

  bool increasing = true;
  for (std::size_t i = 1; i < res.series.size(); ++i)
    increasing = increasing && res.series[i].value > res.series[i - 1].value;
  const bool tenfold = res.series.back().value >= 10.0 * res.series.front().value;

  CriterionResult r{9, "growth-unbounded", false, ""};
  r.pass = increasing && tenfold && res.slope > 0.0 && res.rel_residual < 0.10 &&
           res.verdict == "unbounded-consistent" && elapsed < 300.0;
  std::ostringstream os;
  os << "series";
  for (const auto& pt : res.series) os << " " << pt.value;
  os << "; slope " << res.slope << ", rel residual " << res.rel_residual
     << ", verdict " << res.verdict << ", " << elapsed << " s";
  r.detail = os.str();
  return r;
}

}  // namespace

VerifySummary run_verify_all(const RunConfig& cfg) {
  VerifySummary summary;
  const SpaceModel f2 = SpaceModel::free_group(2);
  const RunConfig ref = reference_config(cfg, "free-group:2");

  summary.results.push_back(c1_tree_four_point(ref));
  summary.results.push_back(c2_critical_exponents(ref));

  const DiscreteBoundaryMeasure ps9 = ps_measure_cached(ref, f2, 9);
  const EmpiricalMeasure nu9(f2, ps9);

  summary.results.push_back(c3_ps_convergence(ref, ps9, f2));
  summary.results.push_back(c4_radon_nikodym(ref, nu9, f2));
  summary.results.push_back(c5_bm_invariance(ref, nu9, f2));
  summary.results.push_back(c6_moebius(ref, f2));
  summary.results.push_back(c7_cocycle(ref, f2));
  summary.results.push_back(c8_cone(ref, f2));
  summary.results.push_back(c9_growth(ref, f2));
  return summary;
}

}  // namespace hyp
