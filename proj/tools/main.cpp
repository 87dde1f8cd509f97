#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

#include "hyp/cache.hpp"
#include "hyp/cone.hpp"
#include "hyp/csv.hpp"
#include "hyp/parallel.hpp"
#include "hyp/verify.hpp"
#include "hyp/version.hpp"

using namespace hyp;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<Word> parse_words_csv(const GroupModel& gm, const std::string& text) {
  std::vector<Word> out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(gm.parse(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return out;
}

/// Measure + delta backing the cocycle commands. Tree backends default to
/// the exact Markov measure; delta_source=fit switches to the empirical
/// Patterson-Sullivan masses and the fitted exponent.
struct MeasureChoice {
  std::unique_ptr<CylinderMeasure> nu;
  double delta = 0.0;
  std::string source;
};

MeasureChoice choose_measure(const RunConfig& cfg, const SpaceModel& space,
                             std::int64_t need_depth) {
  MeasureChoice out;
  if (space.is_tree() && cfg.delta_source != "fit") {
    auto nu = std::make_unique<AnalyticTreeMeasure>(space);
    out.delta = nu->delta();
    out.nu = std::move(nu);
    out.source = "analytic";
    return out;
  }
  const std::int64_t depth = std::max(cfg.depth, need_depth);
  out.nu = std::make_unique<EmpiricalMeasure>(space,
                                              ps_measure_cached(cfg, space, depth));
  out.delta = cfg.resolve_delta(space);
  out.source = "fit";
  return out;
}

std::string boundary_str(const SpaceModel& space, const BoundaryPoint& b) {
  if (b.is_ray()) return ray_str(space.group(), b.as_ray());
  return fmt_g17(b.as_angle());
}

int run(int argc, char** argv) {
  // the config file is loaded first so that flags and HYP_* variables can
  // override it
  RunConfig cfg;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") cfg = load_config_file(argv[i + 1]);
  }

  CLI::App app{std::string(kToolName) +
               " - Patterson-Sullivan measures and Lp cocycle growth on "
               "hyperbolic group boundaries"};
  app.set_version_flag("--version", std::string(kVersion));
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (see README for the schema)");
  app.add_option("--model", cfg.model,
                 "free-group:k | free-product:n1,n2,... | schottky-demo | fuchsian-schottky")
      ->envname("HYP_MODEL");
  app.add_option("--epsilon0", cfg.epsilon0, "visual metric exponent")
      ->envname("HYP_EPSILON0");
  app.add_option("--depth", cfg.depth, "cylinder cell depth")->envname("HYP_DEPTH");
  app.add_option("--radius", cfg.radius, "enumeration radius")->envname("HYP_RADIUS");
  app.add_option("--out", cfg.out_dir, "output directory for CSV artifacts")
      ->envname("HYP_OUT");
  app.add_option("--threads", cfg.threads, "worker threads (0 = hardware)")
      ->envname("HYP_THREADS");
  app.add_option("--seed", cfg.seed, "seed for sampling commands")
      ->envname("HYP_SEED");
  app.add_option("--cache-dir", cfg.cache_dir, "measure cache directory")
      ->envname("HYP_CACHE_DIR");
  app.add_option("--cauchy-tol", cfg.cauchy_tol, "schedule Cauchy tolerance")
      ->envname("HYP_CAUCHY_TOL");
  app.add_option("--delta-source", cfg.delta_source, "auto | analytic | fit")
      ->envname("HYP_DELTA_SOURCE");

  std::string g_text = "a";
  double p_opt = 0.0;
  std::string powers_text;
  std::string gens_text;

  auto* cmd_info = app.add_subcommand("space-info", "model summary and validation");
  auto* cmd_delta = app.add_subcommand("delta", "four-point hyperbolicity defect of a ball");
  auto* cmd_growth = app.add_subcommand("growth", "sphere and ball counts");
  auto* cmd_crit = app.add_subcommand("critical-exponent", "log-linear growth fit");
  cmd_crit->add_option("--gens", gens_text, "subgroup generators (comma separated)");
  auto* cmd_ps = app.add_subcommand("ps-measure", "Patterson-Sullivan cell masses");
  auto* cmd_rn = app.add_subcommand("rn-check", "Radon-Nikodym cocycle verification");
  cmd_rn->add_option("-g", g_text, "single group element (default: all |g| <= 3)");
  auto* cmd_bm = app.add_subcommand("bm-invariance", "Bowen-Margulis invariance scan");
  auto* cmd_classify = app.add_subcommand("classify", "isometry type of a group element");
  cmd_classify->add_option("-g", g_text, "group element (reduced word)")->required();
  auto* cmd_norm = app.add_subcommand("cocycle-norm", "Lp norm of the boundary cocycle");
  cmd_norm->add_option("-g", g_text, "group element (reduced word)")->required();
  cmd_norm->add_option("-p", p_opt, "exponent p (default: max(3, ceil(2 delta/eps0)))");
  auto* cmd_grow = app.add_subcommand("growth-experiment",
                                      "norm growth along powers of a hyperbolic element");
  cmd_grow->add_option("-g", g_text, "hyperbolic element")->required();
  cmd_grow->add_option("-p", p_opt, "exponent p");
  cmd_grow->add_option("--powers", powers_text, "comma separated powers (default 1,2,4,8,16)");
  auto* cmd_lambda = app.add_subcommand("cone-lambda", "cone eigenvalue of a hyperbolic element");
  cmd_lambda->add_option("-g", g_text, "hyperbolic element")->required();
  auto* cmd_verify = app.add_subcommand("verify-all", "run the full invariant suite");

  app.require_subcommand(1);
  CLI11_PARSE(app, argc, argv);

  cfg.validate();
  const SpaceModel space = cfg.make_space();
  const GroupModel& gm = space.group();
  const std::string hash = cfg.hash();

  if (cmd_info->parsed()) {
    std::cout << "model: " << space.id() << "\n";
    std::cout << "backend: " << (space.is_tree() ? "tree (exact)" : "hyperbolic disk")
              << "\n";
    std::cout << "alphabet:";
    for (int f = 0; f < gm.factor_count(); ++f) {
      std::cout << " " << gm.letter(f);
      if (gm.order(f) != 0) std::cout << "(order " << gm.order(f) << ")";
    }
    std::cout << "\n";
    if (const auto d = analytic_delta(space))
      std::cout << "analytic critical exponent: " << fmt_g17(*d) << "\n";
    if (!space.is_tree())
      std::cout << "Schottky ping-pong: validated, max generator step "
                << fmt_g17(space.disk().max_step()) << "\n";
    std::cout << "config hash: " << hash << "\n";
    return 0;
  }

  if (cmd_delta->parsed()) {
    const auto t0 = Clock::now();
    const std::int64_t radius = std::min<std::int64_t>(cfg.radius, 6);
    const auto ball =
        space.enumerate_ball(static_cast<double>(radius), cfg.memory_budget);
    const double d4 = space.four_point_delta(ball, resolve_threads(cfg.threads));
    CsvWriter csv(cfg.out_dir + "/delta.csv", hash);
    csv.header({"model", "radius", "points", "delta", "runtime_ms"});
    csv.row({space.id(), std::to_string(radius), std::to_string(ball.size()),
             fmt_g17(d4), fmt_g17(ms_since(t0))});
    std::cout << "four-point delta = " << fmt_g17(d4) << " over " << ball.size()
              << " points\n";
    return 0;
  }

  if (cmd_growth->parsed()) {
    const BallStats st = space.ball_stats(cfg.radius);
    CsvWriter csv(cfg.out_dir + "/growth.csv", hash);
    csv.header({"radius", "sphere", "cumulative"});
    for (std::size_t r = 0; r < st.sphere.size(); ++r)
      csv.row({std::to_string(r), std::to_string(st.sphere[r]),
               std::to_string(st.cumulative[r])});
    std::cout << "N_" << cfg.radius << " = " << st.cumulative.back() << "\n";
    return 0;
  }

  if (cmd_crit->parsed()) {
    CriticalExponentEstimate ce;
    if (gens_text.empty()) {
      ce = critical_exponent(space, cfg.radius);
    } else {
      ce = critical_exponent_orbit(space, parse_words_csv(gm, gens_text), cfg.radius);
    }
    CsvWriter csv(cfg.out_dir + "/critical_exponent.csv", hash);
    csv.header({"model", "generators", "delta_hat", "analytic", "fit_min", "fit_max",
                "residual"});
    csv.row({space.id(), gens_text.empty() ? "-" : gens_text, fmt_g17(ce.delta_hat),
             ce.analytic ? fmt_g17(*ce.analytic) : "-", std::to_string(ce.fit_min),
             std::to_string(ce.fit_max), fmt_g17(ce.residual)});
    std::cout << "delta_hat = " << fmt_g17(ce.delta_hat);
    if (ce.analytic) std::cout << " (analytic " << fmt_g17(*ce.analytic) << ")";
    std::cout << ", residual " << fmt_g17(ce.residual) << "\n";
    return 0;
  }

  if (cmd_ps->parsed()) {
    const DiscreteBoundaryMeasure m = ps_measure_cached(cfg, space, cfg.depth);
    CsvWriter csv(cfg.out_dir + "/ps_measure.csv", hash);
    csv.header({"cell", "mass"});
    for (const auto& [w, mass] : m.cells) csv.row({gm.str(w), fmt_g17(mass)});
    std::cout << m.cells.size() << " cells at depth " << m.depth << ", Cauchy gap "
              << fmt_g17(m.cauchy_gap) << ", interior remainder "
              << fmt_g17(m.interior_remainder) << ", Phi " << fmt_g17(m.phi)
              << ", delta " << fmt_g17(m.delta_used)
              << (m.delta_analytic ? " (analytic)" : " (fit)") << "\n";
    return 0;
  }

  if (cmd_rn->parsed()) {
    std::vector<Word> gs;
    if (cmd_rn->count("-g")) {
      gs.push_back(gm.parse(g_text));
    } else {
      gs = space.enumerate_ball(3.0, cfg.memory_budget);
    }
    std::int64_t max_len = 0;
    for (const Word& g : gs) max_len = std::max(max_len, gm.length(g));
    const EmpiricalMeasure nu(space,
                              ps_measure_cached(cfg, space, cfg.depth + max_len));
    const double delta = cfg.resolve_delta(space);
    CsvWriter csv(cfg.out_dir + "/rn_check.csv", hash);
    csv.header({"g", "max_rel_error"});
    double worst = 0.0;
    for (const Word& g : gs) {
      const double err = rn_max_rel_error(space, nu, delta, g, cfg.depth);
      worst = std::max(worst, err);
      csv.row({gm.str(g), fmt_g17(err)});
    }
    std::cout << "max relative error " << fmt_g17(worst) << " over " << gs.size()
              << " elements at depth " << cfg.depth << "\n";
    return 0;
  }

  if (cmd_bm->parsed()) {
    const std::int64_t depth = std::min<std::int64_t>(cfg.depth, 4);
    const auto gs = space.enumerate_ball(3.0, cfg.memory_budget);
    std::int64_t max_len = 0;
    for (const Word& g : gs) max_len = std::max(max_len, gm.length(g));
    const EmpiricalMeasure nu(space, ps_measure_cached(cfg, space, depth + max_len));
    const double delta = cfg.resolve_delta(space);
    CsvWriter csv(cfg.out_dir + "/bm_invariance.csv", hash);
    csv.header({"g", "max_rel_defect"});
    double worst = 0.0;
    for (const Word& g : gs) {
      const double defect = bm_invariance_defect(space, nu, delta, g, depth);
      worst = std::max(worst, defect);
      csv.row({gm.str(g), fmt_g17(defect)});
    }
    std::cout << "max invariance defect " << fmt_g17(worst) << " at depth " << depth
              << "\n";
    return 0;
  }

  if (cmd_classify->parsed()) {
    const IsometryClass cls = classify(space, gm.parse(g_text));
    std::cout << "g = " << g_text << ": "
              << (cls.hyperbolic() ? "hyperbolic" : "elliptic")
              << ", translation length " << fmt_g17(cls.translation_length) << "\n";
    if (cls.hyperbolic()) {
      std::cout << "g+ = " << boundary_str(space, *cls.fix_attracting) << "\n";
      std::cout << "g- = " << boundary_str(space, *cls.fix_repelling) << "\n";
    }
    return 0;
  }

  if (cmd_norm->parsed()) {
    const auto t0 = Clock::now();
    const Word g = gm.parse(g_text);
    const MeasureChoice mc = choose_measure(cfg, space, gm.length(g) + 1);
    const double p = p_opt != 0.0 ? p_opt : cfg.resolve_p(mc.delta);
    const std::int64_t depth = std::max(cfg.depth, gm.length(g) + 1);
    const LpResult lp = lp_norm(space, *mc.nu, mc.delta, cfg.epsilon0, g, p, depth);
    CsvWriter csv(cfg.out_dir + "/cocycle_norm.csv", hash);
    csv.header({"g", "p", "norm_p_pow_p", "certified_error", "certified", "depth",
                "delta", "delta_source", "runtime_ms"});
    csv.row({g_text, fmt_g17(p), fmt_g17(lp.value), fmt_g17(lp.certified_error),
             lp.certified ? "1" : "0", std::to_string(depth), fmt_g17(mc.delta),
             mc.source, fmt_g17(ms_since(t0))});
    std::cout << "||beta_g||_p^p = " << fmt_g17(lp.value) << " (p = " << fmt_g17(p)
              << ", certified error " << fmt_g17(lp.certified_error) << ", "
              << (lp.certified ? "certified" : "uncertified") << ")\n";
    return 0;
  }

  if (cmd_grow->parsed()) {
    const auto t0 = Clock::now();
    const Word g = gm.parse(g_text);
    std::vector<std::int64_t> powers = cfg.powers;
    if (!powers_text.empty()) {
      powers.clear();
      std::string cur;
      for (char c : powers_text + ",") {
        if (c == ',') {
          if (!cur.empty()) powers.push_back(std::stoll(cur));
          cur.clear();
        } else {
          cur.push_back(c);
        }
      }
    }
    std::int64_t max_pow = 0;
    for (std::int64_t n : powers) max_pow = std::max(max_pow, n);
    const MeasureChoice mc = choose_measure(cfg, space, gm.length(g) * max_pow + 1);
    const double p = p_opt != 0.0 ? p_opt : cfg.resolve_p(mc.delta);
    const VisualMetricParams vm = VisualMetricParams::validated(space, cfg.epsilon0);
    const GrowthResult res =
        growth_experiment(space, *mc.nu, vm, mc.delta, g, p, powers, cfg.depth);

    CsvWriter csv(cfg.out_dir + "/growth_experiment.csv", hash);
    csv.header({"n", "norm_p_pow_p", "certified_error", "depth", "runtime_ms"});
    for (const auto& pt : res.series)
      csv.row({std::to_string(pt.n), fmt_g17(pt.value), fmt_g17(pt.certified_error),
               std::to_string(res.depth), fmt_g17(ms_since(t0))});
    if (space.is_tree()) {
      CsvWriter blocks(cfg.out_dir + "/growth_blocks.csv", hash);
      blocks.header({"n", "certified_blocks", "block_lower_bound", "k",
                     "bm_block_mass", "kf_bound"});
      for (const auto& pt : res.series)
        blocks.row({std::to_string(pt.n), std::to_string(pt.certified_blocks),
                    fmt_g17(pt.block_lower_bound), std::to_string(res.k),
                    fmt_g17(res.bm_block_mass), fmt_g17(res.kf_bound)});
    }
    std::cout << "lambda = " << fmt_g17(res.lambda) << ", slope "
              << fmt_g17(res.slope) << ", rel residual " << fmt_g17(res.rel_residual)
              << ", verdict " << res.verdict << "\n";
    return 0;
  }

  if (cmd_lambda->parsed()) {
    const Word g = gm.parse(g_text);
    const VisualMetricParams vm = VisualMetricParams::validated(space, cfg.epsilon0);
    const IsometryClass cls = classify(space, g);
    const double lam = eigenvalue_lambda(space, vm, g);
    CsvWriter csv(cfg.out_dir + "/cone_lambda.csv", hash);
    csv.header({"g", "translation_length", "lambda", "exp_eps_ell_over_2"});
    csv.row({g_text, fmt_g17(cls.translation_length), fmt_g17(lam),
             fmt_g17(std::exp(0.5 * cfg.epsilon0 * cls.translation_length))});
    std::cout << "lambda = " << fmt_g17(lam) << " (translation length "
              << fmt_g17(cls.translation_length) << ")\n";
    return 0;
  }

  if (cmd_verify->parsed()) {
    const VerifySummary summary = run_verify_all(cfg);
    for (const auto& r : summary.results)
      std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.id << " " << r.name << ": "
                << r.detail << "\n";
    std::cout << (summary.all_pass() ? "all criteria passed" : "criteria FAILED")
              << "\n";
    return summary.all_pass() ? 0 : 1;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << kToolName << ": error (" << to_string(e.kind()) << "): " << e.what()
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << kToolName << ": error: " << e.what() << "\n";
    return 2;
  }
}
