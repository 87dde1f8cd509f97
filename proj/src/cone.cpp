#include "hyp/cone.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "hyp/boundary_point.hpp"

namespace hyp {

double iota(const SpaceModel& space, const VisualMetricParams& vm,
            const ConePoint& x, const ConePoint& y) {
  if (x.t <= 0 || y.t <= 0)
    throw Error(ErrorKind::DegenerateInput, "cone scales must be positive");
  return x.t * y.t * dcheck(space, vm, x.xi, y.xi);
}

std::int64_t bullet_scale_exp(const SpaceModel& space, const Word& g,
                              const BoundaryPoint& xi) {
  const BoundaryPoint gxi = boundary_act(space, g, xi);
  const std::int64_t p2 = ext_product2(space, ProductArg(gxi), ProductArg(g), Word());
  return p2 - static_cast<std::int64_t>(space.distance(Word(), g));
}

double bullet_scale(const SpaceModel& space, const VisualMetricParams& vm,
                    const Word& g, const BoundaryPoint& xi) {
  if (space.is_tree())
    return std::exp(0.5 * vm.epsilon0 *
                    static_cast<double>(bullet_scale_exp(space, g, xi)));
  return 1.0 / std::sqrt(metric_derivative(space, vm, g, xi));
}

ConePoint bullet(const SpaceModel& space, const VisualMetricParams& vm,
                 const Word& g, const ConePoint& x) {
  return ConePoint{boundary_act(space, g, x.xi),
                   bullet_scale(space, vm, g, x.xi) * x.t};
}

bool bullet_invariance_exact(const SpaceModel& space, const Word& g,
                             const BoundaryPoint& xi, const BoundaryPoint& eta) {
  if (xi == eta) return true;  // both sides are zero
  const BoundaryPoint gxi = boundary_act(space, g, xi);
  const BoundaryPoint geta = boundary_act(space, g, eta);
  const Word base;
  // log iota(g.x, g.y) - log iota(x, y), in units of eps0/2:
  //   E(xi) + E(eta) - [2(g xi, g eta) - 2(xi, eta)]
  const std::int64_t lhs = bullet_scale_exp(space, g, xi) +
                           bullet_scale_exp(space, g, eta);
  const std::int64_t rhs =
      ext_product2(space, ProductArg(gxi), ProductArg(geta), base) -
      ext_product2(space, ProductArg(xi), ProductArg(eta), base);
  return lhs == rhs;
}

double eigenvalue_lambda(const SpaceModel& space, const VisualMetricParams& vm,
                         const Word& g) {
  const IsometryClass cls = classify(space, g);
  if (!cls.hyperbolic())
    throw Error(ErrorKind::Classification,
                "eigenvalue of the cone action needs a hyperbolic element");
  return bullet_scale(space, vm, g, *cls.fix_attracting);
}

LengthFunction LengthFunction::canonical() { return LengthFunction(); }

LengthFunction LengthFunction::axis(const SpaceModel& space, const Word& g) {
  const IsometryClass cls = classify(space, g);
  if (!cls.hyperbolic())
    throw Error(ErrorKind::Classification, "axis length function needs a hyperbolic element");
  LengthFunction f;
  f.axis_.emplace(g, *cls.fix_attracting, *cls.fix_repelling);
  return f;
}

double LengthFunction::value(const SpaceModel& space, const VisualMetricParams& vm,
                             const BoundaryPoint& xi) const {
  if (!axis_) return 1.0;
  return dcheck(space, vm, xi, axis_->plus) + dcheck(space, vm, xi, axis_->minus);
}

double LengthFunction::value(const SpaceModel& space, const VisualMetricParams& vm,
                             const ConePoint& x) const {
  return x.t * value(space, vm, x.xi);
}

const Word& LengthFunction::axis_word() const {
  if (!axis_) throw Error(ErrorKind::Config, "canonical length function has no axis");
  return axis_->g;
}
const BoundaryPoint& LengthFunction::fix_plus() const {
  if (!axis_) throw Error(ErrorKind::Config, "canonical length function has no axis");
  return axis_->plus;
}
const BoundaryPoint& LengthFunction::fix_minus() const {
  if (!axis_) throw Error(ErrorKind::Config, "canonical length function has no axis");
  return axis_->minus;
}

double t_coordinate(const SpaceModel& space, const VisualMetricParams& vm,
                    const Word& g, const BoundaryPoint& xi) {
  const IsometryClass cls = classify(space, g);
  if (!cls.hyperbolic())
    throw Error(ErrorKind::Classification, "t coordinate needs a hyperbolic element");
  const double dm = dcheck(space, vm, xi, *cls.fix_repelling);
  const double dp = dcheck(space, vm, xi, *cls.fix_attracting);
  return dm / (dp + dm);
}

double t_recurrence(double lambda, double t) {
  return lambda * t / ((1.0 - t) / lambda + lambda * t);
}

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

// A_n labels in exact integer arithmetic: a boundary point lies in A_n iff
// 2 l n < u2 <= 2 l (n+1), where u2 = 2(xi, g+) - 2(xi, g-) in doubled
// units and l is the translation length.
std::int64_t an_label(std::int64_t u2, std::int64_t ell) {
  return ceil_div(u2, 2 * ell) - 1;
}

}  // namespace

AnPartition a_n_partition(const SpaceModel& space, const VisualMetricParams& vm,
                          const Word& g, std::int64_t depth) {
  (void)vm;
  if (!space.is_tree())
    throw Error(ErrorKind::ModelMismatch, "A_n cells are exact on tree backends only");
  const GroupModel& gm = space.group();
  const WordDynamics wd = word_dynamics(gm, g);
  if (!wd.hyperbolic)
    throw Error(ErrorKind::Classification, "A_n partition needs a hyperbolic element");
  const std::int64_t ell = wd.translation_length;

  AnPartition out;
  for (const Word& w : space.cells_at_depth(depth)) {
    const Confluence cp = confluence(gm, w, *wd.fix_plus);
    const Confluence cm = confluence(gm, w, *wd.fix_minus);
    if (cp.exhausted || cm.exhausted) {
      out.flagged.push_back(w);  // the cell contains a fixed point
      continue;
    }
    const std::int64_t plus2 =
        2 * cp.common + (gm.clique_siblings(cp.left, cp.right) ? 1 : 0);
    const std::int64_t minus2 =
        2 * cm.common + (gm.clique_siblings(cm.left, cm.right) ? 1 : 0);
    out.labeled.emplace_back(w, an_label(plus2 - minus2, ell));
  }
  return out;
}

std::vector<Word> a_n_cover(const SpaceModel& space, const Word& g, std::int64_t n) {
  if (!space.is_tree())
    throw Error(ErrorKind::ModelMismatch, "A_n covers are exact on tree backends only");
  const GroupModel& gm = space.group();
  const WordDynamics wd = word_dynamics(gm, g);
  if (!wd.hyperbolic)
    throw Error(ErrorKind::Classification, "A_n cover needs a hyperbolic element");
  const std::int64_t ell = wd.translation_length;
  const BoundaryRay& plus = *wd.fix_plus;
  const BoundaryRay& minus = *wd.fix_minus;

  const Confluence d0 = confluence(gm, plus, minus);
  const std::int64_t cap =
      ell * (std::llabs(n) + 3) + d0.common +
      static_cast<std::int64_t>(plus.pre_steps().size() + minus.pre_steps().size()) + 6;

  std::vector<Word> cover;
  std::vector<Syllable> st;
  std::function<void()> descend = [&]() {
    const auto depth = static_cast<std::int64_t>(st.size());
    if (depth > cap) return;
    const std::optional<Syllable> last =
        st.empty() ? std::nullopt : std::optional<Syllable>(st.back());
    const bool on_plus =
        GroupModel::common_steps(st, gm.steps(ray_prefix(gm, plus, depth))) == depth;
    const bool on_minus =
        GroupModel::common_steps(st, gm.steps(ray_prefix(gm, minus, depth))) == depth;
    for (const Syllable& c : gm.allowed_steps(last)) {
      st.push_back(c);
      const auto d1 = static_cast<std::int64_t>(st.size());
      const bool child_on_plus = on_plus && plus.step_at(d1 - 1) == c;
      const bool child_on_minus = on_minus && minus.step_at(d1 - 1) == c;
      if (child_on_plus || child_on_minus) {
        descend();
      } else {
        const Word w = gm.from_steps(st);
        const Confluence cp = confluence(gm, w, plus);
        const Confluence cm = confluence(gm, w, minus);
        const std::int64_t plus2 =
            2 * cp.common + (gm.clique_siblings(cp.left, cp.right) ? 1 : 0);
        const std::int64_t minus2 =
            2 * cm.common + (gm.clique_siblings(cm.left, cm.right) ? 1 : 0);
        if (an_label(plus2 - minus2, ell) == n) cover.push_back(w);
      }
      st.pop_back();
    }
  };
  descend();
  return region_normal_form(space, std::move(cover));
}

std::vector<Word> region_normal_form(const SpaceModel& space,
                                     std::vector<Word> cylinders) {
  const GroupModel& gm = space.group();
  const auto less = [&](const Word& a, const Word& b) {
    return gm.cmp(a, b) == std::strong_ordering::less;
  };
  std::sort(cylinders.begin(), cylinders.end(), less);
  cylinders.erase(std::unique(cylinders.begin(), cylinders.end()), cylinders.end());

  bool changed = true;
  while (changed) {
    changed = false;
    // drop cylinders dominated by a present prefix
    std::vector<Word> kept;
    for (const Word& w : cylinders) {
      bool dominated = false;
      const std::vector<Syllable> sw = gm.steps(w);
      for (const Word& v : cylinders) {
        if (v == w) continue;
        const std::vector<Syllable> sv = gm.steps(v);
        if (sv.size() < sw.size() &&
            GroupModel::common_steps(sv, sw) == static_cast<std::int64_t>(sv.size())) {
          dominated = true;
          break;
        }
      }
      if (!dominated) kept.push_back(w);
      changed = changed || dominated;
    }
    cylinders = std::move(kept);

    // merge complete sibling families, deepest first
    std::int64_t max_len = 0;
    for (const Word& w : cylinders) max_len = std::max(max_len, gm.length(w));
    for (std::int64_t len = max_len; len >= 2 && !changed; --len) {
      for (const Word& w : cylinders) {
        if (gm.length(w) != len) continue;
        const Word parent = gm.prefix_steps(w, len - 1);
        const std::vector<Word> sibs = space.cell_children(parent);
        bool all_present = true;
        for (const Word& s : sibs)
          if (!std::binary_search(cylinders.begin(), cylinders.end(), s, less)) {
            all_present = false;
            break;
          }
        if (all_present) {
          std::vector<Word> merged;
          for (const Word& v : cylinders) {
            bool is_sib = false;
            for (const Word& s : sibs)
              if (s == v) { is_sib = true; break; }
            if (!is_sib) merged.push_back(v);
          }
          merged.push_back(parent);
          std::sort(merged.begin(), merged.end(), less);
          cylinders = std::move(merged);
          changed = true;
          break;
        }
      }
    }
  }
  return cylinders;
}

double kf_residual(const SpaceModel& space, const VisualMetricParams& vm,
                   double delta, const LengthFunction& f, const Word& g,
                   const BoundaryPoint& xi, const BoundaryPoint& eta) {
  const GroupModel& gm = space.group();
  const Word g_inv = gm.inverse(g);
  const double L = space.distance(Word(), g);
  const auto ln_rn = [&](const BoundaryPoint& z) {
    const double p = ext_product(space, ProductArg(z), ProductArg(g), Word());
    const double fz = f.value(space, vm, z);
    const double fgz = f.value(space, vm, boundary_act(space, g_inv, z));
    return delta * (2.0 * p - L) + (delta / vm.epsilon0) * (std::log(fz) - std::log(fgz));
  };
  const double beta_val = beta(space, g, xi, eta);
  return beta_val - (ln_rn(xi) - ln_rn(eta)) / (2.0 * delta);
}

namespace {

// ln of lambda^{-n}(1 - t) + lambda^{n} t without overflow
double log_f_ratio_term(double ln_lambda, std::int64_t n, double t) {
  const double a = -static_cast<double>(n) * ln_lambda + std::log1p(-t);
  const double b = static_cast<double>(n) * ln_lambda + std::log(t);
  if (t <= 0.0) return a;
  if (t >= 1.0) return b;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double sigma_threshold(double ln_lambda, std::int64_t j) {
  // sigma(j) = 1/(1 + lambda^{-2j}), evaluated stably in log space
  if (j >= 0) return 1.0 / (1.0 + std::exp(-2.0 * static_cast<double>(j) * ln_lambda));
  const double x = std::exp(2.0 * static_cast<double>(j) * ln_lambda);
  return x / (1.0 + x);
}

}  // namespace

GrowthResult growth_experiment(const SpaceModel& space, const CylinderMeasure& nu,
                               const VisualMetricParams& vm, double delta,
                               const Word& g, double p,
                               const std::vector<std::int64_t>& powers,
                               std::int64_t depth) {
  if (powers.empty()) throw Error(ErrorKind::Config, "powers list must be nonempty");
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (powers[i] < 1 || (i > 0 && powers[i] <= powers[i - 1]))
      throw Error(ErrorKind::Config, "powers must be positive and increasing");
  }
  const GroupModel& gm = space.group();
  const IsometryClass cls = classify(space, g);
  if (!cls.hyperbolic())
    throw Error(ErrorKind::Classification, "growth experiment needs a hyperbolic element");

  GrowthResult out;
  out.depth = depth;
  out.lambda = eigenvalue_lambda(space, vm, g);
  const double ln_lambda = std::log(out.lambda);

  // series of exact norms; on trees the effective depth only needs to clear
  // d(p, g^n p), whatever the reporting depth
  for (const std::int64_t n : powers) {
    const Word gn = gm.pow(g, n);
    const std::int64_t lp_depth =
        space.is_tree() ? std::max(depth, gm.length(gn) + 1) : depth;
    const LpResult lp = lp_norm(space, nu, delta, vm.epsilon0, gn, p, lp_depth);
    GrowthPoint pt;
    pt.n = n;
    pt.value = lp.value;
    pt.certified_error = lp.certified_error;
    pt.certified = lp.certified;
    out.series.push_back(pt);
  }

  // affine fit of value against n
  {
    const auto m = static_cast<Eigen::Index>(out.series.size());
    Eigen::MatrixXd X(m, 2);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      X(i, 0) = static_cast<double>(out.series[static_cast<std::size_t>(i)].n);
      X(i, 1) = 1.0;
      y(i) = out.series[static_cast<std::size_t>(i)].value;
    }
    const Eigen::Vector2d coef = X.colPivHouseholderQr().solve(y);
    out.slope = coef(0);
    out.intercept = coef(1);
    const double res_rms =
        std::sqrt((X * coef - y).squaredNorm() / static_cast<double>(m));
    const double val_rms = std::sqrt(y.squaredNorm() / static_cast<double>(m));
    out.rel_residual = val_rms > 0 ? res_rms / val_rms : 0.0;
  }

  // block machinery (tree backends): |K_f| bound, k rule, mu^BM(A_0 x A_k)
  if (space.is_tree()) {
    const LengthFunction f = LengthFunction::axis(space, g);
    // oscillation of ln f over the boundary: cell-exact off the fixed-point
    // cells, fixed-point values plus a depth-size fudge on them
    double fmax = 0.0, fmin = std::numeric_limits<double>::infinity();
    const AnPartition part = a_n_partition(space, vm, g, depth);
    for (const auto& [w, n] : part.labeled) {
      // f is constant on labeled cells: evaluate at the cell's ray extension
      const Confluence cp = confluence(gm, w, f.fix_plus().as_ray());
      const Confluence cm = confluence(gm, w, f.fix_minus().as_ray());
      const double vplus = std::exp(
          -vm.epsilon0 * 0.5 *
          static_cast<double>(2 * cp.common +
                              (gm.clique_siblings(cp.left, cp.right) ? 1 : 0)));
      const double vminus = std::exp(
          -vm.epsilon0 * 0.5 *
          static_cast<double>(2 * cm.common +
                              (gm.clique_siblings(cm.left, cm.right) ? 1 : 0)));
      fmax = std::max(fmax, vplus + vminus);
      fmin = std::min(fmin, vplus + vminus);
    }
    const double d_fix = dcheck(space, vm, f.fix_plus(), f.fix_minus());
    fmax = std::max(fmax, d_fix + std::exp(-vm.epsilon0 * static_cast<double>(depth)));
    fmin = std::min(fmin, d_fix);
    out.kf_bound = (std::log(fmax) - std::log(fmin)) / vm.epsilon0;

    out.k = static_cast<std::int64_t>(std::ceil(
        3.0 * std::max(2.0 * vm.epsilon0 * out.kf_bound, std::log(2.0) + ln_lambda) /
        ln_lambda));

    const std::vector<Word> cover0 = a_n_cover(space, g, 0);
    const std::vector<Word> coverk = a_n_cover(space, g, out.k);
    double bm = 0.0;
    for (const Word& u : cover0)
      for (const Word& v : coverk) {
        const std::int64_t prod2 = ext_gromov2(gm, u, v);
        bm += std::exp(delta * static_cast<double>(prod2)) * nu.cylinder_mass(u) *
              nu.cylinder_mass(v);
      }
    out.bm_block_mass = bm;

    const double block_const =
        std::pow((static_cast<double>(out.k) - 2.0) * ln_lambda / (2.0 * vm.epsilon0), p);
    const std::int64_t m_min = -out.k - 16;
    for (GrowthPoint& pt : out.series) {
      std::int64_t blocks = 0;
      for (std::int64_t i = m_min; i <= -out.k; ++i) {
        // certified when f(g^n . eta)/f(g^n . xi) >= lambda^{2k-2}/4 over
        // the whole block pair A_i x A_{i+k}
        const double t_xi_hi = sigma_threshold(ln_lambda, i + 1);
        const double t_eta_lo = sigma_threshold(ln_lambda, i + out.k);
        const double lhs = log_f_ratio_term(ln_lambda, pt.n, t_eta_lo) -
                           log_f_ratio_term(ln_lambda, pt.n, t_xi_hi);
        const double rhs =
            (2.0 * static_cast<double>(out.k) - 2.0) * ln_lambda - std::log(4.0);
        if (lhs >= rhs) ++blocks;
      }
      pt.certified_blocks = blocks;
      pt.block_lower_bound = block_const * static_cast<double>(blocks) * bm;
    }
  }

  bool increasing = true;
  for (std::size_t i = 1; i < out.series.size(); ++i)
    if (out.series[i].value <= out.series[i - 1].value) increasing = false;
  const bool tenfold =
      out.series.back().value >= 10.0 * out.series.front().value;
  bool blocks_grow = true;
  if (space.is_tree() && out.series.size() >= 2) {
    for (std::size_t i = 1; i < out.series.size(); ++i)
      if (out.series[i].certified_blocks < out.series[i - 1].certified_blocks)
        blocks_grow = false;
    blocks_grow = blocks_grow &&
                  out.series.back().certified_blocks >
                      out.series.front().certified_blocks;
  }
  out.verdict = (increasing && tenfold && blocks_grow) ? "unbounded-consistent"
                                                       : "inconclusive";
  return out;
}

}  // namespace hyp
