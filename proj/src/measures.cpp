#include "hyp/measures.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "hyp/boundary_point.hpp"

namespace hyp {

namespace {

struct FitResult {
  double slope, intercept, residual;
};

FitResult log_linear_fit(const std::vector<std::int64_t>& radii,
                         const std::vector<double>& log_counts) {
  const auto n = static_cast<Eigen::Index>(radii.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = static_cast<double>(radii[static_cast<std::size_t>(i)]);
    X(i, 1) = 1.0;
    y(i) = log_counts[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d coef = X.colPivHouseholderQr().solve(y);
  const double rms = std::sqrt((X * coef - y).squaredNorm() / static_cast<double>(n));
  return {coef(0), coef(1), rms};
}

CriticalExponentEstimate fit_from_cumulative(const std::vector<std::int64_t>& N,
                                             std::int64_t R_max) {
  CriticalExponentEstimate out;
  out.fit_min = std::max<std::int64_t>(2, R_max / 2);
  out.fit_max = R_max;
  std::vector<std::int64_t> rs;
  std::vector<double> ln;
  for (std::int64_t r = out.fit_min; r <= out.fit_max; ++r) {
    const std::int64_t c = N[static_cast<std::size_t>(r)];
    if (c <= 0) continue;
    rs.push_back(r);
    ln.push_back(std::log(static_cast<double>(c)));
  }
  if (rs.size() < 2)
    throw Error(ErrorKind::DegenerateInput, "not enough ball counts for a fit");
  const FitResult fit = log_linear_fit(rs, ln);
  out.delta_hat = fit.slope;
  out.residual = fit.residual;
  return out;
}

}  // namespace

std::optional<double> analytic_delta(const SpaceModel& space) {
  if (!space.is_tree()) return std::nullopt;
  const GroupModel& gm = space.group();
  if (gm.is_free_group())
    return std::log(static_cast<double>(2 * gm.factor_count() - 1));
  const auto& steps = gm.unit_steps();
  const auto n = static_cast<Eigen::Index>(steps.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index t = 0; t < n; ++t)
      if (gm.step_allowed(steps[static_cast<std::size_t>(s)],
                          steps[static_cast<std::size_t>(t)]))
        M(s, t) = 1.0;
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(M);
  double lambda = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    lambda = std::max(lambda, solver.eigenvalues()(i).real());
  return std::log(lambda);
}

CriticalExponentEstimate critical_exponent(const SpaceModel& space,
                                           std::int64_t R_max) {
  if (R_max < 4) throw Error(ErrorKind::Config, "critical exponent needs R_max >= 4");
  const BallStats st = space.ball_stats(R_max);
  CriticalExponentEstimate out = fit_from_cumulative(st.cumulative, R_max);
  out.analytic = analytic_delta(space);
  out.used_analytic = out.analytic.has_value();
  return out;
}

CriticalExponentEstimate critical_exponent_orbit(const SpaceModel& space,
                                                 const std::vector<Word>& generators,
                                                 std::int64_t R_max) {
  if (R_max < 4) throw Error(ErrorKind::Config, "critical exponent needs R_max >= 4");
  const std::vector<Word> orbit =
      space.orbit_ball(generators, static_cast<double>(R_max));
  std::vector<std::int64_t> cumulative(static_cast<std::size_t>(R_max) + 1, 0);
  for (const Word& q : orbit) {
    const auto d =
        static_cast<std::int64_t>(std::ceil(space.distance(Word(), q) - 1e-12));
    for (std::int64_t r = std::max<std::int64_t>(d, 0); r <= R_max; ++r)
      ++cumulative[static_cast<std::size_t>(r)];
  }
  return fit_from_cumulative(cumulative, R_max);
}

void Schedule::validate() const {
  if (t_offsets.empty())
    throw Error(ErrorKind::Config, "schedule needs at least one t offset");
  for (std::size_t i = 0; i < t_offsets.size(); ++i) {
    if (t_offsets[i] <= 0)
      throw Error(ErrorKind::Config, "schedule offsets must be positive");
    if (i > 0 && t_offsets[i] >= t_offsets[i - 1])
      throw Error(ErrorKind::Config, "schedule offsets must be strictly decreasing");
  }
  if (radius < 1) throw Error(ErrorKind::Config, "schedule radius must be >= 1");
}

void DiscreteBoundaryMeasure::build_index() const {
  if (!index_.empty() || cells.empty()) return;
  for (const auto& [w, m] : cells) index_[w.syllables()] = m;
}

double DiscreteBoundaryMeasure::cell_mass(const Word& w) const {
  build_index();
  const auto it = index_.find(w.syllables());
  if (it == index_.end())
    throw Error(ErrorKind::Depth, "cell not present at this measure's depth");
  return it->second;
}

double DiscreteBoundaryMeasure::cylinder_mass(const GroupModel& model,
                                              const Word& w) const {
  const std::int64_t len = model.length(w);
  if (len > depth)
    throw Error(ErrorKind::Depth, "cylinder deeper than the measure's certified depth");
  if (len == depth) return cell_mass(w);
  double acc = 0.0;
  std::vector<Syllable> st = model.steps(w);
  std::function<void()> rec = [&]() {
    if (static_cast<std::int64_t>(st.size()) == depth) {
      acc += cell_mass(model.from_steps(st));
      return;
    }
    const std::optional<Syllable> last =
        st.empty() ? std::nullopt : std::optional<Syllable>(st.back());
    for (const Syllable& s : model.unit_steps()) {
      if (!model.step_allowed(last, s)) continue;
      st.push_back(s);
      rec();
      st.pop_back();
    }
  };
  rec();
  return acc;
}

double DiscreteBoundaryMeasure::refinement_defect(const SpaceModel& space) const {
  double worst = 0.0;
  for (std::int64_t d = 1; d < depth; ++d) {
    for (const Word& w : space.cells_at_depth(d)) {
      double kids = 0.0;
      for (const Word& c : space.cell_children(w))
        kids += cylinder_mass(space.group(), c);
      worst = std::max(worst, std::abs(kids - cylinder_mass(space.group(), w)));
    }
  }
  return worst;
}

namespace {

double delta_hat_for(const SpaceModel& space, std::int64_t R) {
  const auto a = analytic_delta(space);
  if (a) return *a;
  return critical_exponent(space, std::max<std::int64_t>(R, 4)).delta_hat;
}

DiscreteBoundaryMeasure mu_t_tree_full(const SpaceModel& space, double t,
                                       std::int64_t R, std::int64_t depth) {
  const ExtensionCounts ec = space.extension_counts(R);
  const std::vector<Word> cells = space.cells_at_depth(depth);
  const GroupModel& gm = space.group();

  DiscreteBoundaryMeasure out;
  out.depth = depth;
  out.cells.reserve(cells.size());

  double interior = 0.0;
  for (std::int64_t r = 0; r < depth; ++r)
    interior += ec.from_root[static_cast<std::size_t>(r)] *
                std::exp(-t * static_cast<double>(r));

  double cells_sum = 0.0;
  for (const Word& w : cells) {
    const int state = gm.step_state(gm.steps(w).back());
    double num = 0.0;
    for (std::int64_t r = 0; r + depth <= R; ++r)
      num += ec.by_state[static_cast<std::size_t>(r)][static_cast<std::size_t>(state)] *
             std::exp(-t * static_cast<double>(depth + r));
    out.cells.emplace_back(w, num);
    cells_sum += num;
  }
  out.phi = interior + cells_sum;
  for (auto& [w, m] : out.cells) m /= out.phi;
  out.interior_remainder = interior / out.phi;
  out.total_mass = 1.0;
  return out;
}

DiscreteBoundaryMeasure mu_t_enumerated(const SpaceModel& space,
                                        const std::vector<Word>& orbit, double t,
                                        std::int64_t depth) {
  const GroupModel& gm = space.group();
  DiscreteBoundaryMeasure out;
  out.depth = depth;
  std::map<std::vector<Syllable>, double> bins;  // step-keyed, deterministic
  double interior = 0.0, phi = 0.0;
  for (const Word& q : orbit) {
    const double mass = std::exp(-t * space.distance(Word(), q));
    phi += mass;
    if (gm.length(q) < depth)
      interior += mass;
    else
      bins[gm.steps(gm.prefix_steps(q, depth))] += mass;
  }
  if (phi == 0.0) throw Error(ErrorKind::DegenerateInput, "empty orbit");
  for (const Word& w : space.cells_at_depth(depth)) {
    const auto it = bins.find(gm.steps(w));
    out.cells.emplace_back(w, it == bins.end() ? 0.0 : it->second / phi);
  }
  out.phi = phi;
  out.interior_remainder = interior / phi;
  out.total_mass = 1.0;
  return out;
}

}  // namespace

DiscreteBoundaryMeasure mu_t(const SpaceModel& space, double t, std::int64_t R,
                             std::int64_t depth) {
  if (depth < 1) throw Error(ErrorKind::Depth, "cell depth must be >= 1");
  if (R < depth) throw Error(ErrorKind::Config, "radius must be at least the depth");
  const double dh = delta_hat_for(space, R);
  if (t <= dh) {
    std::ostringstream os;
    os << "t = " << t << " is not above the critical exponent " << dh
       << "; the orbit series diverges";
    throw Error(ErrorKind::Divergence, os.str());
  }
  DiscreteBoundaryMeasure out;
  if (space.is_tree()) {
    out = mu_t_tree_full(space, t, R, depth);
  } else {
    std::vector<Word> orbit;
    space.for_each_word(static_cast<double>(R),
                        [&](const Word& w, double) { orbit.push_back(w); });
    out = mu_t_enumerated(space, orbit, t, depth);
  }
  out.delta_used = dh;
  out.delta_analytic = analytic_delta(space).has_value();
  return out;
}

DiscreteBoundaryMeasure mu_t_orbit(const SpaceModel& space,
                                   const std::vector<Word>& generators, double t,
                                   std::int64_t R, std::int64_t depth) {
  if (depth < 1) throw Error(ErrorKind::Depth, "cell depth must be >= 1");
  if (R < depth) throw Error(ErrorKind::Config, "radius must be at least the depth");
  const std::vector<Word> orbit =
      space.orbit_ball(generators, static_cast<double>(R));
  DiscreteBoundaryMeasure out = mu_t_enumerated(space, orbit, t, depth);
  if (orbit.size() > 2) {
    const CriticalExponentEstimate ce =
        critical_exponent_orbit(space, generators, std::max<std::int64_t>(R, 4));
    if (t <= ce.delta_hat)
      throw Error(ErrorKind::Divergence, "t is not above the orbit's critical exponent");
    out.delta_used = ce.delta_hat;
  }
  out.delta_analytic = false;
  return out;
}

DiscreteBoundaryMeasure ps_measure(const SpaceModel& space, const Schedule& schedule,
                                   std::int64_t depth, double cauchy_tolerance) {
  schedule.validate();
  if (cauchy_tolerance <= 0)
    throw Error(ErrorKind::Config, "Cauchy tolerance must be positive");

  const double dh = delta_hat_for(space, schedule.radius);
  std::vector<DiscreteBoundaryMeasure> stages;
  std::vector<std::vector<double>> conditional;
  for (const double off : schedule.t_offsets) {
    DiscreteBoundaryMeasure m = mu_t(space, dh + off, schedule.radius, depth);
    // condition on escaping to the boundary: the interior remainder is the
    // part of mu_t that the weak limit provably loses
    double boundary_sum = 0.0;
    for (const auto& [w, mass] : m.cells) boundary_sum += mass;
    std::vector<double> cond;
    cond.reserve(m.cells.size());
    for (const auto& [w, mass] : m.cells) cond.push_back(mass / boundary_sum);
    conditional.push_back(std::move(cond));
    stages.push_back(std::move(m));
  }

  double gap = 0.0;
  if (stages.size() >= 2) {
    const auto& last = conditional.back();
    const auto& prev = conditional[conditional.size() - 2];
    for (std::size_t i = 0; i < last.size(); ++i)
      gap = std::max(gap, std::abs(last[i] - prev[i]));
  }
  if (gap > cauchy_tolerance) {
    std::size_t worst = 0;
    double wgap = -1.0;
    for (std::size_t i = 0; i < conditional.back().size(); ++i) {
      const double g = std::abs(conditional.back()[i] -
                                conditional[conditional.size() - 2][i]);
      if (g > wgap) {
        wgap = g;
        worst = i;
      }
    }
    std::ostringstream os;
    os << "schedule is not Cauchy at depth " << depth << ": per-cell gap " << gap
       << " exceeds tolerance " << cauchy_tolerance
       << "; stage masses of the worst cell:";
    for (const auto& stage : conditional) os << " " << stage[worst];
    throw Error(ErrorKind::Convergence, os.str());
  }

  DiscreteBoundaryMeasure out = stages.back();
  double total = 0.0;
  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    out.cells[i].second = conditional.back()[i];
    total += out.cells[i].second;
  }
  out.total_mass = total;
  out.cauchy_gap = gap;
  out.stage_phis.clear();
  for (const auto& s : stages) out.stage_phis.push_back(s.phi);
  out.delta_used = dh;
  out.delta_analytic = analytic_delta(space).has_value();
  return out;
}

AnalyticTreeMeasure::AnalyticTreeMeasure(const SpaceModel& space)
    : model_(space.group()) {
  if (!space.is_tree())
    throw Error(ErrorKind::ModelMismatch,
                "the analytic Markov measure exists on tree backends only");
  const auto& steps = model_.unit_steps();
  const std::size_t ns = steps.size();
  u_.assign(ns, 1.0);

  if (model_.is_free_group()) {
    delta_ = std::log(static_cast<double>(2 * model_.factor_count() - 1));
  } else {
    const auto n = static_cast<Eigen::Index>(ns);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index s = 0; s < n; ++s)
      for (Eigen::Index t = 0; t < n; ++t)
        if (model_.step_allowed(steps[static_cast<std::size_t>(s)],
                                steps[static_cast<std::size_t>(t)]))
          M(s, t) = 1.0;
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(M);
    Eigen::Index top = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (solver.eigenvalues()(i).real() > solver.eigenvalues()(top).real()) top = i;
    delta_ = std::log(solver.eigenvalues()(top).real());
    const Eigen::VectorXcd v = solver.eigenvectors().col(top);
    for (std::size_t s = 0; s < ns; ++s)
      u_[s] = std::abs(v(static_cast<Eigen::Index>(s)).real());
  }

  double depth1 = 0.0;
  for (std::size_t s = 0; s < ns; ++s) depth1 += u_[s];
  norm_ = 1.0 / (std::exp(-delta_) * depth1);
}

double AnalyticTreeMeasure::cylinder_mass(const Word& w) const {
  if (w.empty()) return 1.0;
  model_.validate(w);
  const std::vector<Syllable> st = model_.steps(w);
  const auto n = static_cast<double>(st.size());
  return norm_ * std::exp(-delta_ * n) *
         u_[static_cast<std::size_t>(model_.step_state(st.back()))];
}

double rn_max_rel_error(const SpaceModel& space, const CylinderMeasure& nu,
                        double delta, const Word& g, std::int64_t depth) {
  const GroupModel& gm = space.group();
  gm.validate(g);
  const std::int64_t dg = gm.length(g);
  if (depth <= dg)
    throw Error(ErrorKind::Depth,
                "cells at this depth are not fully translated by g; increase depth");
  if (depth + dg > nu.max_depth())
    throw Error(ErrorKind::Depth,
                "measure depth too small: need cylinder masses at depth + |g|");

  const Word g_inv = gm.inverse(g);
  double worst = 0.0;
  for (const Word& C : space.cells_at_depth(depth)) {
    const double mC = nu.cylinder_mass(C);
    if (mC == 0.0) continue;
    const Word gC = gm.mul(g, C);
    const double ratio = nu.cylinder_mass(gC) / mC;
    // (xi, g^-1 p) is constant across the cell at this depth
    const std::int64_t prod2 = ext_gromov2(gm, g_inv, C);
    const double predicted =
        std::exp(delta * (static_cast<double>(prod2) - static_cast<double>(dg)));
    worst = std::max(worst, std::abs(ratio / predicted - 1.0));
  }
  return worst;
}

namespace {

enum class PairRelation { Disjoint, Equal, Nested };

PairRelation cylinder_relation(const GroupModel& gm, const Word& C, const Word& D) {
  const auto sc = gm.steps(C), sd = gm.steps(D);
  const std::int64_t common = GroupModel::common_steps(sc, sd);
  if (common == static_cast<std::int64_t>(sc.size()) &&
      common == static_cast<std::int64_t>(sd.size()))
    return PairRelation::Equal;
  if (common == static_cast<std::int64_t>(sc.size()) ||
      common == static_cast<std::int64_t>(sd.size()))
    return PairRelation::Nested;
  return PairRelation::Disjoint;
}

}  // namespace

BmResult bm_pair_measure(const SpaceModel& space, const CylinderMeasure& nu,
                         double delta, const Word& C, const Word& D,
                         int diag_depth) {
  const GroupModel& gm = space.group();
  gm.validate(C);
  gm.validate(D);
  if (C.empty() || D.empty())
    throw Error(ErrorKind::Depth, "cylinder cells have depth >= 1");

  const PairRelation rel = cylinder_relation(gm, C, D);
  if (rel == PairRelation::Disjoint) {
    const std::int64_t prod2 = ext_gromov2(gm, C, D);
    BmResult out;
    out.value = std::exp(delta * static_cast<double>(prod2)) *
                nu.cylinder_mass(C) * nu.cylinder_mass(D);
    return out;
  }
  if (rel == PairRelation::Nested)
    throw Error(ErrorKind::Divergence,
                "nested cylinders share the diagonal; the pair measure diverges "
                "whenever 2 delta_G meets the growth exponent");

  // C == D: level-by-level cross terms with a geometric tail certificate.
  BmResult out;
  out.diagonal = true;
  std::vector<Word> frontier{C};
  double value = 0.0, prev_level = -1.0, last_level = 0.0, ratio = 0.0;
  for (int level = 0; level < diag_depth; ++level) {
    double level_sum = 0.0;
    std::vector<Word> next;
    for (const Word& v : frontier) {
      const std::int64_t dv = gm.length(v);
      const std::vector<Word> kids = space.cell_children(v);
      std::vector<double> masses(kids.size());
      for (std::size_t i = 0; i < kids.size(); ++i)
        masses[i] = nu.cylinder_mass(kids[i]);
      for (std::size_t i = 0; i < kids.size(); ++i) {
        for (std::size_t j = 0; j < kids.size(); ++j) {
          if (i == j) continue;
          std::int64_t prod2 = 2 * dv;
          if (gm.clique_siblings(gm.steps(kids[i]).back(), gm.steps(kids[j]).back()))
            prod2 += 1;
          level_sum += std::exp(delta * static_cast<double>(prod2)) *
                       masses[i] * masses[j];
        }
      }
      next.insert(next.end(), kids.begin(), kids.end());
    }
    value += level_sum;
    if (prev_level > 0.0 && level_sum > 0.0) ratio = level_sum / prev_level;
    prev_level = level_sum;
    last_level = level_sum;
    frontier = std::move(next);
    if (ratio > 0.0 && ratio >= 1.0 && level >= 3) break;  // certified divergent
    if (frontier.size() > 200000) break;
  }
  if (!(ratio > 0.0) || ratio >= 1.0) {
    std::ostringstream os;
    os << "diagonal Bowen-Margulis recursion does not contract (level ratio "
       << ratio << "); the diagonal pair measure is divergent";
    throw Error(ErrorKind::Divergence, os.str());
  }
  const double tail = last_level * ratio / (1.0 - ratio);
  out.value = value + tail;
  out.certified_error = tail;  // conservative: bounds the whole tail estimate
  return out;
}

double bm_invariance_defect(const SpaceModel& space, const CylinderMeasure& nu,
                            double delta, const Word& g, std::int64_t depth) {
  const GroupModel& gm = space.group();
  const std::vector<Word> cells = space.cells_at_depth(depth);
  double worst = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (i == j) continue;
      const BmResult before = bm_pair_measure(space, nu, delta, cells[i], cells[j]);
      if (before.value == 0.0) continue;
      const BmResult after = bm_pair_measure(space, nu, delta, gm.mul(g, cells[i]),
                                             gm.mul(g, cells[j]));
      worst = std::max(worst, std::abs(after.value / before.value - 1.0));
    }
  }
  return worst;
}

}  // namespace hyp
