#include "hyp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hyp {

WordDynamics word_dynamics(const GroupModel& model, const Word& g) {
  WordDynamics out;
  const CyclicForm cf = model.cyclic_reduce(g);
  if (cf.core.empty() || model.torsion_core(cf.core)) return out;
  out.hyperbolic = true;
  out.translation_length = model.length(cf.core);
  out.fix_plus = make_ray(model, cf.conj, cf.core);
  out.fix_minus = make_ray(model, cf.conj, model.inverse(cf.core));
  return out;
}

IsometryClass classify(const SpaceModel& space, const Word& g) {
  space.group().validate(g);
  IsometryClass out;

  if (space.is_tree()) {
    const WordDynamics wd = word_dynamics(space.group(), g);
    if (!wd.hyperbolic) return out;
    out.kind = IsometryClass::Kind::Hyperbolic;
    out.translation_length = static_cast<double>(wd.translation_length);
    out.fix_attracting = BoundaryPoint::ray(*wd.fix_plus);
    out.fix_repelling = BoundaryPoint::ray(*wd.fix_minus);
    return out;
  }

  const Mobius m = space.disk().matrix(g);
  const double tr = m.trace_abs();
  if (tr <= 2.0 + 1e-12) return out;  // identity or elliptic; no parabolics here
  out.kind = IsometryClass::Kind::Hyperbolic;
  out.translation_length = 2.0 * std::acosh(tr / 2.0);
  const auto fp = space.disk().fixed_points(m);
  if (fp) {
    out.fix_attracting = BoundaryPoint::angle(fp->attracting);
    out.fix_repelling = BoundaryPoint::angle(fp->repelling);
  }
  return out;
}

std::vector<Word> limit_set_sample(const SpaceModel& space,
                                   const std::vector<Word>& generators,
                                   std::int64_t depth) {
  if (depth < 1) throw Error(ErrorKind::Depth, "limit-set depth must be >= 1");
  const GroupModel& gm = space.group();
  double max_gen = 0.0;
  for (const Word& g : generators)
    max_gen = std::max(max_gen, static_cast<double>(gm.length(g)));
  // Need orbit points beyond the cell depth in the word metric.
  const double radius = static_cast<double>(depth) + 2.0 * max_gen + 2.0;
  const std::vector<Word> orbit = space.orbit_ball(generators, radius);

  std::vector<Word> cells;
  for (const Word& q : orbit) {
    if (gm.length(q) < depth) continue;
    cells.push_back(gm.prefix_steps(q, depth));
  }
  std::sort(cells.begin(), cells.end(), [&](const Word& a, const Word& b) {
    return gm.cmp(a, b) == std::strong_ordering::less;
  });
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

NonElementary is_non_elementary(const SpaceModel& space,
                                const std::vector<Word>& generators,
                                std::int64_t certification_depth) {
  if (generators.empty()) return NonElementary::No;
  const GroupModel& gm = space.group();

  const std::vector<Word> cells = limit_set_sample(space, generators,
                                                   certification_depth);
  if (cells.empty()) return NonElementary::No;  // finite orbit (trivial/torsion)

  // Hunt for two hyperbolic elements with disjoint fixed pairs among short
  // products of the generators.
  double search_radius = 0.0;
  for (const Word& g : generators)
    search_radius = std::max(search_radius, static_cast<double>(gm.length(g)));
  search_radius = 3.0 * search_radius + 4.0;
  const std::vector<Word> elements = space.orbit_ball(generators, search_radius);

  std::set<std::pair<std::string, std::string>> fixed_pairs;
  std::vector<WordDynamics> hyperbolics;
  for (const Word& h : elements) {
    const WordDynamics wd = word_dynamics(gm, h);
    if (!wd.hyperbolic) continue;
    std::string a = ray_str(gm, *wd.fix_plus), b = ray_str(gm, *wd.fix_minus);
    if (b < a) std::swap(a, b);
    if (fixed_pairs.insert({a, b}).second) hyperbolics.push_back(wd);
  }

  for (std::size_t i = 0; i < hyperbolics.size(); ++i) {
    for (std::size_t j = i + 1; j < hyperbolics.size(); ++j) {
      const auto& x = hyperbolics[i];
      const auto& y = hyperbolics[j];
      const bool disjoint = !(*x.fix_plus == *y.fix_plus) &&
                            !(*x.fix_plus == *y.fix_minus) &&
                            !(*x.fix_minus == *y.fix_plus) &&
                            !(*x.fix_minus == *y.fix_minus);
      if (disjoint && cells.size() >= 3) return NonElementary::Yes;
    }
  }

  // All hyperbolic elements share one axis and the sampled limit set is
  // small: elementary.
  if (cells.size() < 3 && fixed_pairs.size() <= 1) return NonElementary::No;
  return NonElementary::Inconclusive;
}

const char* to_string(NonElementary v) {
  switch (v) {
    case NonElementary::No: return "no";
    case NonElementary::Yes: return "yes";
    case NonElementary::Inconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace hyp
