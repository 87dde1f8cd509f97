#pragma once

#include <cmath>
#include <optional>

#include "hyp/cocycle.hpp"
#include "hyp/rng.hpp"

namespace hyp::testing {

inline Word random_word(const GroupModel& m, Rng& rng, int len) {
  std::vector<Syllable> st;
  std::optional<Syllable> last;
  for (int i = 0; i < len; ++i) {
    const auto choices = m.allowed_steps(last);
    st.push_back(choices[rng.below(choices.size())]);
    last = st.back();
  }
  return m.from_steps(st);
}

inline BoundaryRay random_ray(const GroupModel& m, Rng& rng) {
  for (;;) {
    const Word u = random_word(m, rng, static_cast<int>(rng.below(5)));
    const Word v = random_word(m, rng, 1 + static_cast<int>(rng.below(4)));
    try {
      return make_ray(m, u, v);
    } catch (const Error&) {
      continue;
    }
  }
}

/// Independent oracle for ||beta_g||_p^p: brute-force sum over ordered pairs
/// of distinct depth cells. beta and the pair product are cell-constant at
/// depth > d(p, gp); diagonal blocks vanish because beta is determined by
/// the cell. Deliberately shares no code with the spine-class implementation.
inline double lp_brute_force(const SpaceModel& space, const CylinderMeasure& nu,
                             double delta, const Word& g, double p,
                             std::int64_t depth) {
  const GroupModel& gm = space.group();
  const std::vector<Word> cells = space.cells_at_depth(depth);
  std::vector<double> betas(cells.size()), masses(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    betas[i] = 0.5 * static_cast<double>(ext_gromov2(gm, g, cells[i]));
    masses[i] = nu.cylinder_mass(cells[i]);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::vector<Syllable> si = gm.steps(cells[i]);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (i == j) continue;
      const double db = std::abs(betas[i] - betas[j]);
      if (db == 0.0) continue;
      const std::vector<Syllable> sj = gm.steps(cells[j]);
      const std::int64_t c = GroupModel::common_steps(si, sj);
      std::int64_t prod2 = 2 * c;
      if (gm.clique_siblings(si[static_cast<std::size_t>(c)],
                             sj[static_cast<std::size_t>(c)]))
        prod2 += 1;
      acc += std::pow(db, p) * std::exp(delta * static_cast<double>(prod2)) *
             masses[i] * masses[j];
    }
  }
  return acc;
}

}  // namespace hyp::testing
