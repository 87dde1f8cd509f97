#pragma once

#include "hyp/boundary.hpp"
#include "hyp/measures.hpp"

namespace hyp {

/// beta_g(xi, eta) = (gp, xi) - (gp, eta). Antisymmetric, zero on the
/// diagonal, |beta_g| <= d(p, gp), integer-valued on free groups and
/// half-integer on free products.
double beta(const SpaceModel& space, const Word& g, const BoundaryPoint& xi,
            const BoundaryPoint& eta);

/// Doubled exact value on tree backends.
std::int64_t beta2(const SpaceModel& space, const Word& g, const BoundaryPoint& xi,
                   const BoundaryPoint& eta);

/// Max over the sampled pairs of |beta_{gh} - g.beta_h - beta_g| with the
/// linear action (g.F)(xi, eta) = F(g^-1 xi, g^-1 eta). Exactly 0 on trees.
double cocycle_identity_defect(
    const SpaceModel& space, const Word& g, const Word& h,
    const std::vector<std::pair<BoundaryPoint, BoundaryPoint>>& samples);

struct LpResult {
  double value = 0.0;           // ||beta_g||_p^p
  double certified_error = 0.0; // 0 on tree backends
  bool certified = true;        // p >= 2 delta / eps0 (finiteness certificate)
  double p = 0.0;
  std::int64_t depth = 0;
};

/// ||beta_g||_p^p against the Bowen-Margulis pairing e^{2 delta (xi,eta)}.
///
/// Tree backends: exact. The boundary splits into the classes
/// A_i = [w_i] \ [w_{i+1}] along the prefix path w_0, ..., w_m of g (plus
/// [g] itself); beta and the pair product are constant on every class pair,
/// the diagonal blocks vanish because beta is a function of the class, and
/// the block sum is finite in closed form. Requires depth > d(p, gp) and a
/// measure certified to depth d(p, gp).
///
/// Disk backend: cell-pair sum at representative boundary points with the
/// near-diagonal bounded by the kappa_g Lipschitz estimate; the result is
/// flagged uncertified.
LpResult lp_norm(const SpaceModel& space, const CylinderMeasure& nu, double delta,
                 double eps0, const Word& g, double p, std::int64_t depth);

/// Right side of the norm bound chain: ||beta||_inf^{p - 2d/e} kappa^{2d/e}.
double lp_upper_bound(const SpaceModel& space, const VisualMetricParams& vm,
                      double delta, const Word& g, double p,
                      std::int64_t kappa_sample_depth);

}  // namespace hyp
