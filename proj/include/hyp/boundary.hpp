#pragma once

#include <variant>

#include "hyp/space.hpp"

namespace hyp {

/// Parameters of the boundary metric d(xi, eta) = exp(-eps0 (xi,eta)).
/// On tree backends every eps0 > 0 is admissible (delta = 0 turns the visual
/// metric sandwich into an equality); on the CAT(-1) disk eps0 must stay in
/// (0, 1].
struct VisualMetricParams {
  double epsilon0 = 1.0;
  double delta = 0.0;

  static VisualMetricParams validated(const SpaceModel& space, double eps0);
};

/// Boundary point of either backend: canonical ray (tree) or angle (disk).
class BoundaryPoint {
 public:
  static BoundaryPoint ray(BoundaryRay r) { return BoundaryPoint(std::move(r)); }
  static BoundaryPoint angle(double theta) { return BoundaryPoint(theta); }

  bool is_ray() const { return std::holds_alternative<BoundaryRay>(rep_); }
  const BoundaryRay& as_ray() const { return std::get<BoundaryRay>(rep_); }
  double as_angle() const { return std::get<double>(rep_); }

  friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;

 private:
  explicit BoundaryPoint(BoundaryRay r) : rep_(std::move(r)) {}
  explicit BoundaryPoint(double theta) : rep_(theta) {}
  std::variant<BoundaryRay, double> rep_;
};

/// Argument of the extended Gromov product: an orbit vertex or a boundary point.
using ProductArg = std::variant<Word, BoundaryPoint>;

/// Extended Gromov product with respect to base (an orbit word). Closed-form
/// confluence on trees, continuous-extension formulas on the disk; +infinity
/// iff both arguments are the same boundary point.
double ext_product(const SpaceModel& space, const ProductArg& x,
                   const ProductArg& y, const Word& base);

/// Doubled exact product, tree backends only. kInf2 for equal boundary points.
std::int64_t ext_product2(const SpaceModel& space, const ProductArg& x,
                          const ProductArg& y, const Word& base);

/// The boundary action g . xi.
BoundaryPoint boundary_act(const SpaceModel& space, const Word& g,
                           const BoundaryPoint& xi);

/// d(xi, eta) = exp(-eps0 (xi,eta)); zero iff the points coincide. Satisfies
/// the ultrametric inequality on tree backends.
double dcheck(const SpaceModel& space, const VisualMetricParams& vm,
              const BoundaryPoint& xi, const BoundaryPoint& eta);

/// Cross-ratio of four pairwise distinct boundary points in the dcheck metric.
double cross_ratio(const SpaceModel& space, const VisualMetricParams& vm,
                   const BoundaryPoint& z1, const BoundaryPoint& z2,
                   const BoundaryPoint& z3, const BoundaryPoint& z4);

/// Metric derivative |g'|(xi) = exp(-eps0 (2(g xi, g p) - d(p, g p))).
double metric_derivative(const SpaceModel& space, const VisualMetricParams& vm,
                         const Word& g, const BoundaryPoint& xi);

/// Checks d^2(g xi, g eta) = |g'|(xi) |g'|(eta) d^2(xi, eta); exact exponent
/// arithmetic on trees, 1e-9 relative tolerance on the disk.
bool moebius_identity_check(const SpaceModel& space, const VisualMetricParams& vm,
                            const Word& g, const BoundaryPoint& xi,
                            const BoundaryPoint& eta);

/// Maximum of |(gp, xi) - (gp, eta)| / d(xi, eta) over ordered pairs of
/// distinct depth-`sample_depth` cells. Exact on trees: both the numerator
/// and the pair product are constant on cells deeper than d(p, gp).
double lipschitz_constant(const SpaceModel& space, const VisualMetricParams& vm,
                          const Word& g, std::int64_t sample_depth);

}  // namespace hyp
