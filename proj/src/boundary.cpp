#include "hyp/boundary.hpp"

#include <cmath>

namespace hyp {

namespace {

constexpr double kTol = 1e-9;

bool same_point(const SpaceModel& space, const ProductArg& x, const ProductArg& y) {
  if (x.index() != y.index()) return false;
  if (std::holds_alternative<Word>(x))
    return std::get<Word>(x) == std::get<Word>(y);
  const BoundaryPoint& a = std::get<BoundaryPoint>(x);
  const BoundaryPoint& b = std::get<BoundaryPoint>(y);
  if (a.is_ray() != b.is_ray()) return false;
  if (a.is_ray()) return a == b;
  (void)space;
  return std::abs(std::remainder(a.as_angle() - b.as_angle(), 2 * M_PI)) < 1e-12;
}

ProductArg translate_arg(const SpaceModel& space, const Word& o_inv,
                         const ProductArg& x) {
  if (std::holds_alternative<Word>(x))
    return space.group().mul(o_inv, std::get<Word>(x));
  const BoundaryPoint& b = std::get<BoundaryPoint>(x);
  if (b.is_ray())
    return BoundaryPoint::ray(translate(space.group(), o_inv, b.as_ray()));
  const Mobius m = space.disk().matrix(o_inv);
  return BoundaryPoint::angle(std::arg(m.apply(std::polar(1.0, b.as_angle()))));
}

std::int64_t tree_product2_at_origin(const SpaceModel& space, const ProductArg& x,
                                     const ProductArg& y) {
  const GroupModel& g = space.group();
  return std::visit(
      [&](const auto& a, const auto& b) -> std::int64_t {
        using A = std::decay_t<decltype(a)>;
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<A, BoundaryPoint> &&
                      std::is_same_v<B, BoundaryPoint>)
          return ext_gromov2(g, a.as_ray(), b.as_ray());
        else if constexpr (std::is_same_v<A, BoundaryPoint>)
          return ext_gromov2(g, b, a.as_ray());
        else if constexpr (std::is_same_v<B, BoundaryPoint>)
          return ext_gromov2(g, a, b.as_ray());
        else
          return ext_gromov2(g, a, b);
      },
      x, y);
}

double disk_product_at_origin(const SpaceModel& space, const ProductArg& x,
                              const ProductArg& y) {
  const DiskModel& dm = space.disk();
  const bool xb = std::holds_alternative<BoundaryPoint>(x);
  const bool yb = std::holds_alternative<BoundaryPoint>(y);
  if (xb && yb)
    return disk_gromov_boundary(std::get<BoundaryPoint>(x).as_angle(),
                                std::get<BoundaryPoint>(y).as_angle());
  if (xb)
    return disk_gromov_mixed(std::get<BoundaryPoint>(x).as_angle(),
                             dm.point(std::get<Word>(y)));
  if (yb)
    return disk_gromov_mixed(std::get<BoundaryPoint>(y).as_angle(),
                             dm.point(std::get<Word>(x)));
  return disk_gromov(dm.point(std::get<Word>(x)), dm.point(std::get<Word>(y)),
                     Complex(0, 0));
}

}  // namespace

VisualMetricParams VisualMetricParams::validated(const SpaceModel& space,
                                                 double eps0) {
  if (eps0 <= 0)
    throw Error(ErrorKind::Config, "visual exponent must be positive");
  if (!space.is_tree() && eps0 > 1.0 + 1e-12)
    throw Error(ErrorKind::Config,
                "visual exponent above the CAT(-1) threshold 1 on the disk backend");
  return VisualMetricParams{eps0, 0.0};
}

std::int64_t ext_product2(const SpaceModel& space, const ProductArg& x,
                          const ProductArg& y, const Word& base) {
  if (!space.is_tree())
    throw Error(ErrorKind::ModelMismatch, "exact products require a tree backend");
  if (base.empty()) return tree_product2_at_origin(space, x, y);
  const Word o_inv = space.group().inverse(base);
  return tree_product2_at_origin(space, translate_arg(space, o_inv, x),
                                 translate_arg(space, o_inv, y));
}

double ext_product(const SpaceModel& space, const ProductArg& x,
                   const ProductArg& y, const Word& base) {
  if (space.is_tree()) {
    const std::int64_t v2 = ext_product2(space, x, y, base);
    if (v2 == kInf2) return std::numeric_limits<double>::infinity();
    return 0.5 * static_cast<double>(v2);
  }
  if (std::holds_alternative<BoundaryPoint>(x) && same_point(space, x, y))
    return std::numeric_limits<double>::infinity();
  if (base.empty()) return disk_product_at_origin(space, x, y);
  const Word o_inv = space.group().inverse(base);
  return disk_product_at_origin(space, translate_arg(space, o_inv, x),
                                translate_arg(space, o_inv, y));
}

BoundaryPoint boundary_act(const SpaceModel& space, const Word& g,
                           const BoundaryPoint& xi) {
  if (xi.is_ray())
    return BoundaryPoint::ray(translate(space.group(), g, xi.as_ray()));
  const Mobius m = space.disk().matrix(g);
  return BoundaryPoint::angle(std::arg(m.apply(std::polar(1.0, xi.as_angle()))));
}

double dcheck(const SpaceModel& space, const VisualMetricParams& vm,
              const BoundaryPoint& xi, const BoundaryPoint& eta) {
  const double p = ext_product(space, ProductArg(xi), ProductArg(eta), Word());
  if (std::isinf(p)) return 0.0;
  return std::exp(-vm.epsilon0 * p);
}

double cross_ratio(const SpaceModel& space, const VisualMetricParams& vm,
                   const BoundaryPoint& z1, const BoundaryPoint& z2,
                   const BoundaryPoint& z3, const BoundaryPoint& z4) {
  const BoundaryPoint* zs[4] = {&z1, &z2, &z3, &z4};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (same_point(space, ProductArg(*zs[i]), ProductArg(*zs[j])))
        throw Error(ErrorKind::DegenerateInput,
                    "cross-ratio needs four pairwise distinct boundary points");
  const Word base;
  const double e13 = ext_product(space, ProductArg(z1), ProductArg(z3), base);
  const double e24 = ext_product(space, ProductArg(z2), ProductArg(z4), base);
  const double e14 = ext_product(space, ProductArg(z1), ProductArg(z4), base);
  const double e23 = ext_product(space, ProductArg(z2), ProductArg(z3), base);
  return std::exp(-vm.epsilon0 * (e13 + e24 - e14 - e23));
}

double metric_derivative(const SpaceModel& space, const VisualMetricParams& vm,
                         const Word& g, const BoundaryPoint& xi) {
  const BoundaryPoint gxi = boundary_act(space, g, xi);
  const double prod = ext_product(space, ProductArg(gxi), ProductArg(g), Word());
  const double d = space.distance(Word(), g);
  return std::exp(-vm.epsilon0 * (2.0 * prod - d));
}

bool moebius_identity_check(const SpaceModel& space, const VisualMetricParams& vm,
                            const Word& g, const BoundaryPoint& xi,
                            const BoundaryPoint& eta) {
  if (same_point(space, ProductArg(xi), ProductArg(eta)))
    throw Error(ErrorKind::DegenerateInput,
                "Moebius identity check needs distinct boundary points");
  const BoundaryPoint gxi = boundary_act(space, g, xi);
  const BoundaryPoint geta = boundary_act(space, g, eta);
  const Word base;
  if (space.is_tree()) {
    // In doubled-exponent units the identity d^2(g xi, g eta) =
    // |g'|(xi) |g'|(eta) d^2(xi, eta) reads
    //   2(g xi, g eta) = 2(g xi, gp) + 2(g eta, gp) - 2 d(p, gp) + 2(xi, eta).
    const std::int64_t lhs = ext_product2(space, ProductArg(gxi), ProductArg(geta), base);
    const std::int64_t pxi = ext_product2(space, ProductArg(gxi), ProductArg(g), base);
    const std::int64_t peta = ext_product2(space, ProductArg(geta), ProductArg(g), base);
    const std::int64_t exi = ext_product2(space, ProductArg(xi), ProductArg(eta), base);
    const auto dg = static_cast<std::int64_t>(space.distance(Word(), g));
    return lhs == pxi + peta - 2 * dg + exi;
  }
  const double lhs = std::pow(dcheck(space, vm, gxi, geta), 2.0);
  const double rhs = metric_derivative(space, vm, g, xi) *
                     metric_derivative(space, vm, g, eta) *
                     std::pow(dcheck(space, vm, xi, eta), 2.0);
  return std::abs(lhs - rhs) <= kTol * std::max(std::abs(lhs), std::abs(rhs));
}

double lipschitz_constant(const SpaceModel& space, const VisualMetricParams& vm,
                          const Word& g, std::int64_t sample_depth) {
  if (!space.is_tree())
    throw Error(ErrorKind::ModelMismatch,
                "exact Lipschitz certificates require a tree backend");
  const auto dg = static_cast<std::int64_t>(space.distance(Word(), g));
  if (sample_depth < dg + 2)
    throw Error(ErrorKind::Depth, "sample depth must be at least d(p, gp) + 2");
  const std::vector<Word> cells = space.cells_at_depth(sample_depth);
  const GroupModel& gm = space.group();

  // (gp, xi) is cell-constant at this depth; precompute per cell.
  std::vector<std::int64_t> beta2(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i)
    beta2[i] = ext_gromov2(gm, g, cells[i]);

  double best = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      const std::int64_t num2 = std::llabs(beta2[i] - beta2[j]);
      if (num2 == 0) continue;
      const std::int64_t pair2 = ext_gromov2(gm, cells[i], cells[j]);
      const double ratio = 0.5 * static_cast<double>(num2) *
                           std::exp(vm.epsilon0 * 0.5 * static_cast<double>(pair2));
      best = std::max(best, ratio);
    }
  }
  return best;
}

}  // namespace hyp
