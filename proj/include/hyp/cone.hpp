#pragma once

#include "hyp/cocycle.hpp"
#include "hyp/dynamics.hpp"

namespace hyp {

/// Point of the cone C = boundary x (0, infinity).
struct ConePoint {
  BoundaryPoint xi;
  double t = 1.0;
};

/// iota((xi,a),(eta,b)) = a b dcheck(xi, eta).
double iota(const SpaceModel& space, const VisualMetricParams& vm,
            const ConePoint& x, const ConePoint& y);

/// Scale factor of the cone action at xi: |g'|(xi)^{-1/2}. This is the
/// unique per-point scale that makes iota invariant under the diagonal
/// action (the Moebius identity turns the requirement c(xi) c(eta) =
/// dcheck(xi,eta)/dcheck(g xi, g eta) into exactly |g'|^{-1/2}).
double bullet_scale(const SpaceModel& space, const VisualMetricParams& vm,
                    const Word& g, const BoundaryPoint& xi);

/// Tree-exact exponent: scale = exp(eps0/2 * E) with integer
/// E = 2(g xi, g p) - d(p, gp).
std::int64_t bullet_scale_exp(const SpaceModel& space, const Word& g,
                              const BoundaryPoint& xi);

ConePoint bullet(const SpaceModel& space, const VisualMetricParams& vm,
                 const Word& g, const ConePoint& x);

/// Exact integer check of iota(g.x, g.y) = iota(x, y) on tree backends.
bool bullet_invariance_exact(const SpaceModel& space, const Word& g,
                             const BoundaryPoint& xi, const BoundaryPoint& eta);

/// lambda > 1 with g . g+ = lambda g+; throws Classification on elliptic
/// input. On trees lambda = exp(eps0 l(g) / 2) exactly.
double eigenvalue_lambda(const SpaceModel& space, const VisualMetricParams& vm,
                         const Word& g);

/// Homogeneous length function on the cone: the canonical l(xi, t) = t or
/// the axis form f(xi) = iota(xi, g+) + iota(xi, g-) of a hyperbolic g.
class LengthFunction {
 public:
  static LengthFunction canonical();
  static LengthFunction axis(const SpaceModel& space, const Word& g);

  bool is_axis() const { return axis_.has_value(); }
  double value(const SpaceModel& space, const VisualMetricParams& vm,
               const BoundaryPoint& xi) const;  // f(xi, 1)
  double value(const SpaceModel& space, const VisualMetricParams& vm,
               const ConePoint& x) const;       // homogeneous: t f(xi, 1)
  const Word& axis_word() const;
  const BoundaryPoint& fix_plus() const;
  const BoundaryPoint& fix_minus() const;

 private:
  struct Axis {
    Word g;
    BoundaryPoint plus, minus;
    Axis(Word w, BoundaryPoint p, BoundaryPoint m)
        : g(std::move(w)), plus(std::move(p)), minus(std::move(m)) {}
  };
  std::optional<Axis> axis_;
};

/// t_xi = iota(xi, g-) / (iota(xi, g+) + iota(xi, g-)) in [0, 1];
/// 1 at the attracting and 0 at the repelling fixed point.
double t_coordinate(const SpaceModel& space, const VisualMetricParams& vm,
                    const Word& g, const BoundaryPoint& xi);

/// One step of the induced circle dynamics: lambda t / (lambda^{-1}(1-t) +
/// lambda t). Fixed points exactly {0, 1}; strictly increasing on (0,1).
double t_recurrence(double lambda, double t);

/// Depth cells labeled by their A_n block. Cells that contain a fixed point
/// (prefixes of its stream) straddle infinitely many blocks and are flagged
/// for refinement instead of being mislabeled.
struct AnPartition {
  std::vector<std::pair<Word, std::int64_t>> labeled;  // cell -> n
  std::vector<Word> flagged;
};

AnPartition a_n_partition(const SpaceModel& space, const VisualMetricParams& vm,
                          const Word& g, std::int64_t depth);

/// Exact prefix-free cylinder cover of A_n (tree backends).
std::vector<Word> a_n_cover(const SpaceModel& space, const Word& g, std::int64_t n);

/// Prefix-free normal form of a union of cylinders: drops dominated
/// cylinders and merges complete sibling families, so two unions are equal
/// as boundary regions iff their normal forms are equal.
std::vector<Word> region_normal_form(const SpaceModel& space,
                                     std::vector<Word> cylinders);

/// K_f(g, xi, eta) = beta_g(xi,eta) - (1/2 delta)[ln RN_f(xi) - ln RN_f(eta)]
/// computed from the definition of the f-model measure nu_{f,G}
/// (density f(xi,1)^{-delta/eps0} against nu): RN_f(xi) =
/// exp(delta (2(xi,gp) - |g|)) (f(xi)/f(g^-1 xi))^{delta/eps0}. Vanishes
/// identically for the canonical length function.
double kf_residual(const SpaceModel& space, const VisualMetricParams& vm,
                   double delta, const LengthFunction& f, const Word& g,
                   const BoundaryPoint& xi, const BoundaryPoint& eta);

/// Growth experiment: the series ||beta_{g^n}||_p^p over the given powers,
/// an affine fit against n, and the block lower bound of the A_i x A_{i+k}
/// machinery.
struct GrowthPoint {
  std::int64_t n = 0;
  double value = 0.0;
  double certified_error = 0.0;
  bool certified = true;
  std::int64_t certified_blocks = 0;
  double block_lower_bound = 0.0;
};

struct GrowthResult {
  std::vector<GrowthPoint> series;
  double slope = 0.0, intercept = 0.0, rel_residual = 0.0;
  double lambda = 0.0;
  double kf_bound = 0.0;
  std::int64_t k = 0;             // block offset from the k ln lambda rule
  double bm_block_mass = 0.0;     // mu^BM(A_0 x A_k)
  std::string verdict;            // "unbounded-consistent" or "inconclusive"
  std::int64_t depth = 0;
};

GrowthResult growth_experiment(const SpaceModel& space, const CylinderMeasure& nu,
                               const VisualMetricParams& vm, double delta,
                               const Word& g, double p,
                               const std::vector<std::int64_t>& powers,
                               std::int64_t depth);

}  // namespace hyp
