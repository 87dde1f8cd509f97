#pragma once

#include <map>
#include <unordered_map>
#include <optional>

#include "hyp/space.hpp"

namespace hyp {

/// Log-linear fit of ln N_R against R.
struct CriticalExponentEstimate {
  double delta_hat = 0.0;          // least-squares slope over the fit window
  std::int64_t fit_min = 0, fit_max = 0;
  double residual = 0.0;           // RMS residual of the fit
  std::optional<double> analytic;  // closed form when the family has one
  bool used_analytic = false;
  double used() const { return used_analytic && analytic ? *analytic : delta_hat; }
};

/// Growth rate of the model group itself: ln of the Perron eigenvalue of the
/// unit-step transition matrix on tree backends (ln(2k-1) for free groups),
/// nothing on the disk.
std::optional<double> analytic_delta(const SpaceModel& space);

CriticalExponentEstimate critical_exponent(const SpaceModel& space, std::int64_t R_max);
CriticalExponentEstimate critical_exponent_orbit(const SpaceModel& space,
                                                 const std::vector<Word>& generators,
                                                 std::int64_t R_max);

/// t-schedule for the Patterson-Sullivan limit: t_n = delta + offsets[n]
/// with offsets strictly decreasing, at fixed enumeration radius.
struct Schedule {
  std::vector<double> t_offsets{0.2, 0.1, 0.05, 0.025};
  std::int64_t radius = 12;
  void validate() const;
};

/// Masses of the depth-n cylinder cells, cells in length-lex order.
struct DiscreteBoundaryMeasure {
  std::int64_t depth = 0;
  std::vector<std::pair<Word, double>> cells;
  double interior_remainder = 0.0;  // raw mu_t mass below the cell depth
  double total_mass = 0.0;
  double phi = 0.0;                  // normalizer of the producing stage
  double cauchy_gap = 0.0;           // ps_measure: gap between last two stages
  std::vector<double> stage_phis;    // ps_measure: Phi along the schedule
  double delta_used = 0.0;
  bool delta_analytic = false;

  double cell_mass(const Word& w) const;
  /// Mass of a cylinder of depth <= this measure's depth (sum over the
  /// descendant cells).
  double cylinder_mass(const GroupModel& model, const Word& w) const;
  /// Max refinement defect |mass(w) - sum of children| over depths < depth.
  double refinement_defect(const SpaceModel& space) const;

 private:
  mutable std::map<std::vector<Syllable>, double> index_;
  void build_index() const;
};

/// The normalized orbit sum mu_t at one (t, R), masses binned into depth
/// cells with the below-depth mass reported as the interior remainder.
DiscreteBoundaryMeasure mu_t(const SpaceModel& space, double t, std::int64_t R,
                             std::int64_t depth);
DiscreteBoundaryMeasure mu_t_orbit(const SpaceModel& space,
                                   const std::vector<Word>& generators, double t,
                                   std::int64_t R, std::int64_t depth);

/// Patterson-Sullivan approximant: boundary-conditional cell masses at the
/// last schedule stage plus the Cauchy gap against the previous one. Throws
/// Convergence when the gap exceeds the tolerance.
DiscreteBoundaryMeasure ps_measure(const SpaceModel& space, const Schedule& schedule,
                                   std::int64_t depth, double cauchy_tolerance);

/// Read-side interface for cylinder masses: the empirical measure above or
/// the exact Markov form below.
class CylinderMeasure {
 public:
  virtual ~CylinderMeasure() = default;
  virtual double cylinder_mass(const Word& w) const = 0;
  virtual std::int64_t max_depth() const = 0;  // largest certified cylinder depth
};

class EmpiricalMeasure final : public CylinderMeasure {
 public:
  EmpiricalMeasure(const SpaceModel& space, DiscreteBoundaryMeasure m)
      : model_(space.group()), m_(std::move(m)) {}
  /// Memoized; not safe for concurrent first-time queries.
  double cylinder_mass(const Word& w) const override {
    const auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
    const double v = m_.cylinder_mass(model_, w);
    memo_.emplace(w, v);
    return v;
  }
  std::int64_t max_depth() const override { return m_.depth; }
  const DiscreteBoundaryMeasure& raw() const { return m_; }

 private:
  GroupModel model_;
  DiscreteBoundaryMeasure m_;
  mutable std::unordered_map<Word, double, WordHash> memo_;
};

/// Exact limit measure on tree backends: the Markov measure
/// mass([w]) = C e^{-delta |w|} u(state of the last step of w), with u the
/// Perron right eigenvector of the step transition matrix. Refinement
/// consistency holds by the eigenvalue equation; for free groups this is the
/// uniform cylinder measure 1/(2k (2k-1)^{n-1}).
class AnalyticTreeMeasure final : public CylinderMeasure {
 public:
  explicit AnalyticTreeMeasure(const SpaceModel& space);
  double cylinder_mass(const Word& w) const override;
  std::int64_t max_depth() const override { return 1 << 30; }
  double delta() const { return delta_; }

 private:
  GroupModel model_;
  double delta_ = 0.0;
  double norm_ = 0.0;
  std::vector<double> u_;  // per unit-step state
};

/// Max over depth cells fully translated by g of the relative error between
/// nu(gC)/nu(C) and exp(delta (2(xi, g^-1 p) - d(p, g^-1 p))) on C.
double rn_max_rel_error(const SpaceModel& space, const CylinderMeasure& nu,
                        double delta, const Word& g, std::int64_t depth);

/// Bowen-Margulis mass of a cylinder pair.
struct BmResult {
  double value = 0.0;
  double certified_error = 0.0;
  bool diagonal = false;
};

/// Off-diagonal pairs are exact: the pair Gromov product is constant on
/// disjoint cylinders. The diagonal is summed level by level with a
/// geometric tail certificate; when the level ratio stays >= 1 (always, on
/// tree backends with 2 delta >= growth) it throws Divergence.
BmResult bm_pair_measure(const SpaceModel& space, const CylinderMeasure& nu,
                         double delta, const Word& C, const Word& D,
                         int diag_depth = 20);

/// Max invariance defect |BM(gC, gD)/BM(C, D) - 1| over ordered pairs of
/// distinct depth cells.
double bm_invariance_defect(const SpaceModel& space, const CylinderMeasure& nu,
                            double delta, const Word& g, std::int64_t depth);

}  // namespace hyp
