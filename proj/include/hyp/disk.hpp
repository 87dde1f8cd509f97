#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "hyp/word.hpp"

namespace hyp {

using Complex = std::complex<double>;

/// Moebius transformation of the unit disk, stored as a det-1 complex 2x2
/// matrix acting by z -> (m00 z + m01) / (m10 z + m11).
struct Mobius {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();

  static Mobius from_matrix(const Eigen::Matrix2cd& raw);
  /// Conjugates an SL(2,R) upper-half-plane matrix to the disk model.
  static Mobius from_sl2r(double a, double b, double c, double d);

  Complex apply(Complex z) const;
  Mobius compose(const Mobius& rhs) const;  // this after rhs
  Mobius inverse() const;
  double trace_abs() const;
};

/// Euclidean isometric circle of a Moebius map (|m10 z + m11| = 1).
struct IsometricDisk {
  Complex center;
  double radius = 0.0;
};

/// Hyperbolic distance in the Poincare disk. Fixed evaluation formula:
/// acosh(1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2))).
double disk_distance(Complex x, Complex y);

/// Gromov product of interior points with interior base.
double disk_gromov(Complex x, Complex y, Complex base);

/// Continuous extensions of the Gromov product based at the origin:
/// boundary x boundary and boundary x interior, in closed form.
double disk_gromov_boundary(double theta1, double theta2);
double disk_gromov_mixed(double theta, Complex y);

/// Classical Schottky group in the disk: free group whose generators have
/// pairwise disjoint isometric disks (checked at construction, together
/// with the base point lying outside all of them). Orbit points are indexed
/// by reduced words of the underlying free group model.
class DiskModel {
 public:
  /// One SL(2,R) matrix [a b; c d] per generator, det 1.
  explicit DiskModel(const std::vector<std::array<double, 4>>& sl2r_generators);

  /// The demo pair of hyperbolic translations with orthogonal axes and
  /// translation length 2 ln 3.
  static DiskModel demo();

  int rank() const { return static_cast<int>(gens_.size()); }
  const GroupModel& group() const { return group_; }

  Mobius matrix(const Word& w) const;
  Complex point(const Word& w) const { return matrix(w).apply(Complex(0, 0)); }

  double distance(const Word& x, const Word& y) const;
  const Mobius& generator(int f, bool inverse) const;
  const IsometricDisk& disk_of(int f, bool inverse) const;

  /// Attracting / repelling fixed points on the circle of a hyperbolic map.
  struct FixedPoints {
    double attracting;  // angle in [0, 2pi)
    double repelling;
  };
  std::optional<FixedPoints> fixed_points(const Mobius& m) const;

  /// Largest observed displacement of the base point by one generator; used
  /// as pruning slack in orbit enumeration.
  double max_step() const { return max_step_; }

  /// Symbolic coding: index of the unit step whose isometric disk contains
  /// z, or nullopt if z lies outside all of them.
  std::optional<Syllable> capturing_step(Complex z) const;

 private:
  GroupModel group_;
  std::vector<Mobius> gens_;       // generator per factor
  std::vector<Mobius> gens_inv_;
  std::vector<IsometricDisk> disks_;      // generator disks
  std::vector<IsometricDisk> disks_inv_;  // inverse disks
  double max_step_ = 0.0;
};

}  // namespace hyp
