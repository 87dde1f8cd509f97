#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "hyp/boundary_point.hpp"
#include "hyp/disk.hpp"
#include "hyp/word.hpp"

namespace hyp {

/// Exact per-radius vertex counts of a ball around the base point.
struct BallStats {
  std::int64_t radius = 0;
  std::vector<std::int64_t> sphere;      // sphere[r], r = 0..radius
  std::vector<std::int64_t> cumulative;  // N_r
};

/// Extension-count tables for tree backends: counts of reduced extensions by
/// exactly r unit steps, from the root and from a vertex whose last unit
/// step has a given state. Stored as doubles (they feed weighted sums).
struct ExtensionCounts {
  std::vector<std::vector<double>> by_state;  // [r][state]
  std::vector<double> from_root;              // [r]
};

/// A concrete orbit model: a free group or free product acting on its own
/// Cayley graph (tree backend, exact integer metric) or a Schottky group
/// acting on the hyperbolic disk (numeric metric). Orbit points are reduced
/// words in both cases; only the metric differs.
class SpaceModel {
 public:
  enum class Kind { FreeGroup, FreeProduct, SchottkyDisk };

  static SpaceModel free_group(int rank);
  static SpaceModel free_product(const std::vector<std::uint32_t>& orders);
  static SpaceModel schottky(const std::vector<std::array<double, 4>>& matrices);
  static SpaceModel schottky_demo();

  Kind kind() const { return kind_; }
  bool is_tree() const { return kind_ != Kind::SchottkyDisk; }
  const GroupModel& group() const { return group_; }
  const DiskModel& disk() const;
  const std::string& id() const { return id_; }

  // --- metric -------------------------------------------------------------

  double distance(const Word& x, const Word& y) const;
  double gromov_product(const Word& x, const Word& y, const Word& base) const;
  /// Doubled Gromov product, exact; tree backends only.
  std::int64_t gromov2(const Word& x, const Word& y, const Word& base) const;
  /// |(x,y)_o - (x,y)_p| <= d(o,p)
  bool base_point_shift_check(const Word& x, const Word& y, const Word& o,
                              const Word& p) const;

  /// Least delta so that (x,y) >= min((x,z),(y,z)) - delta holds for every
  /// index triple of the sample, base point at the identity.
  double four_point_delta(const std::vector<Word>& sample, int threads = 1) const;

  // --- enumeration ----------------------------------------------------------

  /// Exact sphere counts (tree: transfer recurrence; disk: enumeration of
  /// orbit points with metric distance <= R, bucketed by word length).
  BallStats ball_stats(std::int64_t R) const;

  /// Streams every orbit word with d(p, w p) <= R in length-lexicographic
  /// order; no materialization.
  void for_each_word(double R,
                     const std::function<void(const Word&, double)>& fn) const;

  /// Materializes the ball; throws Resource (with nothing written) when the
  /// projected footprint exceeds the budget.
  std::vector<Word> enumerate_ball(double R, std::uint64_t memory_budget_bytes) const;

  /// All depth-n cylinder prefixes (= sphere-n vertices), length-lex order.
  std::vector<Word> cells_at_depth(std::int64_t n) const;
  /// Children of a cell in the cylinder tree.
  std::vector<Word> cell_children(const Word& w) const;

  ExtensionCounts extension_counts(std::int64_t R) const;

  /// Elements of the subgroup generated by `gens` whose orbit point lies in
  /// the R-ball. BFS with an expansion horizon of R + 2 max|s|; exact for
  /// the generator sets exercised here (documented semi-decision).
  std::vector<Word> orbit_ball(const std::vector<Word>& gens, double R,
                               std::uint64_t max_elements = 5'000'000) const;

 private:
  SpaceModel(Kind kind, GroupModel group, std::shared_ptr<const DiskModel> disk);

  Kind kind_;
  GroupModel group_;
  std::shared_ptr<const DiskModel> disk_;
  std::string id_;
};

}  // namespace hyp
