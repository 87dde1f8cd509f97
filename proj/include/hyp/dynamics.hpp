#pragma once

#include <optional>

#include "hyp/boundary.hpp"

namespace hyp {

/// Isometry type of a group element. The supported backends only realize
/// elliptic (torsion / identity) and hyperbolic elements; parabolics do not
/// occur and the enum reflects that.
struct IsometryClass {
  enum class Kind { Elliptic, Hyperbolic };
  Kind kind = Kind::Elliptic;
  double translation_length = 0.0;  // exact integer on tree backends
  std::optional<BoundaryPoint> fix_attracting;
  std::optional<BoundaryPoint> fix_repelling;

  bool hyperbolic() const { return kind == Kind::Hyperbolic; }
};

/// Classifies g: cyclic reduction on trees (translation length = length of
/// the cyclically reduced core, fixed points = core rays conjugated back),
/// matrix trace on the disk backend.
IsometryClass classify(const SpaceModel& space, const Word& g);

/// Tree-level classification shared by all backends (a Schottky group is
/// abstractly free, so its dynamics can be certified on words exactly).
struct WordDynamics {
  bool hyperbolic = false;
  std::int64_t translation_length = 0;
  std::optional<BoundaryRay> fix_plus, fix_minus;
};
WordDynamics word_dynamics(const GroupModel& model, const Word& g);

/// Depth-n cylinder cells that contain orbit points of norm >= depth,
/// deduplicated and in length-lex order. Monotone under depth refinement.
std::vector<Word> limit_set_sample(const SpaceModel& space,
                                   const std::vector<Word>& generators,
                                   std::int64_t depth);

enum class NonElementary { No, Yes, Inconclusive };

/// Semi-decision: Yes needs >= 3 limit cells plus two hyperbolic elements
/// with disjoint fixed pairs; No is reported when the sampled limit set
/// stays below 3 cells and every hyperbolic element found shares one fixed
/// pair; anything else is Inconclusive, never a guess.
NonElementary is_non_elementary(const SpaceModel& space,
                                const std::vector<Word>& generators,
                                std::int64_t certification_depth = 6);

const char* to_string(NonElementary v);

}  // namespace hyp
