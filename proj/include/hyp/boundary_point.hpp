#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hyp/word.hpp"

namespace hyp {

/// Sentinel for an infinite Gromov product (doubled-integer convention).
inline constexpr std::int64_t kInf2 = std::numeric_limits<std::int64_t>::max();

/// Boundary point of a tree backend: the infinite reduced word
/// pre * per * per * ... stored in canonical form, so equality of boundary
/// points is plain structural equality.
///
/// Canonical means: the step stream of pre followed by repeated per is
/// literally reduced, per is primitive (not a proper power of a shorter
/// word), and pre is minimal (no suffix of pre matches the incoming
/// periodic tail). Only eventually-periodic points are representable; they
/// are exactly the fixed points of hyperbolic elements and their orbit
/// translates, and they are closed under the group action.
class BoundaryRay {
 public:
  const Word& preperiod() const { return pre_; }
  const Word& period() const { return per_; }
  const std::vector<Syllable>& pre_steps() const { return pre_steps_; }
  const std::vector<Syllable>& per_steps() const { return per_steps_; }

  const Syllable& step_at(std::int64_t i) const {
    const auto np = static_cast<std::int64_t>(pre_steps_.size());
    if (i < np) return pre_steps_[static_cast<std::size_t>(i)];
    return per_steps_[static_cast<std::size_t>((i - np) % static_cast<std::int64_t>(per_steps_.size()))];
  }

  friend bool operator==(const BoundaryRay&, const BoundaryRay&) = default;

 private:
  friend BoundaryRay make_ray(const GroupModel&, const Word&, const Word&);
  Word pre_, per_;
  std::vector<Syllable> pre_steps_, per_steps_;
};

/// Builds the boundary point u * v^infinity in canonical form.
/// Throws DegenerateInput when v has finite order (the power sequence does
/// not tend to infinity).
BoundaryRay make_ray(const GroupModel& model, const Word& u, const Word& v);

/// g . xi, the boundary action of a group element.
BoundaryRay translate(const GroupModel& model, const Word& g, const BoundaryRay& xi);

/// First k steps of the ray as a word (the depth-k cylinder containing it).
Word ray_prefix(const GroupModel& model, const BoundaryRay& xi, std::int64_t k);

/// Serialization "u|v" used by the CLI ("1" stands for the empty preperiod).
std::string ray_str(const GroupModel& model, const BoundaryRay& xi);
BoundaryRay parse_ray(const GroupModel& model, const std::string& text);

/// Where two step streams first disagree.
struct Confluence {
  std::int64_t common = 0;  // number of shared leading unit steps
  bool infinite = false;    // streams identical (boundary points equal)
  bool exhausted = false;   // one side is a finite word and a prefix of the other
  Syllable left{}, right{}; // deviating steps when !infinite && !exhausted
};

Confluence confluence(const GroupModel& model, const Word& a, const Word& b);
Confluence confluence(const GroupModel& model, const Word& a, const BoundaryRay& b);
Confluence confluence(const GroupModel& model, const BoundaryRay& a, const BoundaryRay& b);

/// Twice the Gromov product of two stream objects (words or rays) based at
/// the identity vertex. Exact: integers for free groups, half-integers
/// (odd doubled values) on free products where the deviating steps span a
/// clique. Returns kInf2 for equal boundary points.
template <typename A, typename B>
std::int64_t ext_gromov2(const GroupModel& model, const A& a, const B& b) {
  const Confluence c = confluence(model, a, b);
  if (c.infinite) return kInf2;
  std::int64_t v = 2 * c.common;
  if (!c.exhausted && model.clique_siblings(c.left, c.right)) v += 1;
  return v;
}

}  // namespace hyp
