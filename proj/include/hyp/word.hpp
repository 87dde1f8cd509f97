#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyp/errors.hpp"

namespace hyp {

/// One free factor of the group model. order == 0 means infinite cyclic.
struct Factor {
  std::uint32_t order = 0;
};

/// A maximal run g^e inside a reduced word, g the generator of `factor`.
/// Invariants: exp != 0; for a finite factor of order n, 1 <= exp <= n-1.
struct Syllable {
  std::int32_t factor = 0;
  std::int64_t exp = 0;
  friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

/// Reduced word in a free product of cyclic groups. Adjacent syllables come
/// from distinct factors; reduction is the constructor's job (see GroupModel).
class Word {
 public:
  Word() = default;

  bool empty() const { return syl_.empty(); }
  std::size_t syllable_count() const { return syl_.size(); }
  const std::vector<Syllable>& syllables() const { return syl_; }
  const Syllable& front() const { return syl_.front(); }
  const Syllable& back() const { return syl_.back(); }

  friend bool operator==(const Word&, const Word&) = default;

 private:
  friend class GroupModel;
  explicit Word(std::vector<Syllable> syl) : syl_(std::move(syl)) {}
  std::vector<Syllable> syl_;
};

struct WordHash {
  std::size_t operator()(const Word& w) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const Syllable& s : w.syllables()) {
      h = (h ^ static_cast<std::uint64_t>(s.factor)) * 0x100000001b3ULL;
      h = (h ^ static_cast<std::uint64_t>(s.exp)) * 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

/// w = conj * core * conj^{-1} with core cyclically reduced: if core has two
/// or more syllables its first and last syllables lie in distinct factors.
struct CyclicForm {
  Word conj;
  Word core;
};

/// Free product of cyclic groups Z or Z/n. Owns the alphabet (letter i of
/// factor i is 'a'+i, uppercase for inverses) and all word arithmetic.
///
/// The word metric counts unit steps: one per letter for infinite factors,
/// one per nontrivial factor element for finite factors (every nontrivial
/// power of a finite-order generator is itself a generator). The Cayley
/// graph is a tree for free groups and a tree of cliques for free products;
/// both satisfy the four-point condition with defect zero.
class GroupModel {
 public:
  static GroupModel free_group(int rank);
  static GroupModel free_product(const std::vector<std::uint32_t>& orders);

  int factor_count() const { return static_cast<int>(factors_.size()); }
  std::uint32_t order(int f) const { return factors_[static_cast<std::size_t>(f)].order; }
  bool infinite(int f) const { return order(f) == 0; }
  bool is_free_group() const;
  char letter(int f) const { return static_cast<char>('a' + f); }

  /// Reduces an arbitrary syllable sequence.
  Word word(const std::vector<Syllable>& raw) const;
  Word mul(const Word& a, const Word& b) const;
  Word mul(const Word& a, const Word& b, const Word& c) const;
  Word inverse(const Word& w) const;
  Word pow(const Word& w, std::int64_t n) const;

  /// Metric length (number of unit steps).
  std::int64_t length(const Word& w) const;
  std::int64_t distance(const Word& x, const Word& y) const;

  /// Parses "1" (identity) or a string of letters; uppercase = inverse.
  Word parse(std::string_view text) const;
  std::string str(const Word& w) const;

  /// Throws ModelMismatch if w does not belong to this model's alphabet.
  void validate(const Word& w) const;

  // --- unit-step view -----------------------------------------------------

  /// Expands a word into unit steps: (f,+-1) per letter for infinite
  /// factors, one syllable per step for finite factors.
  std::vector<Syllable> steps(const Word& w) const;
  Word from_steps(const std::vector<Syllable>& st) const { return word(st); }
  Word prefix_steps(const Word& w, std::int64_t k) const;

  static std::int64_t common_steps(const std::vector<Syllable>& a,
                                   const std::vector<Syllable>& b);

  /// True when two distinct unit steps lie in the same finite factor; such
  /// siblings are adjacent in the Cayley graph (clique edge), which is what
  /// produces half-integer Gromov products on free-product backends.
  bool clique_siblings(const Syllable& s, const Syllable& t) const;

  /// All unit steps in canonical order (factor ascending; +1 before -1 for
  /// infinite factors; exponents ascending for finite ones).
  const std::vector<Syllable>& unit_steps() const { return unit_steps_; }
  int step_state(const Syllable& s) const;

  /// Unit steps that may extend a reduced word ending with `last` such that
  /// the metric length grows by one (root: pass nullopt).
  std::vector<Syllable> allowed_steps(const std::optional<Syllable>& last) const;
  bool step_allowed(const std::optional<Syllable>& last, const Syllable& next) const;

  // --- structure ----------------------------------------------------------

  CyclicForm cyclic_reduce(const Word& w) const;
  bool torsion_core(const Word& core) const;
  /// core = root^m with root primitive (not a proper power); core nonempty.
  Word primitive_root(const Word& core) const;

  /// Length-lexicographic order (metric length, then canonical step order).
  std::strong_ordering cmp(const Word& a, const Word& b) const;
  int step_rank(const Syllable& s) const;

  /// Canonical JSON-ish identity string, used in cache keys and mismatch
  /// diagnostics.
  const std::string& id() const { return id_; }

 private:
  explicit GroupModel(std::vector<Factor> factors);
  Syllable normalized(Syllable s) const;

  std::vector<Factor> factors_;
  std::vector<Syllable> unit_steps_;
  std::vector<int> state_offset_;  // per factor, index of its first unit step
  std::string id_;
};

struct WordLess {
  const GroupModel* model;
  bool operator()(const Word& a, const Word& b) const {
    return model->cmp(a, b) == std::strong_ordering::less;
  }
};

}  // namespace hyp
