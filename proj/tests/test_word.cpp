#include <doctest.h>

#include "hyp/rng.hpp"
#include "hyp/word.hpp"

using namespace hyp;

namespace {

Word random_word(const GroupModel& m, Rng& rng, int len) {
  std::vector<Syllable> st;
  std::optional<Syllable> last;
  for (int i = 0; i < len; ++i) {
    const auto choices = m.allowed_steps(last);
    const Syllable s = choices[rng.below(choices.size())];
    st.push_back(s);
    last = s;
  }
  return m.from_steps(st);
}

}  // namespace

TEST_CASE("free group reduction and length") {
  const GroupModel f2 = GroupModel::free_group(2);
  CHECK(f2.parse("1").empty());
  CHECK(f2.length(f2.parse("ab")) == 2);
  CHECK(f2.str(f2.parse("aA")) == "1");
  CHECK(f2.str(f2.parse("abBA")) == "1");
  CHECK(f2.str(f2.parse("abBa")) == "aa");
  CHECK(f2.length(f2.parse("aab")) == 3);

  // d(1, ab) = 2, d(a, Ab) = |A * Ab| = |AAb| = 3, d(x, x) = 0
  CHECK(f2.distance(f2.parse("1"), f2.parse("ab")) == 2);
  CHECK(f2.distance(f2.parse("a"), f2.parse("Ab")) == 3);
  CHECK(f2.distance(f2.parse("aBab"), f2.parse("aBab")) == 0);
}

TEST_CASE("inverse and multiplication are consistent") {
  const GroupModel f2 = GroupModel::free_group(2);
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Word w = random_word(f2, rng, static_cast<int>(rng.below(9)));
    const Word u = random_word(f2, rng, static_cast<int>(rng.below(9)));
    CHECK(f2.mul(w, f2.inverse(w)).empty());
    CHECK(f2.inverse(f2.mul(w, u)) == f2.mul(f2.inverse(u), f2.inverse(w)));
    CHECK(f2.length(f2.mul(w, u)) <= f2.length(w) + f2.length(u));
  }
}

TEST_CASE("free product normal form") {
  const GroupModel m = GroupModel::free_product({2, 3});
  // b has order 3: B = b^2, bbb = 1, a has order 2: A = a
  CHECK(m.str(m.parse("bbb")) == "1");
  CHECK(m.parse("B") == m.parse("bb"));
  CHECK(m.parse("A") == m.parse("a"));
  CHECK(m.length(m.parse("bb")) == 1);  // b^2 is a single generator step
  CHECK(m.length(m.parse("ab")) == 2);
  CHECK(m.length(m.parse("aB")) == 2);
  // clique edge inside the Z/3 factor
  CHECK(m.distance(m.parse("b"), m.parse("bb")) == 1);
  CHECK(m.distance(m.parse("1"), m.parse("ab")) == 2);
  CHECK(m.mul(m.parse("b"), m.parse("bb")).empty());
  CHECK(m.str(m.inverse(m.parse("ab"))) == "Ba");

  CHECK_THROWS_AS((void)GroupModel::free_product({2, 2}), Error);
  CHECK_NOTHROW((void)GroupModel::free_product({2, 2, 2}));
}

TEST_CASE("prefixes and unit steps") {
  const GroupModel f2 = GroupModel::free_group(2);
  const Word w = f2.parse("aaBa");
  const auto st = f2.steps(w);
  REQUIRE(st.size() == 4);
  CHECK(f2.str(f2.prefix_steps(w, 2)) == "aa");
  CHECK(f2.str(f2.prefix_steps(w, 3)) == "aaB");
  CHECK(GroupModel::common_steps(f2.steps(f2.parse("aab")), st) == 2);

  const GroupModel m = GroupModel::free_product({2, 3});
  CHECK(m.steps(m.parse("abb")).size() == 2);
  CHECK(m.str(m.prefix_steps(m.parse("abb"), 1)) == "a");
}

TEST_CASE("allowed steps follow the cylinder-tree branching") {
  const GroupModel f2 = GroupModel::free_group(2);
  CHECK(f2.allowed_steps(std::nullopt).size() == 4);
  CHECK(f2.allowed_steps(Syllable{0, 1}).size() == 3);   // after a: not A
  CHECK(f2.allowed_steps(Syllable{0, -1}).size() == 3);  // after A: not a

  const GroupModel m = GroupModel::free_product({2, 3});
  CHECK(m.allowed_steps(std::nullopt).size() == 3);     // a, b, b^2
  CHECK(m.allowed_steps(Syllable{0, 1}).size() == 2);   // after a: b, b^2
  CHECK(m.allowed_steps(Syllable{1, 1}).size() == 1);   // after b: a only
  CHECK(m.allowed_steps(Syllable{1, 2}).size() == 1);   // after b^2: a only
}

TEST_CASE("cyclic reduction") {
  const GroupModel f2 = GroupModel::free_group(2);

  auto cf = f2.cyclic_reduce(f2.parse("aBA"));
  CHECK(f2.str(cf.core) == "B");
  CHECK(f2.mul(cf.conj, cf.core, f2.inverse(cf.conj)) == f2.parse("aBA"));

  cf = f2.cyclic_reduce(f2.parse("abA"));
  CHECK(f2.str(cf.core) == "b");

  cf = f2.cyclic_reduce(f2.parse("ab"));
  CHECK(f2.str(cf.core) == "ab");
  CHECK(cf.conj.empty());

  // same-factor wrap without cancellation rotates into a merged core
  cf = f2.cyclic_reduce(f2.parse("aba"));
  CHECK(f2.length(cf.core) == 3);
  CHECK(cf.core.front().factor != cf.core.back().factor);
  CHECK(f2.mul(cf.conj, cf.core, f2.inverse(cf.conj)) == f2.parse("aba"));

  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Word w = random_word(f2, rng, static_cast<int>(rng.below(10)));
    cf = f2.cyclic_reduce(w);
    CHECK(f2.mul(cf.conj, cf.core, f2.inverse(cf.conj)) == w);
    if (cf.core.syllable_count() >= 2)
      CHECK(cf.core.front().factor != cf.core.back().factor);
  }

  const GroupModel m = GroupModel::free_product({2, 3});
  cf = m.cyclic_reduce(m.parse("bab"));  // conjugate of ab^2
  CHECK(m.length(cf.core) == 2);
  CHECK(m.mul(cf.conj, cf.core, m.inverse(cf.conj)) == m.parse("bab"));
  CHECK(m.torsion_core(m.cyclic_reduce(m.parse("abA")).core));
}

TEST_CASE("primitive root") {
  const GroupModel f2 = GroupModel::free_group(2);
  CHECK(f2.primitive_root(f2.parse("abab")) == f2.parse("ab"));
  CHECK(f2.primitive_root(f2.parse("ab")) == f2.parse("ab"));
  CHECK(f2.primitive_root(f2.parse("aaa")) == f2.parse("a"));
  CHECK(f2.primitive_root(f2.parse("aabaab")) == f2.parse("aab"));
}

TEST_CASE("length-lex order and printing") {
  const GroupModel f2 = GroupModel::free_group(2);
  CHECK(f2.cmp(f2.parse("a"), f2.parse("ab")) == std::strong_ordering::less);
  CHECK(f2.cmp(f2.parse("a"), f2.parse("A")) == std::strong_ordering::less);
  CHECK(f2.cmp(f2.parse("b"), f2.parse("A")) == std::strong_ordering::greater);
  CHECK(f2.cmp(f2.parse("ab"), f2.parse("ab")) == std::strong_ordering::equal);
  CHECK(f2.str(f2.parse("aaBB")) == "aaBB");

  const GroupModel m = GroupModel::free_product({2, 5});
  CHECK(m.str(m.parse("bbb")) == "BB");  // b^3 = (b^-1)^2, shorter spelling
  CHECK(m.str(m.parse("bb")) == "bb");
}

TEST_CASE("model mismatch is detected") {
  const GroupModel f3 = GroupModel::free_group(3);
  const GroupModel f2 = GroupModel::free_group(2);
  const Word w = f3.parse("ac");
  CHECK_THROWS_AS(f2.validate(w), Error);
  CHECK_THROWS_AS((void)f2.parse("c"), Error);
  try {
    f2.validate(w);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ModelMismatch);
  }
}
