#include <doctest.h>

#include <cmath>

#include "hyp/rng.hpp"
#include "hyp/space.hpp"

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

TEST_CASE("gromov product values") {
  const SpaceModel sp = SpaceModel::free_group(2);
  const GroupModel& m = sp.group();
  const Word e = m.parse("1");

  // (x, x)_p = d(p, x)
  CHECK(sp.gromov_product(m.parse("ab"), m.parse("ab"), e) == doctest::Approx(2.0));
  // (ab, abA)_1 = (2 + 3 - 1)/2 = 2
  CHECK(sp.gromov2(m.parse("ab"), m.parse("abA"), e) == 4);
  // (a, b)_1 = 0
  CHECK(sp.gromov2(m.parse("a"), m.parse("b"), e) == 0);
}

TEST_CASE("base point shift inequality") {
  const SpaceModel sp = SpaceModel::free_group(2);
  const GroupModel& m = sp.group();
  CHECK(sp.base_point_shift_check(m.parse("ab"), m.parse("aB"), m.parse("1"),
                                  m.parse("a")));
  // o = p: difference 0 <= 0
  CHECK(sp.base_point_shift_check(m.parse("ab"), m.parse("b"), m.parse("ba"),
                                  m.parse("ba")));
  Rng rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const Word x = random_word(m, rng, static_cast<int>(rng.below(9)));
    const Word y = random_word(m, rng, static_cast<int>(rng.below(9)));
    const Word o = random_word(m, rng, static_cast<int>(rng.below(9)));
    const Word p = random_word(m, rng, static_cast<int>(rng.below(9)));
    CHECK(sp.base_point_shift_check(x, y, o, p));
  }
}

TEST_CASE("metric axioms on sampled points") {
  for (const SpaceModel& sp :
       {SpaceModel::free_group(2), SpaceModel::free_product({2, 3})}) {
    Rng rng(5);
    const GroupModel& m = sp.group();
    for (int trial = 0; trial < 500; ++trial) {
      const Word x = random_word(m, rng, static_cast<int>(rng.below(8)));
      const Word y = random_word(m, rng, static_cast<int>(rng.below(8)));
      const Word z = random_word(m, rng, static_cast<int>(rng.below(8)));
      CHECK(sp.distance(x, y) == sp.distance(y, x));
      CHECK((sp.distance(x, y) == 0) == (x == y));
      CHECK(sp.distance(x, z) <= sp.distance(x, y) + sp.distance(y, z));
    }
  }
}

TEST_CASE("four point delta vanishes on tree backends") {
  const SpaceModel f2 = SpaceModel::free_group(2);
  auto ball = f2.enumerate_ball(4.0, 1ull << 30);
  CHECK(f2.four_point_delta(ball, 2) == 0.0);

  const SpaceModel zz = SpaceModel::free_product({2, 3});
  auto ball2 = zz.enumerate_ball(5.0, 1ull << 30);
  CHECK(zz.four_point_delta(ball2, 2) == 0.0);

  // degenerate triple {x, y, x}
  const GroupModel& m = f2.group();
  CHECK(f2.four_point_delta({m.parse("ab"), m.parse("B"), m.parse("ab")}) == 0.0);
  CHECK_THROWS_AS((void)f2.four_point_delta({}), Error);
}

TEST_CASE("sphere counts: recurrence, formula, enumeration oracle") {
  const SpaceModel f2 = SpaceModel::free_group(2);
  const BallStats st = f2.ball_stats(2);
  CHECK(st.sphere == std::vector<std::int64_t>{1, 4, 12});
  CHECK(f2.ball_stats(0).sphere == std::vector<std::int64_t>{1});

  // free-group formula 2k(2k-1)^{n-1} up to n = 12
  for (int k : {2, 3}) {
    const SpaceModel fk = SpaceModel::free_group(k);
    const BallStats s = fk.ball_stats(12);
    for (int n = 1; n <= 12; ++n) {
      const double expect = 2.0 * k * std::pow(2.0 * k - 1.0, n - 1);
      CHECK(static_cast<double>(s.sphere[static_cast<std::size_t>(n)]) ==
            doctest::Approx(expect));
    }
  }

  const SpaceModel zz = SpaceModel::free_product({2, 3});
  CHECK(zz.ball_stats(2).sphere == std::vector<std::int64_t>{1, 3, 4});

  // enumeration agrees with the recurrence (mixed Z * Z/3 included)
  for (const SpaceModel& sp : {SpaceModel::free_group(2),
                               SpaceModel::free_product({2, 3}),
                               SpaceModel::free_product({3, 4}),
                               SpaceModel::free_product({0, 3})}) {
    const BallStats s = sp.ball_stats(7);
    std::vector<std::int64_t> bucket(8, 0);
    sp.for_each_word(7.0, [&](const Word& w, double) {
      ++bucket[static_cast<std::size_t>(sp.group().length(w))];
    });
    CHECK(bucket == s.sphere);
  }
}

TEST_CASE("ball enumeration is length-lex ordered and budget guarded") {
  const SpaceModel f2 = SpaceModel::free_group(2);
  const auto ball = f2.enumerate_ball(3.0, 1ull << 30);
  CHECK(ball.size() == 1 + 4 + 12 + 36);
  for (std::size_t i = 1; i < ball.size(); ++i)
    CHECK(f2.group().cmp(ball[i - 1], ball[i]) == std::strong_ordering::less);

  CHECK_THROWS_AS((void)f2.enumerate_ball(12.0, 1024), Error);
  try {
    (void)f2.enumerate_ball(12.0, 1024);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Resource);
  }
}

TEST_CASE("cylinder cells and children") {
  const SpaceModel f2 = SpaceModel::free_group(2);
  CHECK(f2.cells_at_depth(1).size() == 4);
  CHECK(f2.cells_at_depth(3).size() == 36);
  const Word aa = f2.group().parse("aa");
  const auto kids = f2.cell_children(aa);
  REQUIRE(kids.size() == 3);
  for (const Word& c : kids) CHECK(f2.group().length(c) == 3);

  const SpaceModel zz = SpaceModel::free_product({2, 3});
  CHECK(zz.cells_at_depth(1).size() == 3);
  CHECK(zz.cells_at_depth(2).size() == 4);
  CHECK(zz.cell_children(zz.group().parse("ab")).size() == 1);
  CHECK(zz.cell_children(zz.group().parse("a")).size() == 2);
}

TEST_CASE("subgroup orbit balls") {
  const SpaceModel f2 = SpaceModel::free_group(2);
  const GroupModel& m = f2.group();
  const auto orbit = f2.orbit_ball({m.parse("a")}, 6.0);
  CHECK(orbit.size() == 13);  // a^n, |n| <= 6
  const auto all = f2.orbit_ball({m.parse("a"), m.parse("b")}, 4.0);
  CHECK(all.size() == static_cast<std::size_t>(f2.ball_stats(4).cumulative.back()));
  CHECK(f2.orbit_ball({}, 5.0).size() == 1);
}

TEST_CASE("extension counts match sphere recurrence") {
  const SpaceModel zz = SpaceModel::free_product({2, 3});
  const ExtensionCounts ec = zz.extension_counts(6);
  const BallStats st = zz.ball_stats(6);
  for (int r = 0; r <= 6; ++r)
    CHECK(ec.from_root[static_cast<std::size_t>(r)] ==
          doctest::Approx(static_cast<double>(st.sphere[static_cast<std::size_t>(r)])));
}
