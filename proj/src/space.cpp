#include "hyp/space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "hyp/parallel.hpp"

namespace hyp {

SpaceModel::SpaceModel(Kind kind, GroupModel group,
                       std::shared_ptr<const DiskModel> disk)
    : kind_(kind), group_(std::move(group)), disk_(std::move(disk)) {
  std::ostringstream os;
  switch (kind_) {
    case Kind::FreeGroup: os << "free-group:"; break;
    case Kind::FreeProduct: os << "free-product:"; break;
    case Kind::SchottkyDisk: os << "fuchsian-schottky:"; break;
  }
  os << group_.id();
  id_ = os.str();
}

SpaceModel SpaceModel::free_group(int rank) {
  return SpaceModel(Kind::FreeGroup, GroupModel::free_group(rank), nullptr);
}

SpaceModel SpaceModel::free_product(const std::vector<std::uint32_t>& orders) {
  return SpaceModel(Kind::FreeProduct, GroupModel::free_product(orders), nullptr);
}

SpaceModel SpaceModel::schottky(const std::vector<std::array<double, 4>>& matrices) {
  auto disk = std::make_shared<const DiskModel>(matrices);
  GroupModel g = disk->group();
  return SpaceModel(Kind::SchottkyDisk, std::move(g), std::move(disk));
}

SpaceModel SpaceModel::schottky_demo() {
  auto disk = std::make_shared<const DiskModel>(DiskModel::demo());
  GroupModel g = disk->group();
  return SpaceModel(Kind::SchottkyDisk, std::move(g), std::move(disk));
}

const DiskModel& SpaceModel::disk() const {
  if (!disk_) throw Error(ErrorKind::ModelMismatch, "not a disk backend");
  return *disk_;
}

double SpaceModel::distance(const Word& x, const Word& y) const {
  group_.validate(x);
  group_.validate(y);
  if (is_tree()) return static_cast<double>(group_.distance(x, y));
  return disk_->distance(x, y);
}

double SpaceModel::gromov_product(const Word& x, const Word& y,
                                  const Word& base) const {
  if (is_tree()) return 0.5 * static_cast<double>(gromov2(x, y, base));
  return disk_gromov(disk_->point(x), disk_->point(y), disk_->point(base));
}

std::int64_t SpaceModel::gromov2(const Word& x, const Word& y,
                                 const Word& base) const {
  if (!is_tree())
    throw Error(ErrorKind::ModelMismatch, "exact products require a tree backend");
  group_.validate(x);
  group_.validate(y);
  group_.validate(base);
  return group_.distance(x, base) + group_.distance(y, base) -
         group_.distance(x, y);
}

bool SpaceModel::base_point_shift_check(const Word& x, const Word& y,
                                        const Word& o, const Word& p) const {
  if (is_tree()) {
    const std::int64_t lhs2 = std::llabs(gromov2(x, y, o) - gromov2(x, y, p));
    return lhs2 <= 2 * group_.distance(o, p);
  }
  const double lhs = std::abs(gromov_product(x, y, o) - gromov_product(x, y, p));
  return lhs <= distance(o, p) + 1e-9;
}

double SpaceModel::four_point_delta(const std::vector<Word>& sample,
                                    int threads) const {
  if (sample.empty())
    throw Error(ErrorKind::DegenerateInput, "four-point check needs a nonempty sample");
  if (sample.size() > 16000)
    throw Error(ErrorKind::Resource,
                "four-point scan is cubic in the sample size; keep it below 16000 "
                "points (use a smaller radius)");
  const std::size_t n = sample.size();
  const Word base;

  if (is_tree()) {
    std::vector<std::int64_t> prod(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        prod[i * n + j] = prod[j * n + i] = gromov2(sample[i], sample[j], base);
    const std::int64_t worst2 = deterministic_block_reduce<std::int64_t>(
        static_cast<std::int64_t>(n), std::int64_t{0}, threads,
        [&](std::int64_t lo, std::int64_t hi) {
          std::int64_t w = 0;
          for (std::int64_t z = lo; z < hi; ++z) {
            const std::int64_t* pz = prod.data() + static_cast<std::size_t>(z) * n;
            for (std::size_t x = 0; x < n; ++x) {
              const std::int64_t pxz = pz[x];
              const std::int64_t* px = prod.data() + x * n;
              for (std::size_t y = x + 1; y < n; ++y)
                w = std::max(w, std::min(pxz, pz[y]) - px[y]);
            }
          }
          return w;
        },
        [](std::int64_t a, std::int64_t b) { return std::max(a, b); });
    return 0.5 * static_cast<double>(std::max<std::int64_t>(worst2, 0));
  }

  std::vector<double> prod(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      prod[i * n + j] = prod[j * n + i] = gromov_product(sample[i], sample[j], base);
  const double worst = deterministic_block_reduce<double>(
      static_cast<std::int64_t>(n), 0.0, threads,
      [&](std::int64_t lo, std::int64_t hi) {
        double w = 0.0;
        for (std::int64_t z = lo; z < hi; ++z) {
          const double* pz = prod.data() + static_cast<std::size_t>(z) * n;
          for (std::size_t x = 0; x < n; ++x) {
            const double pxz = pz[x];
            const double* px = prod.data() + x * n;
            for (std::size_t y = x + 1; y < n; ++y)
              w = std::max(w, std::min(pxz, pz[y]) - px[y]);
          }
        }
        return w;
      },
      [](double a, double b) { return std::max(a, b); });
  return std::max(worst, 0.0);
}

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw Error(ErrorKind::Resource, "sphere counts exceed 64-bit range");
  return r;
}

}  // namespace

BallStats SpaceModel::ball_stats(std::int64_t R) const {
  if (R < 0) throw Error(ErrorKind::Config, "radius must be nonnegative");
  BallStats out;
  out.radius = R;
  out.sphere.assign(static_cast<std::size_t>(R) + 1, 0);
  out.sphere[0] = 1;

  if (is_tree()) {
    const auto& steps = group_.unit_steps();
    const int ns = static_cast<int>(steps.size());
    std::vector<std::int64_t> cur(static_cast<std::size_t>(ns), 1);  // length-1 words
    if (R >= 1)
      out.sphere[1] = static_cast<std::int64_t>(ns);
    for (std::int64_t r = 2; r <= R; ++r) {
      std::vector<std::int64_t> next(static_cast<std::size_t>(ns), 0);
      for (int s = 0; s < ns; ++s) {
        if (cur[static_cast<std::size_t>(s)] == 0) continue;
        for (int t = 0; t < ns; ++t) {
          if (group_.step_allowed(steps[static_cast<std::size_t>(s)],
                                  steps[static_cast<std::size_t>(t)]))
            next[static_cast<std::size_t>(t)] = checked_add(
                next[static_cast<std::size_t>(t)], cur[static_cast<std::size_t>(s)]);
        }
      }
      cur = std::move(next);
      std::int64_t tot = 0;
      for (std::int64_t c : cur) tot = checked_add(tot, c);
      out.sphere[static_cast<std::size_t>(r)] = tot;
    }
  } else {
    // Orbit points with d <= R, bucketed by ceil(d): cumulative[r] counts
    // exactly the points within metric distance r.
    for_each_word(static_cast<double>(R), [&](const Word& w, double d) {
      if (w.empty()) return;  // base point already in sphere[0]
      const auto idx = static_cast<std::size_t>(std::ceil(d - 1e-12));
      ++out.sphere[std::min(idx, out.sphere.size() - 1)];
    });
  }

  out.cumulative.resize(out.sphere.size());
  std::int64_t acc = 0;
  for (std::size_t r = 0; r < out.sphere.size(); ++r) {
    acc = checked_add(acc, out.sphere[r]);
    out.cumulative[r] = acc;
  }
  return out;
}

void SpaceModel::for_each_word(
    double R, const std::function<void(const Word&, double)>& fn) const {
  if (R < 0) return;
  std::vector<Syllable> stack;
  fn(Word(), 0.0);

  // Iterative deepening keeps the emission order length-lexicographic with
  // no level storage; revisiting shorter prefixes costs a constant factor.
  if (is_tree()) {
    const auto limit = static_cast<std::int64_t>(R);
    std::function<void(std::int64_t, std::int64_t)> emit_level =
        [&](std::int64_t depth, std::int64_t target) {
          const std::optional<Syllable> last =
              stack.empty() ? std::nullopt : std::optional<Syllable>(stack.back());
          for (const Syllable& s : group_.unit_steps()) {
            if (!group_.step_allowed(last, s)) continue;
            stack.push_back(s);
            if (depth + 1 == target)
              fn(group_.from_steps(stack), static_cast<double>(target));
            else
              emit_level(depth + 1, target);
            stack.pop_back();
          }
        };
    for (std::int64_t n = 1; n <= limit; ++n) emit_level(0, n);
    return;
  }

  // Disk: prune once the orbit point drifts beyond R plus slack (children can
  // dip back toward the base point by at most one generator displacement).
  const double slack = 2.0 * disk_->max_step();
  std::int64_t emitted_or_alive = 0;
  std::function<void(std::int64_t, std::int64_t)> emit_level =
      [&](std::int64_t depth, std::int64_t target) {
        const std::optional<Syllable> last =
            stack.empty() ? std::nullopt : std::optional<Syllable>(stack.back());
        for (const Syllable& s : group_.unit_steps()) {
          if (!group_.step_allowed(last, s)) continue;
          stack.push_back(s);
          const Word w = group_.from_steps(stack);
          const double d = disk_distance(Complex(0, 0), disk_->point(w));
          if (d <= R + slack) {
            if (depth + 1 == target) {
              ++emitted_or_alive;
              if (d <= R) fn(w, d);
            } else {
              emit_level(depth + 1, target);
            }
          }
          stack.pop_back();
        }
      };
  for (std::int64_t n = 1;; ++n) {
    emitted_or_alive = 0;
    emit_level(0, n);
    if (emitted_or_alive == 0) break;
  }
}

std::vector<Word> SpaceModel::enumerate_ball(double R,
                                             std::uint64_t memory_budget_bytes) const {
  // Project the footprint before materializing anything.
  std::uint64_t count = 0;
  double avg_len = 1.0;
  if (is_tree()) {
    const BallStats st = ball_stats(static_cast<std::int64_t>(R));
    count = static_cast<std::uint64_t>(st.cumulative.back());
    avg_len = static_cast<double>(R);
  } else {
    for_each_word(R, [&](const Word&, double) { ++count; });
    avg_len = R / std::max(1e-9, disk_->max_step()) + 1.0;
  }
  const double bytes =
      static_cast<double>(count) * (sizeof(Word) + 16.0 + 8.0 * avg_len);
  if (bytes > static_cast<double>(memory_budget_bytes)) {
    std::ostringstream os;
    os << "ball enumeration would need about " << static_cast<std::uint64_t>(bytes)
       << " bytes for " << count << " words, above the budget of "
       << memory_budget_bytes;
    throw Error(ErrorKind::Resource, os.str());
  }
  std::vector<Word> out;
  out.reserve(count);
  for_each_word(R, [&](const Word& w, double) { out.push_back(w); });
  return out;
}

std::vector<Word> SpaceModel::cells_at_depth(std::int64_t n) const {
  if (n < 1) throw Error(ErrorKind::Depth, "cylinder depth must be >= 1");
  std::vector<Word> out;
  std::vector<Syllable> stack;
  std::function<void()> rec = [&]() {
    if (static_cast<std::int64_t>(stack.size()) == n) {
      out.push_back(group_.from_steps(stack));
      return;
    }
    const std::optional<Syllable> last =
        stack.empty() ? std::nullopt : std::optional<Syllable>(stack.back());
    for (const Syllable& s : group_.unit_steps()) {
      if (!group_.step_allowed(last, s)) continue;
      stack.push_back(s);
      rec();
      stack.pop_back();
    }
  };
  rec();
  return out;
}

std::vector<Word> SpaceModel::cell_children(const Word& w) const {
  std::vector<Syllable> st = group_.steps(w);
  const std::optional<Syllable> last =
      st.empty() ? std::nullopt : std::optional<Syllable>(st.back());
  std::vector<Word> out;
  for (const Syllable& s : group_.allowed_steps(last)) {
    st.push_back(s);
    out.push_back(group_.from_steps(st));
    st.pop_back();
  }
  return out;
}

ExtensionCounts SpaceModel::extension_counts(std::int64_t R) const {
  if (!is_tree())
    throw Error(ErrorKind::ModelMismatch, "extension counts are a tree-backend notion");
  const auto& steps = group_.unit_steps();
  const std::size_t ns = steps.size();
  ExtensionCounts out;
  out.by_state.assign(static_cast<std::size_t>(R) + 1, std::vector<double>(ns, 0.0));
  out.from_root.assign(static_cast<std::size_t>(R) + 1, 0.0);
  for (std::size_t s = 0; s < ns; ++s) out.by_state[0][s] = 1.0;
  out.from_root[0] = 1.0;
  for (std::int64_t r = 1; r <= R; ++r) {
    for (std::size_t s = 0; s < ns; ++s) {
      double acc = 0.0;
      for (std::size_t t = 0; t < ns; ++t)
        if (group_.step_allowed(steps[s], steps[t]))
          acc += out.by_state[static_cast<std::size_t>(r - 1)][t];
      out.by_state[static_cast<std::size_t>(r)][s] = acc;
    }
    double root = 0.0;
    for (std::size_t t = 0; t < ns; ++t)
      root += out.by_state[static_cast<std::size_t>(r - 1)][t];
    out.from_root[static_cast<std::size_t>(r)] = root;
  }
  return out;
}

std::vector<Word> SpaceModel::orbit_ball(const std::vector<Word>& gens, double R,
                                         std::uint64_t max_elements) const {
  double max_gen = 0.0;
  std::vector<Word> moves;
  for (const Word& g : gens) {
    group_.validate(g);
    moves.push_back(g);
    const Word gi = group_.inverse(g);
    if (!(gi == g)) moves.push_back(gi);
    max_gen = std::max(max_gen, distance(Word(), g));
  }
  const double horizon = R + 2.0 * max_gen;

  std::unordered_set<Word, WordHash> seen;
  std::vector<Word> frontier{Word()};
  seen.insert(Word());
  while (!frontier.empty()) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (const Word& m : moves) {
        Word c = group_.mul(w, m);
        if (seen.contains(c)) continue;
        if (distance(Word(), c) > horizon) continue;
        if (seen.size() >= max_elements)
          throw Error(ErrorKind::Resource, "subgroup orbit exceeds the element budget");
        seen.insert(c);
        next.push_back(c);
      }
    }
    frontier = std::move(next);
  }

  std::vector<Word> out;
  for (const Word& w : seen)
    if (distance(Word(), w) <= R) out.push_back(w);
  std::sort(out.begin(), out.end(),
            [&](const Word& a, const Word& b) {
              return group_.cmp(a, b) == std::strong_ordering::less;
            });
  return out;
}

}  // namespace hyp
