#include "hyp/word.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

namespace hyp {

namespace {

std::int64_t mod_order(std::int64_t e, std::uint32_t n) {
  const auto m = static_cast<std::int64_t>(n);
  std::int64_t r = e % m;
  if (r < 0) r += m;
  return r;
}

}  // namespace

GroupModel::GroupModel(std::vector<Factor> factors) : factors_(std::move(factors)) {
  state_offset_.resize(factors_.size() + 1, 0);
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    const std::uint32_t n = factors_[f].order;
    state_offset_[f] = static_cast<int>(unit_steps_.size());
    if (n == 0) {
      unit_steps_.push_back({static_cast<std::int32_t>(f), 1});
      unit_steps_.push_back({static_cast<std::int32_t>(f), -1});
    } else {
      for (std::uint32_t e = 1; e < n; ++e)
        unit_steps_.push_back({static_cast<std::int32_t>(f), static_cast<std::int64_t>(e)});
    }
  }
  state_offset_[factors_.size()] = static_cast<int>(unit_steps_.size());

  std::ostringstream os;
  os << "{\"factors\":[";
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    if (f) os << ",";
    os << factors_[f].order;
  }
  os << "]}";
  id_ = os.str();
}

GroupModel GroupModel::free_group(int rank) {
  if (rank < 2)
    throw Error(ErrorKind::Config, "free group rank must be >= 2");
  if (rank > 26) throw Error(ErrorKind::Config, "alphabet limited to 26 factors");
  return GroupModel(std::vector<Factor>(static_cast<std::size_t>(rank), Factor{0}));
}

GroupModel GroupModel::free_product(const std::vector<std::uint32_t>& orders) {
  if (orders.size() < 2)
    throw Error(ErrorKind::Config, "free product needs at least 2 factors");
  if (orders.size() > 26) throw Error(ErrorKind::Config, "alphabet limited to 26 factors");
  bool big = orders.size() >= 3;
  for (std::uint32_t n : orders) {
    if (n == 1) throw Error(ErrorKind::Config, "factor order must be 0 (infinite) or >= 2");
    if (n == 0 || n >= 3) big = true;
  }
  if (!big)
    throw Error(ErrorKind::Config,
                "free product Z/2 * Z/2 is elementary; need one order >= 3 or >= 3 factors");
  std::vector<Factor> fs;
  fs.reserve(orders.size());
  for (std::uint32_t n : orders) fs.push_back(Factor{n});
  return GroupModel(std::move(fs));
}

bool GroupModel::is_free_group() const {
  return std::all_of(factors_.begin(), factors_.end(),
                     [](const Factor& f) { return f.order == 0; });
}

Syllable GroupModel::normalized(Syllable s) const {
  const std::uint32_t n = order(s.factor);
  if (n != 0) s.exp = mod_order(s.exp, n);
  return s;
}

Word GroupModel::word(const std::vector<Syllable>& raw) const {
  std::vector<Syllable> out;
  out.reserve(raw.size());
  for (Syllable s : raw) {
    if (s.factor < 0 || s.factor >= factor_count())
      throw Error(ErrorKind::ModelMismatch, "syllable factor out of range");
    s = normalized(s);
    if (s.exp == 0) continue;
    if (!out.empty() && out.back().factor == s.factor) {
      const std::uint32_t n = order(s.factor);
      std::int64_t e = out.back().exp + s.exp;
      if (n != 0) e = mod_order(e, n);
      if (e == 0)
        out.pop_back();
      else
        out.back().exp = e;
    } else {
      out.push_back(s);
    }
  }
  return Word(std::move(out));
}

Word GroupModel::mul(const Word& a, const Word& b) const {
  std::vector<Syllable> cat;
  cat.reserve(a.syllable_count() + b.syllable_count());
  cat.insert(cat.end(), a.syllables().begin(), a.syllables().end());
  cat.insert(cat.end(), b.syllables().begin(), b.syllables().end());
  return word(cat);
}

Word GroupModel::mul(const Word& a, const Word& b, const Word& c) const {
  return mul(mul(a, b), c);
}

Word GroupModel::inverse(const Word& w) const {
  std::vector<Syllable> rev;
  rev.reserve(w.syllable_count());
  for (auto it = w.syllables().rbegin(); it != w.syllables().rend(); ++it) {
    Syllable s = *it;
    const std::uint32_t n = order(s.factor);
    s.exp = (n == 0) ? -s.exp : static_cast<std::int64_t>(n) - s.exp;
    rev.push_back(s);
  }
  return word(rev);
}

Word GroupModel::pow(const Word& w, std::int64_t n) const {
  if (n < 0) return pow(inverse(w), -n);
  Word acc, base = w;
  while (n > 0) {
    if (n & 1) acc = mul(acc, base);
    base = mul(base, base);
    n >>= 1;
  }
  return acc;
}

std::int64_t GroupModel::length(const Word& w) const {
  std::int64_t len = 0;
  for (const Syllable& s : w.syllables())
    len += infinite(s.factor) ? std::llabs(s.exp) : 1;
  return len;
}

std::int64_t GroupModel::distance(const Word& x, const Word& y) const {
  return length(mul(inverse(x), y));
}

Word GroupModel::parse(std::string_view text) const {
  if (text == "1" || text.empty()) return Word();
  std::vector<Syllable> syl;
  syl.reserve(text.size());
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    const bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
    const char base = upper ? static_cast<char>(std::tolower(c)) : c;
    if (base < 'a' || base >= static_cast<char>('a' + factor_count()))
      throw Error(ErrorKind::ModelMismatch,
                  std::string("letter '") + c + "' not in this model's alphabet");
    const int f = base - 'a';
    const std::uint32_t n = order(f);
    std::int64_t e = upper ? (n == 0 ? -1 : static_cast<std::int64_t>(n) - 1) : 1;
    syl.push_back({f, e});
  }
  return word(syl);
}

std::string GroupModel::str(const Word& w) const {
  if (w.empty()) return "1";
  std::string out;
  for (const Syllable& s : w.syllables()) {
    const std::uint32_t n = order(s.factor);
    const char lo = letter(s.factor);
    const char hi = static_cast<char>(std::toupper(lo));
    if (n == 0) {
      out.append(static_cast<std::size_t>(std::llabs(s.exp)), s.exp > 0 ? lo : hi);
    } else {
      // shortest spelling: e copies of the letter, or n-e of its inverse
      const std::int64_t e = s.exp;
      const std::int64_t inv = static_cast<std::int64_t>(n) - e;
      if (e <= inv)
        out.append(static_cast<std::size_t>(e), lo);
      else
        out.append(static_cast<std::size_t>(inv), hi);
    }
  }
  return out;
}

void GroupModel::validate(const Word& w) const {
  for (const Syllable& s : w.syllables()) {
    if (s.factor < 0 || s.factor >= factor_count())
      throw Error(ErrorKind::ModelMismatch, "word uses a factor outside this model");
    const std::uint32_t n = order(s.factor);
    if (s.exp == 0 || (n != 0 && (s.exp < 0 || s.exp >= static_cast<std::int64_t>(n))))
      throw Error(ErrorKind::ModelMismatch, "word not in reduced form for this model");
  }
}

std::vector<Syllable> GroupModel::steps(const Word& w) const {
  std::vector<Syllable> st;
  st.reserve(static_cast<std::size_t>(length(w)));
  for (const Syllable& s : w.syllables()) {
    if (infinite(s.factor)) {
      const Syllable unit{s.factor, s.exp > 0 ? 1 : -1};
      for (std::int64_t i = 0; i < std::llabs(s.exp); ++i) st.push_back(unit);
    } else {
      st.push_back(s);
    }
  }
  return st;
}

Word GroupModel::prefix_steps(const Word& w, std::int64_t k) const {
  std::vector<Syllable> out;
  out.reserve(w.syllable_count());
  std::int64_t taken = 0;
  for (const Syllable& s : w.syllables()) {
    if (taken >= k) break;
    if (infinite(s.factor)) {
      const std::int64_t run =
          std::min(static_cast<std::int64_t>(std::llabs(s.exp)), k - taken);
      out.push_back({s.factor, s.exp > 0 ? run : -run});
      taken += run;
    } else {
      out.push_back(s);
      ++taken;
    }
  }
  return Word(std::move(out));
}

std::int64_t GroupModel::common_steps(const std::vector<Syllable>& a,
                                      const std::vector<Syllable>& b) {
  const std::size_t m = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < m && a[i] == b[i]) ++i;
  return static_cast<std::int64_t>(i);
}

bool GroupModel::clique_siblings(const Syllable& s, const Syllable& t) const {
  return s.factor == t.factor && s.exp != t.exp && !infinite(s.factor);
}

int GroupModel::step_state(const Syllable& s) const {
  const int base = state_offset_[static_cast<std::size_t>(s.factor)];
  if (infinite(s.factor)) return base + (s.exp > 0 ? 0 : 1);
  return base + static_cast<int>(s.exp) - 1;
}

bool GroupModel::step_allowed(const std::optional<Syllable>& last,
                              const Syllable& next) const {
  if (!last) return true;
  if (last->factor != next.factor) return true;
  // same factor: finite factors never extend (clique already spanned);
  // infinite factors extend only in the same direction
  return infinite(next.factor) && (last->exp > 0) == (next.exp > 0);
}

std::vector<Syllable> GroupModel::allowed_steps(
    const std::optional<Syllable>& last) const {
  std::vector<Syllable> out;
  out.reserve(unit_steps_.size());
  for (const Syllable& s : unit_steps_)
    if (step_allowed(last, s)) out.push_back(s);
  return out;
}

CyclicForm GroupModel::cyclic_reduce(const Word& w) const {
  Word conj, core = w;
  while (core.syllable_count() >= 2 && core.front().factor == core.back().factor) {
    const Word first = word({core.front()});
    conj = mul(conj, first);
    core = mul(inverse(first), core, first);
  }
  return {conj, core};
}

bool GroupModel::torsion_core(const Word& core) const {
  return core.syllable_count() == 1 && !infinite(core.front().factor);
}

Word GroupModel::primitive_root(const Word& core) const {
  if (core.empty())
    throw Error(ErrorKind::DegenerateInput, "primitive root of the identity");
  const std::vector<Syllable> st = steps(core);
  const std::size_t n = st.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = (st[i] == st[i - p]);
    if (periodic) {
      const Word root = word(std::vector<Syllable>(st.begin(), st.begin() + static_cast<std::ptrdiff_t>(p)));
      return root;
    }
  }
  return core;  // unreachable: p == n always periodic
}

int GroupModel::step_rank(const Syllable& s) const { return step_state(s); }

std::strong_ordering GroupModel::cmp(const Word& a, const Word& b) const {
  const std::int64_t la = length(a), lb = length(b);
  if (la != lb) return la <=> lb;
  const std::vector<Syllable> sa = steps(a), sb = steps(b);
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const int ra = step_rank(sa[i]), rb = step_rank(sb[i]);
    if (ra != rb) return ra <=> rb;
  }
  return std::strong_ordering::equal;
}

}  // namespace hyp
