#include "hyp/boundary_point.hpp"

#include <numeric>

namespace hyp {

namespace {

// True when mul(x, r) is the literal step-stream concatenation of x and r:
// no cancellation and no finite-factor merge at the seam. A merge of two
// same-direction runs in an infinite factor keeps the step stream intact.
bool literal_concat(const GroupModel& model, const Word& x, const Word& r) {
  if (x.empty() || r.empty()) return true;
  const Syllable& a = x.back();
  const Syllable& b = r.front();
  if (a.factor != b.factor) return true;
  return model.infinite(a.factor) && (a.exp > 0) == (b.exp > 0);
}

}  // namespace

BoundaryRay make_ray(const GroupModel& model, const Word& u, const Word& v) {
  model.validate(u);
  model.validate(v);
  const CyclicForm cf = model.cyclic_reduce(v);
  if (cf.core.empty())
    throw Error(ErrorKind::DegenerateInput, "boundary period is the identity");
  if (model.torsion_core(cf.core))
    throw Error(ErrorKind::DegenerateInput,
                "boundary period has finite order; its powers do not tend to infinity");

  const Word r = model.primitive_root(cf.core);
  Word w = model.mul(u, cf.conj);

  // Absorb: multiply by the period until appending it is a literal extension.
  const std::int64_t guard =
      (model.length(w) + 4 * model.length(r)) / std::max<std::int64_t>(1, model.length(r)) + 8;
  for (std::int64_t i = 0;; ++i) {
    if (literal_concat(model, w, r) && literal_concat(model, model.mul(w, r), r)) break;
    if (i > guard)
      throw Error(ErrorKind::DegenerateInput, "boundary ray failed to stabilize");
    w = model.mul(w, r);
  }

  // Strip the maximal periodic suffix of the preperiod into the phase.
  std::vector<Syllable> pre = model.steps(w);
  const std::vector<Syllable> base = model.steps(r);
  const std::int64_t p = static_cast<std::int64_t>(base.size());
  std::int64_t phase = 0;
  while (!pre.empty() &&
         pre.back() == base[static_cast<std::size_t>((phase + p - 1) % p)]) {
    pre.pop_back();
    phase = (phase + p - 1) % p;
  }
  std::vector<Syllable> per;
  per.reserve(base.size());
  for (std::int64_t i = 0; i < p; ++i)
    per.push_back(base[static_cast<std::size_t>((phase + i) % p)]);

  BoundaryRay ray;
  ray.pre_steps_ = std::move(pre);
  ray.per_steps_ = std::move(per);
  ray.pre_ = model.from_steps(ray.pre_steps_);
  ray.per_ = model.from_steps(ray.per_steps_);
  return ray;
}

BoundaryRay translate(const GroupModel& model, const Word& g, const BoundaryRay& xi) {
  return make_ray(model, model.mul(g, xi.preperiod()), xi.period());
}

Word ray_prefix(const GroupModel& model, const BoundaryRay& xi, std::int64_t k) {
  std::vector<Syllable> st;
  st.reserve(static_cast<std::size_t>(k));
  for (std::int64_t i = 0; i < k; ++i) st.push_back(xi.step_at(i));
  return model.from_steps(st);
}

std::string ray_str(const GroupModel& model, const BoundaryRay& xi) {
  return model.str(xi.preperiod()) + "|" + model.str(xi.period());
}

BoundaryRay parse_ray(const GroupModel& model, const std::string& text) {
  const auto bar = text.find('|');
  if (bar == std::string::npos)
    throw Error(ErrorKind::Config, "boundary point must be written as \"u|v\"");
  return make_ray(model, model.parse(text.substr(0, bar)),
                  model.parse(text.substr(bar + 1)));
}

Confluence confluence(const GroupModel& model, const Word& a, const Word& b) {
  const std::vector<Syllable> sa = model.steps(a), sb = model.steps(b);
  const std::int64_t c = GroupModel::common_steps(sa, sb);
  Confluence out;
  out.common = c;
  if (c == static_cast<std::int64_t>(sa.size()) ||
      c == static_cast<std::int64_t>(sb.size())) {
    // one word is a prefix of the other (possibly equal); the product is
    // the prefix length, finite either way
    out.exhausted = true;
  } else {
    out.left = sa[static_cast<std::size_t>(c)];
    out.right = sb[static_cast<std::size_t>(c)];
  }
  return out;
}

Confluence confluence(const GroupModel& model, const Word& a, const BoundaryRay& b) {
  const std::vector<Syllable> sa = model.steps(a);
  Confluence out;
  std::int64_t i = 0;
  for (; i < static_cast<std::int64_t>(sa.size()); ++i) {
    if (!(sa[static_cast<std::size_t>(i)] == b.step_at(i))) {
      out.common = i;
      out.left = sa[static_cast<std::size_t>(i)];
      out.right = b.step_at(i);
      return out;
    }
  }
  out.common = i;
  out.exhausted = true;
  return out;
}

Confluence confluence(const GroupModel& model, const BoundaryRay& a,
                      const BoundaryRay& b) {
  (void)model;
  Confluence out;
  if (a == b) {
    out.infinite = true;
    return out;
  }
  const std::int64_t pa = static_cast<std::int64_t>(a.per_steps().size());
  const std::int64_t pb = static_cast<std::int64_t>(b.per_steps().size());
  const std::int64_t bound = static_cast<std::int64_t>(a.pre_steps().size()) +
                             static_cast<std::int64_t>(b.pre_steps().size()) +
                             2 * std::lcm(pa, pb) + 2;
  for (std::int64_t i = 0; i <= bound; ++i) {
    if (!(a.step_at(i) == b.step_at(i))) {
      out.common = i;
      out.left = a.step_at(i);
      out.right = b.step_at(i);
      return out;
    }
  }
  // Streams agree beyond the periodicity bound: the points are equal, which
  // canonical form should have detected.
  out.infinite = true;
  return out;
}

}  // namespace hyp
