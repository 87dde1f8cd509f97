#include "hyp/cocycle.hpp"

#include <cmath>

namespace hyp {

double beta(const SpaceModel& space, const Word& g, const BoundaryPoint& xi,
            const BoundaryPoint& eta) {
  if (space.is_tree()) return 0.5 * static_cast<double>(beta2(space, g, xi, eta));
  const Word base;
  const double px = ext_product(space, ProductArg(g), ProductArg(xi), base);
  const double pe = ext_product(space, ProductArg(g), ProductArg(eta), base);
  return px - pe;
}

std::int64_t beta2(const SpaceModel& space, const Word& g, const BoundaryPoint& xi,
                   const BoundaryPoint& eta) {
  if (xi == eta) return 0;
  const Word base;
  const std::int64_t px = ext_product2(space, ProductArg(g), ProductArg(xi), base);
  const std::int64_t pe = ext_product2(space, ProductArg(g), ProductArg(eta), base);
  return px - pe;
}

double cocycle_identity_defect(
    const SpaceModel& space, const Word& g, const Word& h,
    const std::vector<std::pair<BoundaryPoint, BoundaryPoint>>& samples) {
  const GroupModel& gm = space.group();
  const Word gh = gm.mul(g, h);
  const Word g_inv = gm.inverse(g);
  double worst = 0.0;
  for (const auto& [xi, eta] : samples) {
    const BoundaryPoint gxi = boundary_act(space, g_inv, xi);
    const BoundaryPoint geta = boundary_act(space, g_inv, eta);
    if (space.is_tree()) {
      const std::int64_t defect2 = beta2(space, gh, xi, eta) -
                                   beta2(space, h, gxi, geta) -
                                   beta2(space, g, xi, eta);
      worst = std::max(worst, 0.5 * std::abs(static_cast<double>(defect2)));
    } else {
      const double defect = beta(space, gh, xi, eta) - beta(space, h, gxi, geta) -
                            beta(space, g, xi, eta);
      worst = std::max(worst, std::abs(defect));
    }
  }
  return worst;
}

namespace {

struct LpClass {
  double beta;  // value of (gp, .) on the class
  double mass;
  std::int64_t level;
  bool spine_clique;  // deviating step shares the spine step's finite factor
};

LpResult lp_norm_tree(const SpaceModel& space, const CylinderMeasure& nu,
                      double delta, double eps0, const Word& g, double p,
                      std::int64_t depth) {
  const GroupModel& gm = space.group();
  const std::int64_t m = gm.length(g);
  if (depth <= m)
    throw Error(ErrorKind::Depth, "lp_norm needs depth > d(p, gp)");
  if (nu.max_depth() < m)
    throw Error(ErrorKind::Depth,
                "measure depth too small: need cylinder masses along the whole of g");

  const std::vector<Syllable> gs = gm.steps(g);
  std::vector<LpClass> classes;
  classes.reserve(2 * static_cast<std::size_t>(m) + 1);

  std::vector<Syllable> st;
  for (std::int64_t i = 0; i < m; ++i) {
    const Syllable spine = gs[static_cast<std::size_t>(i)];
    const std::optional<Syllable> last =
        i == 0 ? std::nullopt
               : std::optional<Syllable>(gs[static_cast<std::size_t>(i - 1)]);
    double mass_plain = 0.0, mass_clique = 0.0;
    for (const Syllable& c : gm.allowed_steps(last)) {
      if (c == spine) continue;
      st.push_back(c);
      const double mc = nu.cylinder_mass(gm.from_steps(st));
      st.pop_back();
      if (gm.clique_siblings(c, spine))
        mass_clique += mc;
      else
        mass_plain += mc;
    }
    if (mass_plain > 0.0)
      classes.push_back({static_cast<double>(i), mass_plain, i, false});
    if (mass_clique > 0.0)
      classes.push_back({static_cast<double>(i) + 0.5, mass_clique, i, true});
    st.push_back(spine);
  }
  classes.push_back({static_cast<double>(m), nu.cylinder_mass(g), m, false});

  // Pair rule: for classes at levels i < j the pair product is i, plus the
  // clique half when the shallower class deviates inside the spine's finite
  // factor; the plain/clique pair at one level meets at product i. Within a
  // class beta is constant, so those blocks vanish.
  double acc = 0.0;
  for (std::size_t x = 0; x < classes.size(); ++x) {
    for (std::size_t y = x + 1; y < classes.size(); ++y) {
      const LpClass& lo =
          classes[x].level <= classes[y].level ? classes[x] : classes[y];
      const LpClass& hi =
          classes[x].level <= classes[y].level ? classes[y] : classes[x];
      double prod;
      if (lo.level == hi.level)
        prod = static_cast<double>(lo.level);
      else
        prod = static_cast<double>(lo.level) + (lo.spine_clique ? 0.5 : 0.0);
      const double db = std::abs(lo.beta - hi.beta);
      if (db == 0.0) continue;
      acc += 2.0 * std::pow(db, p) * std::exp(2.0 * delta * prod) * lo.mass * hi.mass;
    }
  }

  LpResult out;
  out.value = acc;
  out.certified_error = 0.0;
  out.certified = p + 1e-12 >= 2.0 * delta / eps0;
  out.p = p;
  out.depth = depth;
  return out;
}

LpResult lp_norm_disk(const SpaceModel& space, const CylinderMeasure& nu,
                      double delta, double eps0, const Word& g, double p,
                      std::int64_t depth) {
  const GroupModel& gm = space.group();
  const DiskModel& dm = space.disk();
  if (depth <= gm.length(g))
    throw Error(ErrorKind::Depth, "lp_norm needs depth > d(p, gp)");
  if (nu.max_depth() < depth)
    throw Error(ErrorKind::Depth, "measure depth below the requested cell depth");

  const std::vector<Word> cells = space.cells_at_depth(depth);
  // representative boundary point of [w]: image under w of the attracting
  // point of the first admissible continuation letter
  std::vector<double> rep(cells.size()), betas(cells.size()), mass(cells.size());
  const Word base;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::vector<Syllable> st = gm.steps(cells[i]);
    const Syllable cont = gm.allowed_steps(st.back()).front();
    const auto fp = dm.fixed_points(dm.generator(cont.factor, cont.exp < 0));
    const Complex z = dm.matrix(cells[i]).apply(std::polar(1.0, fp->attracting));
    rep[i] = std::arg(z);
    betas[i] = ext_product(space, ProductArg(g),
                           ProductArg(BoundaryPoint::angle(rep[i])), base);
    mass[i] = nu.cylinder_mass(cells[i]);
  }

  double acc = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (mass[i] == 0.0) continue;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (i == j || mass[j] == 0.0) continue;
      const double db = std::abs(betas[i] - betas[j]);
      if (db == 0.0) continue;
      const double prod = disk_gromov_boundary(rep[i], rep[j]);
      acc += std::pow(db, p) * std::exp(2.0 * delta * prod) * mass[i] * mass[j];
    }
  }

  // Near-diagonal remainder: |beta_g| <= kappa_g dcheck pointwise, so each
  // diagonal block is bounded by kappa^p times the (2 delta - p eps0)-
  // weighted diagonal, which contracts geometrically when the finiteness
  // certificate p > 2 delta / eps0 holds.
  double diag_bound;
  const double shifted = 2.0 * delta - p * eps0;
  if (shifted < 0.0) {
    double level_mass = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) level_mass += mass[i] * mass[i];
    const double ratio = std::exp(shifted);
    const double kappa = std::exp(eps0 * space.distance(Word(), g));  // coarse bound
    diag_bound = std::pow(kappa, p) * level_mass *
                 std::exp(shifted * static_cast<double>(depth)) / (1.0 - ratio);
  } else {
    diag_bound = std::numeric_limits<double>::infinity();
  }

  LpResult out;
  out.value = acc;
  out.certified_error = diag_bound;
  out.certified = false;  // representative-point evaluation; estimate only
  out.p = p;
  out.depth = depth;
  return out;
}

}  // namespace

LpResult lp_norm(const SpaceModel& space, const CylinderMeasure& nu, double delta,
                 double eps0, const Word& g, double p, std::int64_t depth) {
  if (p < 1.0) throw Error(ErrorKind::Config, "p must be at least 1");
  space.group().validate(g);
  if (space.is_tree()) return lp_norm_tree(space, nu, delta, eps0, g, p, depth);
  return lp_norm_disk(space, nu, delta, eps0, g, p, depth);
}

double lp_upper_bound(const SpaceModel& space, const VisualMetricParams& vm,
                      double delta, const Word& g, double p,
                      std::int64_t kappa_sample_depth) {
  const double exponent = 2.0 * delta / vm.epsilon0;
  if (p + 1e-12 < exponent)
    throw Error(ErrorKind::Uncertified,
                "the norm bound chain needs p >= 2 delta / eps0");
  const double beta_inf = space.distance(Word(), g);
  if (beta_inf == 0.0) return 0.0;
  const double kappa = lipschitz_constant(space, vm, g, kappa_sample_depth);
  return std::pow(beta_inf, p - exponent) * std::pow(kappa, exponent);
}

}  // namespace hyp
