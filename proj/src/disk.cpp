#include "hyp/disk.hpp"

#include <cmath>

namespace hyp {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}
}  // namespace

Mobius Mobius::from_matrix(const Eigen::Matrix2cd& raw) {
  const Complex det = raw(0, 0) * raw(1, 1) - raw(0, 1) * raw(1, 0);
  if (std::abs(det) < 1e-14)
    throw Error(ErrorKind::Config, "singular Moebius matrix");
  Mobius out;
  out.m = raw / std::sqrt(det);
  return out;
}

Mobius Mobius::from_sl2r(double a, double b, double c, double d) {
  if (std::abs(a * d - b * c - 1.0) > 1e-9)
    throw Error(ErrorKind::Config, "generator matrix must have determinant 1");
  Eigen::Matrix2cd h;
  h << Complex(a, 0), Complex(b, 0), Complex(c, 0), Complex(d, 0);
  // Cayley transform z -> (z - i)/(z + i) conjugates the half plane to the disk.
  Eigen::Matrix2cd cay;
  cay << Complex(1, 0), Complex(0, -1), Complex(1, 0), Complex(0, 1);
  return from_matrix(cay * h * cay.inverse());
}

Complex Mobius::apply(Complex z) const {
  return (m(0, 0) * z + m(0, 1)) / (m(1, 0) * z + m(1, 1));
}

Mobius Mobius::compose(const Mobius& rhs) const {
  Mobius out;
  out.m = m * rhs.m;
  return out;
}

Mobius Mobius::inverse() const {
  Mobius out;
  out.m << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return out;
}

double Mobius::trace_abs() const { return std::abs(m(0, 0) + m(1, 1)); }

double disk_distance(Complex x, Complex y) {
  const double num = 2.0 * std::norm(x - y);
  const double den = (1.0 - std::norm(x)) * (1.0 - std::norm(y));
  return std::acosh(1.0 + num / den);
}

double disk_gromov(Complex x, Complex y, Complex base) {
  return 0.5 * (disk_distance(x, base) + disk_distance(y, base) - disk_distance(x, y));
}

double disk_gromov_boundary(double theta1, double theta2) {
  const Complex xi = std::polar(1.0, theta1);
  const Complex eta = std::polar(1.0, theta2);
  const double chord = std::abs(xi - eta);
  if (chord == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(2.0) - std::log(chord);
}

double disk_gromov_mixed(double theta, Complex y) {
  const Complex xi = std::polar(1.0, theta);
  // Busemann/Poisson closed form: (xi, y)_0 = (rho(0,y) + ln((1-|y|^2)/|y-xi|^2)) / 2
  return 0.5 * (disk_distance(Complex(0, 0), y) +
                std::log((1.0 - std::norm(y)) / std::norm(y - xi)));
}

namespace {

IsometricDisk isometric_disk(const Mobius& g) {
  const Complex c = g.m(1, 0), d = g.m(1, 1);
  if (std::abs(c) < 1e-12)
    throw Error(ErrorKind::Config,
                "generator fixes the base point (isometric circle at infinity); "
                "not Schottky with respect to the origin");
  return {-d / c, 1.0 / std::abs(c)};
}

}  // namespace

DiskModel::DiskModel(const std::vector<std::array<double, 4>>& sl2r_generators)
    : group_(GroupModel::free_group(
          static_cast<int>(std::max<std::size_t>(sl2r_generators.size(), 2)))) {
  if (sl2r_generators.size() < 2)
    throw Error(ErrorKind::Config, "Schottky model needs at least 2 generators");
  for (const auto& g : sl2r_generators) {
    const Mobius m = Mobius::from_sl2r(g[0], g[1], g[2], g[3]);
    gens_.push_back(m);
    gens_inv_.push_back(m.inverse());
    disks_.push_back(isometric_disk(m));
    disks_inv_.push_back(isometric_disk(m.inverse()));
  }

  // Ping-pong: all 2k isometric disks pairwise disjoint, base point outside.
  std::vector<IsometricDisk> all;
  for (std::size_t i = 0; i < disks_.size(); ++i) {
    all.push_back(disks_[i]);
    all.push_back(disks_inv_[i]);
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (std::abs(all[i].center) <= all[i].radius)
      throw Error(ErrorKind::Config,
                  "Schottky check failed: base point inside an isometric disk");
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (std::abs(all[i].center - all[j].center) <=
          all[i].radius + all[j].radius + 1e-9)
        throw Error(ErrorKind::Config,
                    "Schottky check failed: isometric disks overlap "
                    "(ping-pong condition violated)");
    }
  }

  for (std::size_t i = 0; i < gens_.size(); ++i) {
    max_step_ = std::max(max_step_, disk_distance(Complex(0, 0),
                                                  gens_[i].apply(Complex(0, 0))));
  }
}

DiskModel DiskModel::demo() {
  return DiskModel({{{3.0, 0.0, 0.0, 1.0 / 3.0}},
                    {{5.0 / 3.0, -4.0 / 3.0, -4.0 / 3.0, 5.0 / 3.0}}});
}

const Mobius& DiskModel::generator(int f, bool inverse) const {
  return inverse ? gens_inv_[static_cast<std::size_t>(f)]
                 : gens_[static_cast<std::size_t>(f)];
}

const IsometricDisk& DiskModel::disk_of(int f, bool inverse) const {
  return inverse ? disks_inv_[static_cast<std::size_t>(f)]
                 : disks_[static_cast<std::size_t>(f)];
}

Mobius DiskModel::matrix(const Word& w) const {
  group_.validate(w);
  Mobius acc;
  for (const Syllable& s : w.syllables()) {
    const Mobius& g = generator(s.factor, s.exp < 0);
    for (std::int64_t i = 0; i < std::llabs(s.exp); ++i) acc = acc.compose(g);
  }
  return acc;
}

double DiskModel::distance(const Word& x, const Word& y) const {
  return disk_distance(point(x), point(y));
}

std::optional<DiskModel::FixedPoints> DiskModel::fixed_points(const Mobius& g) const {
  // fixed points of (az+b)/(cz+d): c z^2 + (d-a) z - b = 0
  const Complex a = g.m(0, 0), b = g.m(0, 1), c = g.m(1, 0), d = g.m(1, 1);
  if (g.trace_abs() <= 2.0 + 1e-12) return std::nullopt;
  const Complex disc = std::sqrt((d - a) * (d - a) + 4.0 * c * b);
  Complex z1, z2;
  if (std::abs(c) < 1e-13) {
    return std::nullopt;  // fixes 0 or infinity of the disk chart; not Schottky
  }
  z1 = ((a - d) + disc) / (2.0 * c);
  z2 = ((a - d) - disc) / (2.0 * c);
  // attracting fixed point: |g'(z)| = 1/|cz+d|^2 < 1
  const double d1 = std::norm(c * z1 + d);
  const auto ang = [](Complex z) { return wrap_angle(std::arg(z)); };
  if (d1 > 1.0) return FixedPoints{ang(z1), ang(z2)};
  return FixedPoints{ang(z2), ang(z1)};
}

std::optional<Syllable> DiskModel::capturing_step(Complex z) const {
  // s maps the exterior of its own isometric disk into the interior of the
  // disk of s^{-1}, so orbit/limit points starting with the letter s live in
  // the isometric disk of s^{-1}.
  for (int f = 0; f < rank(); ++f) {
    if (std::abs(z - disks_inv_[static_cast<std::size_t>(f)].center) <=
        disks_inv_[static_cast<std::size_t>(f)].radius)
      return Syllable{f, 1};
    if (std::abs(z - disks_[static_cast<std::size_t>(f)].center) <=
        disks_[static_cast<std::size_t>(f)].radius)
      return Syllable{f, -1};
  }
  return std::nullopt;
}

}  // namespace hyp
