#include "hyp/config.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hyp {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (epsilon0 <= 0) throw Error(ErrorKind::Config, "epsilon0 must be positive");
  if (cauchy_tol <= 0 || refinement_tol <= 0 || disk_rel_tol <= 0 || point_eq_tol <= 0)
    throw Error(ErrorKind::Config, "tolerances must be positive");
  for (std::size_t i = 1; i < t_offsets.size(); ++i)
    if (t_offsets[i] >= t_offsets[i - 1])
      throw Error(ErrorKind::Config, "schedule offsets must be strictly decreasing");
  if (t_offsets.empty() || t_offsets.front() <= 0)
    throw Error(ErrorKind::Config, "schedule offsets must be positive");
  if (depth < 1) throw Error(ErrorKind::Config, "depth must be >= 1");
  if (radius < 1) throw Error(ErrorKind::Config, "radius must be >= 1");
  if (p != 0.0 && p < 1.0) throw Error(ErrorKind::Config, "p must be >= 1 (or 0 = auto)");
  if (delta_source != "auto" && delta_source != "analytic" && delta_source != "fit")
    throw Error(ErrorKind::Config, "delta_source must be auto, analytic or fit");
}

SpaceModel RunConfig::make_space() const {
  const auto parts = split(model, ':');
  if (parts[0] == "free-group") {
    if (parts.size() != 2)
      throw Error(ErrorKind::Config, "model free-group:<rank>  (e.g. free-group:2)");
    return SpaceModel::free_group(std::stoi(parts[1]));
  }
  if (parts[0] == "free-product") {
    if (parts.size() != 2)
      throw Error(ErrorKind::Config, "model free-product:<n1,n2,...>");
    std::vector<std::uint32_t> orders;
    for (const std::string& o : split(parts[1], ','))
      orders.push_back(static_cast<std::uint32_t>(std::stoul(o)));
    return SpaceModel::free_product(orders);
  }
  if (parts[0] == "schottky-demo") return SpaceModel::schottky_demo();
  if (parts[0] == "fuchsian-schottky") {
    if (matrices.empty())
      throw Error(ErrorKind::Config,
                  "fuchsian-schottky needs \"matrices\": [[a,b,c,d], ...] in the config");
    return SpaceModel::schottky(matrices);
  }
  throw Error(ErrorKind::Config, "unknown model kind \"" + parts[0] +
                                     "\"; expected free-group, free-product, "
                                     "fuchsian-schottky or schottky-demo");
}

Schedule RunConfig::make_schedule() const {
  Schedule s;
  s.t_offsets = t_offsets;
  s.radius = radius;
  return s;
}

double RunConfig::resolve_delta(const SpaceModel& space, bool* analytic) const {
  const auto a = analytic_delta(space);
  if (delta_source == "analytic" && !a)
    throw Error(ErrorKind::Config, "no analytic critical exponent for this model");
  const bool use_analytic = a && delta_source != "fit";
  if (analytic) *analytic = use_analytic;
  if (use_analytic) return *a;
  return critical_exponent(space, radius).delta_hat;
}

double RunConfig::resolve_p(double delta) const {
  if (p != 0.0) return p;
  return std::max(3.0, std::ceil(2.0 * delta / epsilon0));
}

std::string RunConfig::canonical_json() const {
  json j;
  j["model"] = model;
  j["matrices"] = matrices;
  j["epsilon0"] = epsilon0;
  j["t_offsets"] = t_offsets;
  j["radius"] = radius;
  j["depth"] = depth;
  j["p"] = p;
  j["powers"] = powers;
  j["cauchy_tol"] = cauchy_tol;
  j["refinement_tol"] = refinement_tol;
  j["disk_rel_tol"] = disk_rel_tol;
  j["point_eq_tol"] = point_eq_tol;
  j["memory_budget"] = memory_budget;
  j["seed"] = seed;
  j["delta_source"] = delta_source;
  // threads, cache_dir and out_dir do not affect computed values
  return j.dump();
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_json())));
  return std::string(buf);
}

RunConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  const auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) {
      try {
        field = j.at(key).get<std::decay_t<decltype(field)>>();
      } catch (const json::exception& e) {
        throw Error(ErrorKind::Config,
                    std::string("config field \"") + key + "\": " + e.what());
      }
    }
  };
  get("model", c.model);
  get("matrices", c.matrices);
  get("epsilon0", c.epsilon0);
  get("t_offsets", c.t_offsets);
  get("radius", c.radius);
  get("depth", c.depth);
  get("p", c.p);
  get("powers", c.powers);
  get("cauchy_tol", c.cauchy_tol);
  get("refinement_tol", c.refinement_tol);
  get("disk_rel_tol", c.disk_rel_tol);
  get("point_eq_tol", c.point_eq_tol);
  get("memory_budget", c.memory_budget);
  get("threads", c.threads);
  get("seed", c.seed);
  get("cache_dir", c.cache_dir);
  get("out_dir", c.out_dir);
  get("delta_source", c.delta_source);
  for (const auto& key : j.items()) {
    static const char* known[] = {
        "model",        "matrices",     "epsilon0",      "t_offsets", "radius",
        "depth",        "p",            "powers",        "cauchy_tol",
        "refinement_tol", "disk_rel_tol", "point_eq_tol", "memory_budget",
        "threads",      "seed",         "cache_dir",     "out_dir",
        "delta_source"};
    bool ok = false;
    for (const char* k : known) ok = ok || key.key() == k;
    if (!ok)
      throw Error(ErrorKind::Config, "unknown config field \"" + key.key() +
                                         "\"; see README for the schema");
  }
  c.validate();
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::Config, "cannot open config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return config_from_json_text(os.str());
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

}  // namespace hyp
