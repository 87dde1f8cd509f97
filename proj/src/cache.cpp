#include "hyp/cache.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hyp/version.hpp"

namespace hyp {

namespace fs = std::filesystem;
using nlohmann::json;

std::string measure_cache_key(const RunConfig& cfg, std::int64_t depth) {
  json j;
  j["model"] = cfg.model;
  j["matrices"] = cfg.matrices;
  j["epsilon0"] = cfg.epsilon0;
  j["t_offsets"] = cfg.t_offsets;
  j["radius"] = cfg.radius;
  j["depth"] = depth;
  j["cauchy_tol"] = cfg.cauchy_tol;
  j["delta_source"] = cfg.delta_source;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(j.dump())));
  return std::string(buf);
}

namespace {

fs::path cache_path(const RunConfig& cfg, std::int64_t depth) {
  return fs::path(cfg.cache_dir) / (measure_cache_key(cfg, depth) + ".psm");
}

}  // namespace

std::optional<DiscreteBoundaryMeasure> cache_load(const RunConfig& cfg,
                                                  const SpaceModel& space,
                                                  std::int64_t depth) {
  std::ifstream in(cache_path(cfg, depth));
  if (!in) return std::nullopt;
  std::string header;
  if (!std::getline(in, header)) return std::nullopt;
  json j;
  try {
    j = json::parse(header);
  } catch (const json::exception&) {
    return std::nullopt;  // corrupt cache entry counts as a miss
  }
  DiscreteBoundaryMeasure m;
  m.depth = j.value("depth", depth);
  m.interior_remainder = j.value("interior_remainder", 0.0);
  m.total_mass = j.value("total_mass", 1.0);
  m.phi = j.value("phi", 0.0);
  m.cauchy_gap = j.value("cauchy_gap", 0.0);
  m.stage_phis = j.value("stage_phis", std::vector<double>{});
  m.delta_used = j.value("delta_used", 0.0);
  m.delta_analytic = j.value("delta_analytic", false);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) return std::nullopt;
    try {
      m.cells.emplace_back(space.group().parse(line.substr(0, comma)),
                           std::stod(line.substr(comma + 1)));
    } catch (...) {
      return std::nullopt;
    }
  }
  if (m.cells.size() != space.cells_at_depth(depth).size()) return std::nullopt;
  return m;
}

void cache_store(const RunConfig& cfg, const SpaceModel& space,
                 const DiscreteBoundaryMeasure& m, std::int64_t depth) {
  fs::create_directories(cfg.cache_dir);
  const fs::path dest = cache_path(cfg, depth);
  const fs::path tmp = dest.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    json j;
    j["tool"] = kToolName;
    j["version"] = kVersion;
    j["model"] = cfg.model;
    j["depth"] = m.depth;
    j["t_offsets"] = cfg.t_offsets;
    j["radius"] = cfg.radius;
    j["cauchy_tol"] = cfg.cauchy_tol;
    j["interior_remainder"] = m.interior_remainder;
    j["total_mass"] = m.total_mass;
    j["phi"] = m.phi;
    j["cauchy_gap"] = m.cauchy_gap;
    j["stage_phis"] = m.stage_phis;
    j["delta_used"] = m.delta_used;
    j["delta_analytic"] = m.delta_analytic;
    out << j.dump() << "\n";
    for (const auto& [w, mass] : m.cells)
      out << space.group().str(w) << "," << fmt_g17(mass) << "\n";
  }
  fs::rename(tmp, dest);
}

DiscreteBoundaryMeasure ps_measure_cached(const RunConfig& cfg,
                                          const SpaceModel& space,
                                          std::int64_t depth) {
  if (auto hit = cache_load(cfg, space, depth)) return *hit;
  DiscreteBoundaryMeasure m = ps_measure(space, cfg.make_schedule(), depth,
                                         cfg.cauchy_tol);
  cache_store(cfg, space, m, depth);
  return m;
}

}  // namespace hyp
