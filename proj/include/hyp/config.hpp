#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyp/measures.hpp"
#include "hyp/space.hpp"

namespace hyp {

/// One run's worth of knobs. Every field has a documented default; flags and
/// HYP_* environment variables override the config file, which overrides
/// the defaults.
struct RunConfig {
  std::string model = "free-group:2";  // free-group:k | free-product:n1,n2,..
                                       // | schottky-demo | fuchsian-schottky
  std::vector<std::array<double, 4>> matrices;  // for fuchsian-schottky

  double epsilon0 = 1.0;
  std::vector<double> t_offsets{0.2, 0.1, 0.05, 0.025};
  std::int64_t radius = 12;
  std::int64_t depth = 6;
  double p = 0.0;  // 0 = auto: max(3, ceil(2 delta / eps0))
  std::vector<std::int64_t> powers{1, 2, 4, 8, 16};

  double cauchy_tol = 1e-3;
  double refinement_tol = 1e-6;
  double disk_rel_tol = 1e-9;
  double point_eq_tol = 1e-12;

  std::uint64_t memory_budget = 2ull << 30;  // bytes
  int threads = 0;                           // 0 = hardware
  std::uint64_t seed = 0;
  std::string cache_dir = ".hypcone-cache";
  std::string out_dir = "out";
  std::string delta_source = "auto";  // auto | analytic | fit

  void validate() const;
  SpaceModel make_space() const;
  Schedule make_schedule() const;
  /// Effective delta per delta_source; records whether the analytic value won.
  double resolve_delta(const SpaceModel& space, bool* analytic = nullptr) const;
  double resolve_p(double delta) const;

  /// Canonical JSON (sorted keys) covering every value-bearing field.
  std::string canonical_json() const;
  /// FNV-1a 64 hash of the canonical JSON, hex encoded.
  std::string hash() const;
};

RunConfig config_from_json_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

std::uint64_t fnv1a64(const std::string& text);
std::string fmt_g17(double v);

}  // namespace hyp
