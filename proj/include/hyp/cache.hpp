#pragma once

#include <optional>
#include <string>

#include "hyp/config.hpp"
#include "hyp/measures.hpp"

namespace hyp {

/// Cache key for a Patterson-Sullivan measure: every parameter that affects
/// the masses (model, schedule, depth, tolerance, delta source).
std::string measure_cache_key(const RunConfig& cfg, std::int64_t depth);

/// Loads a cached measure, or nothing on a miss. The file holds a JSON
/// header line (model, delta, schedule, tolerances) followed by
/// "cell,mass" rows in length-lex order with 17 significant digits, so a
/// reload reproduces the in-memory doubles bit for bit.
std::optional<DiscreteBoundaryMeasure> cache_load(const RunConfig& cfg,
                                                  const SpaceModel& space,
                                                  std::int64_t depth);

/// Stores via a temp file plus atomic rename (single writer per key).
void cache_store(const RunConfig& cfg, const SpaceModel& space,
                 const DiscreteBoundaryMeasure& m, std::int64_t depth);

/// ps_measure through the cache: hits never recompute.
DiscreteBoundaryMeasure ps_measure_cached(const RunConfig& cfg,
                                          const SpaceModel& space,
                                          std::int64_t depth);

}  // namespace hyp
