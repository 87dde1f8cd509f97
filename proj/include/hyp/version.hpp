#pragma once

namespace hyp {

inline constexpr const char* kToolName = "hypcone";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace hyp
