#pragma once

namespace sklab {

inline constexpr const char* kToolName = "sklab";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace sklab
