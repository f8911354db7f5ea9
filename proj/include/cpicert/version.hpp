#pragma once

namespace cpicert {

inline constexpr const char* kToolName = "cpicert";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace cpicert
