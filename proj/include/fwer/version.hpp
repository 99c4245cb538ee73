#pragma once

namespace fwer {

inline constexpr const char* kToolName = "fwer";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace fwer
