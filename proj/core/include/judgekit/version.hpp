#pragma once

namespace judgekit {

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace judgekit
