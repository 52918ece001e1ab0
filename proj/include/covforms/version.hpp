#pragma once

namespace covforms {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace covforms
