#pragma once

namespace zeic {

inline constexpr const char* kProjectName = "zeic";
inline constexpr const char* kVersion = "0.1.0";

} // namespace zeic
