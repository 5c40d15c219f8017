#pragma once

namespace uwnav {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace uwnav
