#pragma once

namespace critwave {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace critwave
