#pragma once

namespace mgwt {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace mgwt
