#pragma once

namespace badlab {

inline constexpr const char* kVersion = "0.3.0";

}  // namespace badlab
