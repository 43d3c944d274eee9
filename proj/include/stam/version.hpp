#pragma once

namespace stam {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace stam
