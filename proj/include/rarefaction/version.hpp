#pragma once

namespace rarefaction {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rarefaction
