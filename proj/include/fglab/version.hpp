#pragma once

namespace fglab {
inline constexpr const char* kVersion = "0.1.0";
}
