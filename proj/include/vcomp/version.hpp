#pragma once

namespace vcomp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace vcomp
