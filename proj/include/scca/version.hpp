#pragma once

namespace scca {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace scca
