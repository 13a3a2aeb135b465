#pragma once

namespace slq {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace slq
