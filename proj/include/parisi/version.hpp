#pragma once

namespace parisi {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace parisi
