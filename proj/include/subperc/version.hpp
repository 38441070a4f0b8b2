#pragma once

namespace subperc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace subperc
