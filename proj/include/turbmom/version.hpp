#pragma once

namespace turbmom {

inline constexpr const char* kVersion = "0.1.0";

} // namespace turbmom
