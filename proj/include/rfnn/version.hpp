#pragma once

namespace rfnn {

inline constexpr const char* kVersion = "rfnn 0.1.0";

} // namespace rfnn
