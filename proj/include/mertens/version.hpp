#pragma once

namespace mertens {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace mertens
