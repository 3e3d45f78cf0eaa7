#pragma once

namespace acs {

inline constexpr const char* kVersion = "0.1.0";

} // namespace acs
