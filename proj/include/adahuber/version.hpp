#pragma once

namespace adahuber {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace adahuber
