#pragma once

namespace harvestsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace harvestsim
