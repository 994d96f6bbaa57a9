#pragma once

#include <numbers>

namespace wavesel {

// 2019 SI exact values.
inline constexpr double kSpeedOfLight = 299792458.0;         // m/s
inline constexpr double kPlanck = 6.62607015e-34;            // J s

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kReducedPlanck = kPlanck / (2.0 * kPi);

}  // namespace wavesel
