#pragma once

// Residual-ratio caps frozen from the calibration sweep (run_calibration,
// `sievelab verify calibration`). The sweep is exact and deterministic; the
// caps are the measured maxima rounded up in the third significant digit.
// Regression tests fail if a recomputed maximum exceeds its cap.

#include <cstdint>

namespace sievelab {

inline constexpr std::uint64_t kCalibrationSeed = 1;

inline constexpr double kLemma1RatioCap = 0.0601;   // measured 0.06 (moebius, N=1000, h=5, Q=20)
inline constexpr double kLemma2RatioCap = 0.0260;   // measured 0.025929... (moebius, N=1000, h=5, Q=50)
inline constexpr double kTheoremRatioCap = 5.14;    // measured 5.13618... (ones, N=10000, h=5, Q=50)

}  // namespace sievelab
