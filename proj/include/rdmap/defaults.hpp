#pragma once

#include <cstdint>

// Numerical policy shared across the library.  All tolerances that decide a
// verdict live here or in RunConfig so results are reproducible from source.

namespace rdmap {

inline constexpr const char* kVersion = "0.1.0";

// Structural validation: hermiticity / CPTP / unitarity residuals.
inline constexpr double kStructTol = 1e-9;

// Default verdict tolerance for condition checks and freeness tests.
inline constexpr double kCheckTol = 1e-8;

// Eigenvalues below this are treated as outside the support (logs, inverses).
inline constexpr double kSupportCutoff = 1e-12;

// Jacobi eigensolver: off-diagonal target and sweep cap.
inline constexpr double kJacobiTol = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;

// Marginal eigenvalues closer than this are one degenerate block.
inline constexpr double kDegeneracyGap = 1e-8;

// Kraus arms with weight below this are skipped in per-arm tests.
inline constexpr double kArmWeightFloor = 1e-12;

struct RunConfig {
    double tol = kCheckTol;        // verdict tolerance
    int samples = 200;             // states per sampled check
    int remixes = 1000;            // remixed decompositions per selective search
    std::uint64_t seed = 20260823; // master RNG seed
};

}  // namespace rdmap
