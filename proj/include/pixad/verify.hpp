#pragma once

#include <string>

#include "pixad/exec.hpp"

namespace pixad {

// Equivalence suite: seeded pam-vs-dense-oracle sweep, a degenerate-tile
// halo-vs-global case and a fixed HOG cross-check. f64 only; tolerances are
// pinned here, not configurable.
struct VerifyOptions {
    u64 seed = 42;
    int cases = 20;
    int threads = 1;
    Isa isa = Isa::Auto;
    double perturb = 0.0;  // failure-injection: offsets one theta weight
};

struct VerifyReport {
    std::string text;            // full deterministic report
    bool pass = false;
    int cases_run = 0;
    double max_abs_diff = 0.0;       // over the pam/pga sweep
    double max_rowsum_dev = 0.0;     // attention rows vs 1, over all cases
};

inline constexpr double kVerifyTol = 1e-9;
inline constexpr double kRowSumTol = 1e-12;
inline constexpr double kHogCrossTol = 1e-12;

VerifyReport run_verify(const VerifyOptions& opts);

// Central-difference check of pam_backward on a fixed [1, 3, 5, 5], k = 3
// problem: every coordinate of input, theta, phi, omega (weights and biases).
struct GradcheckOptions {
    u64 seed = 42;
    double eps = 1e-5;
    double tol = 1e-6;
};

struct GradcheckReport {
    std::string text;
    bool pass = false;
    int coords = 0;
    double max_rel_err = 0.0;
};

GradcheckReport run_gradcheck(const GradcheckOptions& opts);

}  // namespace pixad
