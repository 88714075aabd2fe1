#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "ddgeo/lti.hpp"

namespace ddgeo {

// Randomized agreement check between the data-driven routines and the model
// oracle, as run by `ddgeo verify`.
struct VerificationConfig {
    int trials = 100;
    std::uint64_t seed = 1;
    Tolerances tol{};
};

struct TrialResult {
    std::uint64_t seed = 0;
    Eigen::Index n = 0, m = 0, p = 0;
    Eigen::Index vstar_dim = 0, sstar_dim = 0, rstar_dim = 0;
    double vstar_angle = 0.0, sstar_angle = 0.0, rstar_angle = 0.0;
    bool subspaces_ok = false;
    double feedback_residual = 0.0;  // model side, ||(I - VV^T)(A + BF)V||
    bool feedback_ok = false;
    double closed_loop_drift = 0.0; // 50-step A + BF run from inside V*, informational
    bool zeros_checked = false;      // false for degenerate systems
    bool zeros_ok = true;
    std::string error;               // set when a routine threw

    [[nodiscard]] bool passed() const { return error.empty() && subspaces_ok && feedback_ok && zeros_ok; }
};

struct VerificationReport {
    std::vector<TrialResult> trials;

    [[nodiscard]] int failures() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

// n in [2, 6], m and p in [1, 3], A scaled to spectral radius 0.95.
LtiSystem random_trial_system(std::uint64_t seed);

TrialResult run_trial(const LtiSystem& sys, std::uint64_t seed, const Tolerances& tol);

VerificationReport run_verification(const VerificationConfig& cfg);

}  // namespace ddgeo
