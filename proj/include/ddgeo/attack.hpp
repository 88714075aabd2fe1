#pragma once

#include <string>

#include "ddgeo/data_driven.hpp"

namespace ddgeo {

// Additive input sequence over one horizon window that moves the state inside
// R* and leaves the monitored output unchanged.
struct AttackPlan {
    Vec attack;        // mT, u_a(0..T-1) stacked
    Mat generators;    // mT x k, nonzero columns of U K_0 P
    Subspace rstar;    // subspace the attack excites
    Eigen::Index onset_step = 0;
    Eigen::Index horizon = 0;
    Eigen::Index m = 0;

    // u_a(t) for t in [0, T), zero outside.
    [[nodiscard]] Vec input_at(Eigen::Index t) const;
};

struct AttackOutcome {
    Mat nominal_states;   // n x (steps+1)
    Mat attacked_states;  // n x (steps+1)
    Mat nominal_outputs;  // p x (steps+1)
    Mat attacked_outputs; // p x (steps+1)
    Vec state_deviation;  // ||x_a(t) - x(t)||
    Vec output_deviation; // ||y_a(t) - y(t)||
    Eigen::Index onset_step = 0;
    Eigen::Index window_end = 0;  // onset + T

    [[nodiscard]] Eigen::Index steps() const noexcept { return state_deviation.size() - 1; }
};

// Builds the admissible set Im(U K_0 P) from [X K_0  I⊗R][P; Q] = 0 and picks
// the largest generator, scaled to Euclidean norm `energy`. Throws
// NoStealthyAttack when R* is trivial or every generator vanishes.
AttackPlan design_attack(const ExperimentData& data, const Tolerances& tol, double energy = 1.0,
                         Eigen::Index onset_step = 0);

// Nominal and attacked runs side by side over `total_steps` steps with a
// constant nominal input. Requires onset + T <= total_steps.
AttackOutcome simulate_attack(const LtiSystem& sys, const AttackPlan& plan, const Vec& nominal_input, const Vec& x0,
                              Eigen::Index total_steps);

// Same with a per-step nominal input (m x total_steps).
AttackOutcome simulate_attack(const LtiSystem& sys, const AttackPlan& plan, const Mat& nominal_inputs, const Vec& x0);

// Detected iff some per-step output deviation exceeds `threshold`.
bool detect(const AttackOutcome& outcome, double threshold);

// step,state_deviation,output_deviation,y_nominal_1..p,y_attacked_1..p
std::string attack_outcome_csv(const AttackOutcome& outcome);

}  // namespace ddgeo
