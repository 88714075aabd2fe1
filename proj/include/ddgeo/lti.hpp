#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ddgeo/linalg.hpp"

namespace ddgeo {

// Discrete-time LTI system x(t+1) = A x(t) + B u(t), y(t) = C x(t).
// Used as ground truth for data generation and the model-based oracle only;
// the data-driven routines never see it.
class LtiSystem {
public:
    LtiSystem(Mat a, Mat b, Mat c);

    [[nodiscard]] const Mat& A() const noexcept { return a_; }
    [[nodiscard]] const Mat& B() const noexcept { return b_; }
    [[nodiscard]] const Mat& C() const noexcept { return c_; }

    [[nodiscard]] Eigen::Index n() const noexcept { return a_.rows(); }
    [[nodiscard]] Eigen::Index m() const noexcept { return b_.cols(); }
    [[nodiscard]] Eigen::Index p() const noexcept { return c_.rows(); }

    // [A; A^2; ...; A^T]
    [[nodiscard]] Mat state_observability(Eigen::Index horizon) const;
    // Lower block-triangular map from stacked inputs u(0..T-1) to x(1..T).
    [[nodiscard]] Mat state_forcing(Eigen::Index horizon) const;
    // [C; CA; ...; CA^(T-1)]
    [[nodiscard]] Mat output_observability(Eigen::Index horizon) const;
    // Strictly lower block-triangular map from u(0..T-1) to y(0..T-1).
    [[nodiscard]] Mat output_forcing(Eigen::Index horizon) const;

private:
    Mat a_, b_, c_;
};

// One state/input record x(0..T), u(0..T-1).
class SingleTrajectory {
public:
    // states: n x (T+1), inputs: m x T.
    SingleTrajectory(Mat states, Mat inputs);

    [[nodiscard]] Eigen::Index n() const noexcept { return states_.rows(); }
    [[nodiscard]] Eigen::Index m() const noexcept { return inputs_.rows(); }
    [[nodiscard]] Eigen::Index horizon() const noexcept { return inputs_.cols(); }

    [[nodiscard]] const Mat& states() const noexcept { return states_; }
    [[nodiscard]] const Mat& inputs() const noexcept { return inputs_; }

    // [x(0) .. x(T-1)]
    [[nodiscard]] Mat x0() const { return states_.leftCols(horizon()); }
    // [x(1) .. x(T)]
    [[nodiscard]] Mat x1() const { return states_.rightCols(horizon()); }
    // [u(0) .. u(T-1)]
    [[nodiscard]] const Mat& u0() const noexcept { return inputs_; }

    // x(1..T) stacked into one nT vector.
    [[nodiscard]] Vec stacked_states() const;
    // u(0..T-1) stacked into one mT vector.
    [[nodiscard]] Vec stacked_inputs() const;

    // Max over t of ||x(t+1) - A x(t) - B u(t)||.
    [[nodiscard]] double recursion_residual(const LtiSystem& sys) const;

private:
    Mat states_, inputs_;
};

struct ExperimentConfig {
    Eigen::Index horizon = 0;      // 0 selects n
    Eigen::Index experiments = 0;  // 0 selects n + m*T + 2n
    std::uint64_t seed = 0;
    double input_scale = 1.0;
    double state_scale = 1.0;

    // Fills in defaults for `sys` and validates.
    [[nodiscard]] ExperimentConfig resolved(const LtiSystem& sys) const;
};

// Stacked data matrices of N open-loop experiments of horizon T, with the
// kernels of U and X0 cached.
class ExperimentData {
public:
    // x: nT x N (x(1..T) per column), x0: n x N, y: pT x N (y(0..T-1)),
    // u: mT x N (u(0..T-1)).
    ExperimentData(Eigen::Index n, Eigen::Index m, Eigen::Index p, Eigen::Index horizon, Mat x, Mat x0, Mat y, Mat u,
                   const Tolerances& tol = {});

    [[nodiscard]] Eigen::Index n() const noexcept { return n_; }
    [[nodiscard]] Eigen::Index m() const noexcept { return m_; }
    [[nodiscard]] Eigen::Index p() const noexcept { return p_; }
    [[nodiscard]] Eigen::Index horizon() const noexcept { return horizon_; }
    [[nodiscard]] Eigen::Index experiments() const noexcept { return x_.cols(); }

    [[nodiscard]] const Mat& X() const noexcept { return x_; }
    [[nodiscard]] const Mat& X0() const noexcept { return x0_; }
    [[nodiscard]] const Mat& Y() const noexcept { return y_; }
    [[nodiscard]] const Mat& U() const noexcept { return u_; }

    // Basis(Ker U) and Basis(Ker X0), N x dim.
    [[nodiscard]] const Mat& KU() const noexcept { return ku_.basis(); }
    [[nodiscard]] const Mat& K0() const noexcept { return k0_.basis(); }

    // Seed recorded in the manifest; 0 when unknown.
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    void set_seed(std::uint64_t seed) noexcept { seed_ = seed; }

private:
    Eigen::Index n_, m_, p_, horizon_;
    std::uint64_t seed_ = 0;
    Mat x_, x0_, y_, u_;
    Subspace ku_, k0_;
};

SingleTrajectory simulate(const LtiSystem& sys, const Vec& x0, const Mat& inputs);

ExperimentData collect(const LtiSystem& sys, const ExperimentConfig& cfg, const Tolerances& tol = {});

// Open-loop trajectory with Gaussian initial state and inputs, for the
// single-trajectory routines.
SingleTrajectory random_trajectory(const LtiSystem& sys, Eigen::Index horizon, std::uint64_t seed);

// rank [X0; U] == n + mT, plus X0*K_U and U*K_0 full row rank.
bool is_persistently_exciting(const ExperimentData& data, const Tolerances& tol);

// 11-state follower dynamics of the leader-follower consensus network with
// leaders {12, 13, 14} as inputs and nodes {4, 11} as monitors.
LtiSystem consensus_example();

// Gaussian (A, B, C) with A rescaled to spectral radius `radius`.
LtiSystem random_system(Eigen::Index n, Eigen::Index m, Eigen::Index p, std::uint64_t seed, double radius = 0.95);

// Controllable canonical realization of a strictly proper SISO transfer
// function with monic numerator prod(z - zeros) and denominator prod(z - poles).
// Requires zeros.size() < poles.size().
LtiSystem siso_from_zeros_poles(const std::vector<double>& zeros, const std::vector<double>& poles);

}  // namespace ddgeo
