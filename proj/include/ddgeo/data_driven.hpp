#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "ddgeo/lti.hpp"

namespace ddgeo {

// Model-free geometric control: everything in this header works on recorded
// data only and never touches (A, B, C).

// Coefficients expressing a trajectory as a combination of the experiments:
// x0 = X0 K_U alpha (free response), u = U K_0 beta (forced response).
struct TrajectoryCoefficients {
    Vec alpha;
    Vec beta;
};

struct ReconstructedTrajectory {
    TrajectoryCoefficients coefficients;
    Vec states;   // x(1..T) stacked, nT
    Vec outputs;  // y(0..T-1) stacked, pT
};

// Throws NotPersistentlyExciting / HorizonTooShort when the data cannot
// support the geometric formulas.
void require_informative(const ExperimentData& data, const Tolerances& tol);

// `inputs` is m x T (column t = u(t)).
ReconstructedTrajectory reconstruct_trajectory(const ExperimentData& data, const Vec& x0, const Mat& inputs,
                                               const Tolerances& tol);

// [Y K_U  Y K_0] kernel; each column stacks (alpha; beta) of a zero-output
// trajectory over the horizon.
Mat zero_output_coefficients(const ExperimentData& data, const Tolerances& tol);

// V* = [X0 K_U  0] Ker [Y K_U  Y K_0]
Subspace vstar_dd(const ExperimentData& data, const Tolerances& tol);

// Ker(Y K_0); each column is a beta giving a zero-output trajectory from x(0) = 0.
Mat zero_output_forced_coefficients(const ExperimentData& data, const Tolerances& tol);

// S* = H X K_0 Ker(Y K_0), H selecting the final state x(T).
Subspace sstar_dd(const ExperimentData& data, const Tolerances& tol);

// V* ∩ S*
Subspace rstar_dd(const ExperimentData& data, const Tolerances& tol);

// G = X_{0,T}^+ + K gamma with X_{0,T} G = I, so that A + BF = X_{1,T} G and
// F = U_{0,T} G. `residual` is ||(I - VV^+) X_{1,T} G V||_F.
struct ClosedLoopFactor {
    Mat g;
    Mat gain;
    Mat closed_loop;
    double residual = 0.0;
};

// Gain confining the state to `v`. Requires [U_{0,T}; X_{0,T}] full row rank
// (TrajectoryNotInformative) and throws ResidualExceedsTolerance when `v` is
// not invariant under the resulting closed loop.
ClosedLoopFactor closed_loop_factor(const SingleTrajectory& traj, const Subspace& v, const Tolerances& tol);

Mat feedback_dd(const SingleTrajectory& traj, const Subspace& v, const Tolerances& tol);

struct ZeroCandidate {
    std::complex<double> z;
    Eigen::Index kernel_dim = 0;
    bool is_zero = false;
    // Unit-norm kernel vector split into trajectory coefficients w and the
    // geometric-trajectory direction v (in R^n coordinates).
    std::optional<std::pair<CVec, CVec>> witness;
};

// Membership test for one candidate z: z is an invariant zero iff the
// geometric sequence z^t v, t = 0..T, with v ∈ V* \ {0}, is a state trajectory
// of the recorded data, i.e. Im [X0; X] ∩ Im (zeta ⊗ V) ≠ {0} with
// zeta = [1 z ... z^T]^T. Throws DegenerateSystem when R* is nontrivial.
ZeroCandidate zero_membership_dd(const ExperimentData& data, const Subspace& vstar, std::complex<double> z,
                                 const Tolerances& tol);

// Invariant zeros as eigenvalues of the V*-block of the block-triangularized
// closed loop X_{1,T} G. Throws BlockTriangularizationFailed when the lower
// left block does not vanish.
std::vector<std::complex<double>> zeros_dd(const SingleTrajectory& traj, const Subspace& vstar, const Tolerances& tol);

}  // namespace ddgeo
