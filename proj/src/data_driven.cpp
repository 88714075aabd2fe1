#include "ddgeo/data_driven.hpp"

#include <algorithm>
#include <string>

#include "ddgeo/oracle.hpp"

namespace ddgeo {

namespace {

// Final-state selector H = [0 ... 0 I_n] applied to a stacked trajectory block.
Mat final_states(const ExperimentData& data, const Mat& stacked) { return stacked.bottomRows(data.n()); }

ClosedLoopFactor compute_factor(const SingleTrajectory& traj, const Subspace& v, const Tolerances& tol) {
    const Eigen::Index n = traj.n(), m = traj.m();
    if (v.ambient_dim() != n) fail(ErrorCode::DimensionMismatch, "subspace is not in R^n");
    const Mat x0 = traj.x0();
    const Mat x1 = traj.x1();
    const Mat& u0 = traj.u0();

    Mat informative(m + n, traj.horizon());
    informative << u0, x0;
    if (rank_tol(informative, tol) != m + n) {
        fail(ErrorCode::TrajectoryNotInformative,
             "[U_0; X_0] must have full row rank " + std::to_string(m + n) + " (horizon " +
                 std::to_string(traj.horizon()) + ")");
    }

    const Mat x0_pinv = pinv(x0, tol);
    const Mat k = kernel_basis(x0, tol).basis();
    const Mat complement = Mat::Identity(n, n) - v.projector();
    const Mat v_proj = v.projector();

    Mat g = x0_pinv;
    if (k.cols() > 0) {
        const Mat gamma = -pinv(complement * x1 * k, tol) * complement * x1 * x0_pinv * v_proj;
        g += k * gamma;
    }

    ClosedLoopFactor out;
    out.gain = u0 * g;
    out.closed_loop = x1 * g;
    out.residual = v.is_trivial() ? 0.0 : (complement * out.closed_loop * v.basis()).norm();
    out.g = std::move(g);
    return out;
}

double data_scale(const ClosedLoopFactor& f) { return std::max(1.0, f.closed_loop.norm()); }

}  // namespace

void require_informative(const ExperimentData& data, const Tolerances& tol) {
    if (data.horizon() < data.n()) {
        fail(ErrorCode::HorizonTooShort, "horizon T = " + std::to_string(data.horizon()) + " is shorter than n = " +
                                             std::to_string(data.n()));
    }
    if (!is_persistently_exciting(data, tol)) {
        fail(ErrorCode::NotPersistentlyExciting, "rank [X0; U] < n + mT: data are not persistently exciting");
    }
}

ReconstructedTrajectory reconstruct_trajectory(const ExperimentData& data, const Vec& x0, const Mat& inputs,
                                               const Tolerances& tol) {
    if (!is_persistently_exciting(data, tol)) {
        fail(ErrorCode::NotPersistentlyExciting, "rank [X0; U] < n + mT: data are not persistently exciting");
    }
    if (x0.size() != data.n()) fail(ErrorCode::DimensionMismatch, "initial state length differs from n");
    if (inputs.rows() != data.m() || inputs.cols() != data.horizon()) {
        fail(ErrorCode::DimensionMismatch, "input sequence must be m x T");
    }
    const Vec u = inputs.reshaped();
    ReconstructedTrajectory out;
    out.coefficients.alpha = pinv(data.X0() * data.KU(), tol) * x0;
    out.coefficients.beta = pinv(data.U() * data.K0(), tol) * u;
    out.states = data.X() * (data.KU() * out.coefficients.alpha + data.K0() * out.coefficients.beta);
    out.outputs = data.Y() * (data.KU() * out.coefficients.alpha + data.K0() * out.coefficients.beta);
    return out;
}

Mat zero_output_coefficients(const ExperimentData& data, const Tolerances& tol) {
    Mat stacked(data.Y().rows(), data.KU().cols() + data.K0().cols());
    stacked << data.Y() * data.KU(), data.Y() * data.K0();
    return kernel_basis(stacked, tol).basis();
}

Subspace vstar_dd(const ExperimentData& data, const Tolerances& tol) {
    require_informative(data, tol);
    const Mat coeffs = zero_output_coefficients(data, tol);
    // only the free-response part alpha fixes the initial state
    const Mat free_initial = data.X0() * data.KU();
    return image_basis(free_initial * coeffs.topRows(data.KU().cols()), tol, spectral_norm(free_initial));
}

Mat zero_output_forced_coefficients(const ExperimentData& data, const Tolerances& tol) {
    return kernel_basis(Mat(data.Y() * data.K0()), tol).basis();
}

Subspace sstar_dd(const ExperimentData& data, const Tolerances& tol) {
    require_informative(data, tol);
    const Mat beta = zero_output_forced_coefficients(data, tol);
    const Mat forced_final = final_states(data, data.X() * data.K0());
    // scale from the raw final states: with B = 0, X K_0 itself is pure roundoff
    return image_basis(forced_final * beta, tol, spectral_norm(final_states(data, data.X())));
}

Subspace rstar_dd(const ExperimentData& data, const Tolerances& tol) {
    return intersect(vstar_dd(data, tol), sstar_dd(data, tol), tol);
}

ClosedLoopFactor closed_loop_factor(const SingleTrajectory& traj, const Subspace& v, const Tolerances& tol) {
    ClosedLoopFactor f = compute_factor(traj, v, tol);
    if (f.residual > tol.residual_abs * data_scale(f)) {
        fail(ErrorCode::ResidualExceedsTolerance,
             "closed loop does not leave the subspace invariant (residual " + std::to_string(f.residual) + ")");
    }
    return f;
}

Mat feedback_dd(const SingleTrajectory& traj, const Subspace& v, const Tolerances& tol) {
    return closed_loop_factor(traj, v, tol).gain;
}

ZeroCandidate zero_membership_dd(const ExperimentData& data, const Subspace& vstar, std::complex<double> z,
                                 const Tolerances& tol) {
    require_informative(data, tol);
    if (vstar.ambient_dim() != data.n()) fail(ErrorCode::DimensionMismatch, "V* is not in R^n");
    const Subspace rstar = intersect(vstar, sstar_dd(data, tol), tol);
    if (!rstar.is_trivial()) {
        fail(ErrorCode::DegenerateSystem, "system is degenerate: R* has dimension " + std::to_string(rstar.dim()));
    }

    ZeroCandidate out{z, 0, false, std::nullopt};
    if (vstar.is_trivial()) return out;

    const Eigen::Index n = data.n(), horizon = data.horizon(), d = vstar.dim();
    Mat trajectories(n * (horizon + 1), data.experiments());
    trajectories << data.X0(), data.X();
    const Mat q = image_basis(trajectories, tol).basis();

    CVec zeta(horizon + 1);
    zeta(0) = 1.0;
    for (Eigen::Index t = 1; t <= horizon; ++t) zeta(t) = zeta(t - 1) * z;
    zeta /= zeta.norm();
    const CMat geometric = kron(CMat(zeta), CMat(vstar.basis().cast<std::complex<double>>()));

    CMat stacked(q.rows(), q.cols() + d);
    stacked << q.cast<std::complex<double>>(), -geometric;
    const CMat kernel = kernel_basis(stacked, tol);
    out.kernel_dim = kernel.cols();
    if (kernel.cols() == 0) return out;

    const CVec w = kernel.col(0).head(q.cols());
    const CVec v = vstar.basis().cast<std::complex<double>>() * kernel.col(0).tail(d);
    out.is_zero = v.norm() > 1e-8;
    out.witness = std::make_pair(w, v);
    return out;
}

std::vector<std::complex<double>> zeros_dd(const SingleTrajectory& traj, const Subspace& vstar, const Tolerances& tol) {
    if (vstar.ambient_dim() != traj.n()) fail(ErrorCode::DimensionMismatch, "V* is not in R^n");
    if (vstar.is_trivial()) return {};
    const ClosedLoopFactor f = compute_factor(traj, vstar, tol);

    const Eigen::Index n = traj.n(), d = vstar.dim();
    Mat basis_change(n, n);  // [V | V_perp], orthogonal
    basis_change << vstar.basis(), kernel_basis(Mat(vstar.basis().transpose()), tol).basis();
    const Mat transformed = basis_change.transpose() * f.closed_loop * basis_change;

    const double lower_left = transformed.bottomLeftCorner(n - d, d).norm();
    if (lower_left > tol.residual_abs * data_scale(f)) {
        fail(ErrorCode::BlockTriangularizationFailed,
             "closed loop is not block triangular in V* coordinates (||M21|| = " + std::to_string(lower_left) + ")");
    }
    const Eigen::VectorXcd eig = Mat(transformed.topLeftCorner(d, d)).eigenvalues();
    std::vector<std::complex<double>> zeros(eig.data(), eig.data() + eig.size());
    sort_zeros(zeros);
    return zeros;
}

}  // namespace ddgeo
