#include "ddgeo/lti.hpp"

#include <random>
#include <string>

namespace ddgeo {

namespace {

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

Mat gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double scale) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Mat out(rows, cols);
    // column-major fill order is part of the reproducibility contract
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = scale * normal(rng);
    }
    return out;
}

// Coefficients of prod(z - r_i), highest power first.
std::vector<double> monic_poly(const std::vector<double>& roots) {
    std::vector<double> c{1.0};
    for (double r : roots) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i];
            next[i + 1] -= r * c[i];
        }
        c = std::move(next);
    }
    return c;
}

}  // namespace

LtiSystem::LtiSystem(Mat a, Mat b, Mat c) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    if (a_.rows() < 1 || a_.rows() != a_.cols()) fail(ErrorCode::DimensionMismatch, "A must be square with n >= 1");
    if (b_.rows() != a_.rows() || b_.cols() < 1) fail(ErrorCode::DimensionMismatch, "B must be n x m with m >= 1");
    if (c_.cols() != a_.rows() || c_.rows() < 1) fail(ErrorCode::DimensionMismatch, "C must be p x n with p >= 1");
    require_finite(a_, "A");
    require_finite(b_, "B");
    require_finite(c_, "C");
}

Mat LtiSystem::state_observability(Eigen::Index horizon) const {
    const Eigen::Index nn = n();
    Mat out(nn * horizon, nn);
    Mat power = a_;
    for (Eigen::Index t = 0; t < horizon; ++t) {
        out.middleRows(t * nn, nn) = power;
        power = a_ * power;
    }
    return out;
}

Mat LtiSystem::state_forcing(Eigen::Index horizon) const {
    const Eigen::Index nn = n(), mm = m();
    Mat out = Mat::Zero(nn * horizon, mm * horizon);
    Mat markov = b_;  // A^k B
    for (Eigen::Index k = 0; k < horizon; ++k) {
        for (Eigen::Index j = 0; j + k < horizon; ++j) out.block((j + k) * nn, j * mm, nn, mm) = markov;
        markov = a_ * markov;
    }
    return out;
}

Mat LtiSystem::output_observability(Eigen::Index horizon) const {
    const Eigen::Index nn = n(), pp = p();
    Mat out(pp * horizon, nn);
    Mat row = c_;
    for (Eigen::Index t = 0; t < horizon; ++t) {
        out.middleRows(t * pp, pp) = row;
        row = row * a_;
    }
    return out;
}

Mat LtiSystem::output_forcing(Eigen::Index horizon) const {
    const Eigen::Index pp = p(), mm = m();
    Mat out = Mat::Zero(pp * horizon, mm * horizon);
    Mat markov = b_;  // A^k B
    for (Eigen::Index k = 0; k + 1 < horizon; ++k) {
        const Mat block = c_ * markov;
        for (Eigen::Index j = 0; j + k + 1 < horizon; ++j) out.block((j + k + 1) * pp, j * mm, pp, mm) = block;
        markov = a_ * markov;
    }
    return out;
}

SingleTrajectory::SingleTrajectory(Mat states, Mat inputs) : states_(std::move(states)), inputs_(std::move(inputs)) {
    if (states_.cols() != inputs_.cols() + 1) {
        fail(ErrorCode::DimensionMismatch, "trajectory needs one more state sample than input samples");
    }
    require_finite(states_, "trajectory states");
    require_finite(inputs_, "trajectory inputs");
}

Vec SingleTrajectory::stacked_states() const {
    const Mat tail = x1();
    return tail.reshaped();
}

Vec SingleTrajectory::stacked_inputs() const { return inputs_.reshaped(); }

double SingleTrajectory::recursion_residual(const LtiSystem& sys) const {
    if (sys.n() != n() || sys.m() != m()) fail(ErrorCode::DimensionMismatch, "trajectory and system dimensions differ");
    if (horizon() == 0) return 0.0;
    return (x1() - sys.A() * x0() - sys.B() * inputs_).colwise().norm().maxCoeff();
}

ExperimentConfig ExperimentConfig::resolved(const LtiSystem& sys) const {
    ExperimentConfig out = *this;
    if (out.horizon == 0) out.horizon = sys.n();
    if (out.experiments == 0) out.experiments = sys.n() + sys.m() * out.horizon + 2 * sys.n();
    if (out.horizon < 1 || out.experiments < 1) fail(ErrorCode::InvalidArgument, "horizon and experiment count must be >= 1");
    if (!(out.input_scale > 0.0) || !(out.state_scale > 0.0)) {
        fail(ErrorCode::InvalidArgument, "input and state scales must be positive");
    }
    return out;
}

ExperimentData::ExperimentData(Eigen::Index n, Eigen::Index m, Eigen::Index p, Eigen::Index horizon, Mat x, Mat x0,
                               Mat y, Mat u, const Tolerances& tol)
    : n_(n), m_(m), p_(p), horizon_(horizon), x_(std::move(x)), x0_(std::move(x0)), y_(std::move(y)), u_(std::move(u)) {
    if (n < 1 || m < 1 || p < 1 || horizon < 1) fail(ErrorCode::InvalidArgument, "n, m, p and T must be >= 1");
    const Eigen::Index cols = x_.cols();
    const auto check = [&](const Mat& mat, Eigen::Index rows, const char* name) {
        if (mat.rows() != rows || mat.cols() != cols) {
            fail(ErrorCode::DimensionMismatch, std::string(name) + " is " + std::to_string(mat.rows()) + "x" +
                                                   std::to_string(mat.cols()) + ", expected " + std::to_string(rows) +
                                                   "x" + std::to_string(cols));
        }
        require_finite(mat, name);
    };
    check(x_, n * horizon, "X");
    check(x0_, n, "X0");
    check(y_, p * horizon, "Y");
    check(u_, m * horizon, "U");
    ku_ = kernel_basis(u_, tol);
    k0_ = kernel_basis(x0_, tol);
}

SingleTrajectory simulate(const LtiSystem& sys, const Vec& x0, const Mat& inputs) {
    if (x0.size() != sys.n()) fail(ErrorCode::DimensionMismatch, "initial state length differs from n");
    if (inputs.rows() != sys.m()) fail(ErrorCode::DimensionMismatch, "input rows differ from m");
    Mat states(sys.n(), inputs.cols() + 1);
    states.col(0) = x0;
    for (Eigen::Index t = 0; t < inputs.cols(); ++t) {
        states.col(t + 1) = sys.A() * states.col(t) + sys.B() * inputs.col(t);
    }
    return {std::move(states), inputs};
}

ExperimentData collect(const LtiSystem& sys, const ExperimentConfig& cfg, const Tolerances& tol) {
    const ExperimentConfig c = cfg.resolved(sys);
    const Eigen::Index n = sys.n(), m = sys.m(), p = sys.p(), horizon = c.horizon, count = c.experiments;
    Mat x(n * horizon, count), x0(n, count), y(p * horizon, count), u(m * horizon, count);
    for (Eigen::Index i = 0; i < count; ++i) {
        auto rng = stream_for(c.seed, static_cast<std::uint64_t>(i));
        const Vec init = gaussian(rng, n, 1, c.state_scale);
        const Mat inputs = gaussian(rng, m, horizon, c.input_scale);
        const SingleTrajectory traj = simulate(sys, init, inputs);
        x0.col(i) = init;
        x.col(i) = traj.stacked_states();
        u.col(i) = traj.stacked_inputs();
        const Mat outputs = sys.C() * traj.x0();
        y.col(i) = outputs.reshaped();
    }
    ExperimentData data(n, m, p, horizon, std::move(x), std::move(x0), std::move(y), std::move(u), tol);
    data.set_seed(c.seed);
    return data;
}

SingleTrajectory random_trajectory(const LtiSystem& sys, Eigen::Index horizon, std::uint64_t seed) {
    if (horizon < 1) fail(ErrorCode::InvalidArgument, "trajectory horizon must be >= 1");
    auto rng = stream_for(seed, ~std::uint64_t{0});
    const Vec init = gaussian(rng, sys.n(), 1, 1.0);
    const Mat inputs = gaussian(rng, sys.m(), horizon, 1.0);
    return simulate(sys, init, inputs);
}

bool is_persistently_exciting(const ExperimentData& data, const Tolerances& tol) {
    const Eigen::Index n = data.n(), mt = data.m() * data.horizon();
    if (data.experiments() < n + mt) return false;
    Mat stacked(n + mt, data.experiments());
    stacked << data.X0(), data.U();
    if (rank_tol(stacked, tol) != n + mt) return false;
    return rank_tol(Mat(data.X0() * data.KU()), tol) == n && rank_tol(Mat(data.U() * data.K0()), tol) == mt;
}

LtiSystem consensus_example() {
    Mat a(11, 11);
    // clang-format off
    a << .8, .2,  0,  0,  0,  0,  0,  0,  0,  0,  0,
         .2, .4, .2,  0,  0,  0,  0,  0,  0,  0,  0,
          0, .2, .6,  0,  0,  0,  0,  0,  0,  0,  0,
          0,  0,  0, .6, .2,  0,  0,  0,  0,  0,  0,
          0,  0,  0, .2, .4, .2,  0,  0,  0,  0,  0,
          0,  0,  0,  0, .2, .6,  0, .2,  0,  0,  0,
          0,  0,  0,  0,  0,  0, .8, .2,  0,  0,  0,
          0,  0,  0,  0,  0, .2, .2, .2,  0,  0, .2,
          0,  0,  0,  0,  0,  0,  0,  0, .6, .2,  0,
          0,  0,  0,  0,  0,  0,  0,  0, .2, .6,  0,
          0,  0,  0,  0,  0,  0,  0, .2,  0,  0, .8;
    Mat bt(3, 11);
    bt << 0, .2,  0, .2, .2,  0,  0,  0,  0,  0,  0,
          0,  0,  0,  0,  0,  0,  0, .2, .2, .2,  0,
          0,  0, .2,  0,  0,  0,  0,  0,  0,  0,  0;
    Mat c(2, 11);
    c << 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0,
         0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1;
    // clang-format on
    return {std::move(a), bt.transpose(), std::move(c)};
}

LtiSystem random_system(Eigen::Index n, Eigen::Index m, Eigen::Index p, std::uint64_t seed, double radius) {
    if (n < 1 || m < 1 || p < 1) fail(ErrorCode::InvalidArgument, "random_system: dimensions must be >= 1");
    auto rng = stream_for(seed, 0x5157u);
    Mat a = gaussian(rng, n, n, 1.0);
    Mat b = gaussian(rng, n, m, 1.0);
    Mat c = gaussian(rng, p, n, 1.0);
    const double rho = a.eigenvalues().cwiseAbs().maxCoeff();
    if (rho > 0.0) a *= radius / rho;
    return {std::move(a), std::move(b), std::move(c)};
}

LtiSystem siso_from_zeros_poles(const std::vector<double>& zeros, const std::vector<double>& poles) {
    const auto n = static_cast<Eigen::Index>(poles.size());
    if (n < 1 || zeros.size() >= poles.size()) {
        fail(ErrorCode::InvalidArgument, "siso_from_zeros_poles: need fewer zeros than poles");
    }
    const std::vector<double> den = monic_poly(poles);
    const std::vector<double> num = monic_poly(zeros);
    Mat a = Mat::Zero(n, n);
    a.topRightCorner(n - 1, n - 1) = Mat::Identity(n - 1, n - 1);
    for (Eigen::Index j = 0; j < n; ++j) a(n - 1, j) = -den[static_cast<std::size_t>(n - j)];
    Mat b = Mat::Zero(n, 1);
    b(n - 1, 0) = 1.0;
    Mat c = Mat::Zero(1, n);
    const auto deg = static_cast<Eigen::Index>(zeros.size());
    for (Eigen::Index j = 0; j <= deg; ++j) c(0, j) = num[static_cast<std::size_t>(deg - j)];
    return {std::move(a), std::move(b), std::move(c)};
}

}  // namespace ddgeo
