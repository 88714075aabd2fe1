#include "ddgeo/attack.hpp"

#include <iomanip>
#include <sstream>

namespace ddgeo {

Vec AttackPlan::input_at(Eigen::Index t) const {
    if (t < 0 || t >= horizon) return Vec::Zero(m);
    return attack.segment(t * m, m);
}

AttackPlan design_attack(const ExperimentData& data, const Tolerances& tol, double energy, Eigen::Index onset_step) {
    if (!(energy > 0.0)) fail(ErrorCode::InvalidArgument, "attack energy must be positive");
    if (onset_step < 0) fail(ErrorCode::InvalidArgument, "attack onset must be non-negative");
    const Subspace rstar = rstar_dd(data, tol);
    if (rstar.is_trivial()) fail(ErrorCode::NoStealthyAttack, "no stealthy attack exists: R* is trivial");

    const Eigen::Index horizon = data.horizon(), k0 = data.K0().cols();
    const Mat forced = data.X() * data.K0();
    const Mat in_rstar = kron(Mat::Identity(horizon, horizon), rstar.basis());
    Mat stacked(forced.rows(), k0 + in_rstar.cols());
    stacked << forced, in_rstar;
    const Mat p = kernel_basis(stacked, tol).basis().topRows(k0);
    const Mat candidates = data.U() * data.K0() * p;

    const double cutoff = tol.residual_abs * std::max(1.0, data.U().norm());
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < candidates.cols(); ++j) {
        if (candidates.col(j).norm() > cutoff) keep.push_back(j);
    }
    if (keep.empty()) fail(ErrorCode::NoStealthyAttack, "no stealthy attack exists: every generator is zero");

    AttackPlan plan;
    plan.generators = candidates(Eigen::all, keep);
    Eigen::Index best = 0;
    plan.generators.colwise().norm().maxCoeff(&best);
    plan.attack = plan.generators.col(best).normalized() * energy;
    plan.rstar = rstar;
    plan.onset_step = onset_step;
    plan.horizon = horizon;
    plan.m = data.m();
    return plan;
}

AttackOutcome simulate_attack(const LtiSystem& sys, const AttackPlan& plan, const Mat& nominal_inputs, const Vec& x0) {
    const Eigen::Index steps = nominal_inputs.cols();
    if (nominal_inputs.rows() != sys.m() || plan.m != sys.m()) {
        fail(ErrorCode::DimensionMismatch, "nominal input or attack width differs from m");
    }
    if (x0.size() != sys.n()) fail(ErrorCode::DimensionMismatch, "initial state length differs from n");
    if (plan.rstar.ambient_dim() != sys.n()) fail(ErrorCode::DimensionMismatch, "attack plan built for another n");
    if (plan.onset_step + plan.horizon > steps) {
        fail(ErrorCode::InvalidArgument, "attack window [onset, onset+T) must fit in the run");
    }

    Mat attacked_inputs = nominal_inputs;
    for (Eigen::Index t = 0; t < plan.horizon; ++t) attacked_inputs.col(plan.onset_step + t) += plan.input_at(t);

    const SingleTrajectory nominal = simulate(sys, x0, nominal_inputs);
    const SingleTrajectory attacked = simulate(sys, x0, attacked_inputs);

    AttackOutcome out;
    out.nominal_states = nominal.states();
    out.attacked_states = attacked.states();
    out.nominal_outputs = sys.C() * out.nominal_states;
    out.attacked_outputs = sys.C() * out.attacked_states;
    out.state_deviation = (out.attacked_states - out.nominal_states).colwise().norm().transpose();
    out.output_deviation = (out.attacked_outputs - out.nominal_outputs).colwise().norm().transpose();
    out.onset_step = plan.onset_step;
    out.window_end = plan.onset_step + plan.horizon;
    return out;
}

AttackOutcome simulate_attack(const LtiSystem& sys, const AttackPlan& plan, const Vec& nominal_input, const Vec& x0,
                              Eigen::Index total_steps) {
    if (nominal_input.size() != sys.m()) fail(ErrorCode::DimensionMismatch, "nominal input length differs from m");
    if (total_steps < 0) fail(ErrorCode::InvalidArgument, "total steps must be non-negative");
    return simulate_attack(sys, plan, Mat(nominal_input.replicate(1, total_steps)), x0);
}

bool detect(const AttackOutcome& outcome, double threshold) {
    return outcome.output_deviation.size() > 0 && outcome.output_deviation.maxCoeff() > threshold;
}

std::string attack_outcome_csv(const AttackOutcome& outcome) {
    std::ostringstream os;
    os << std::setprecision(17);
    const Eigen::Index p = outcome.nominal_outputs.rows();
    os << "step,state_deviation,output_deviation";
    for (Eigen::Index i = 0; i < p; ++i) os << ",y_nominal_" << i + 1;
    for (Eigen::Index i = 0; i < p; ++i) os << ",y_attacked_" << i + 1;
    os << '\n';
    for (Eigen::Index t = 0; t < outcome.state_deviation.size(); ++t) {
        os << t << ',' << outcome.state_deviation(t) << ',' << outcome.output_deviation(t);
        for (Eigen::Index i = 0; i < p; ++i) os << ',' << outcome.nominal_outputs(i, t);
        for (Eigen::Index i = 0; i < p; ++i) os << ',' << outcome.attacked_outputs(i, t);
        os << '\n';
    }
    return os.str();
}

}  // namespace ddgeo
