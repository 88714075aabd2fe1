#include "ddgeo/verification.hpp"

#include <random>

#include "ddgeo/data_driven.hpp"
#include "ddgeo/oracle.hpp"

namespace ddgeo {

int VerificationReport::failures() const {
    int count = 0;
    for (const auto& t : trials) count += t.passed() ? 0 : 1;
    return count;
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& t : trials) {
        nlohmann::json row = {{"seed", t.seed},
                              {"n", t.n},
                              {"m", t.m},
                              {"p", t.p},
                              {"vstar_dim", t.vstar_dim},
                              {"sstar_dim", t.sstar_dim},
                              {"rstar_dim", t.rstar_dim},
                              {"vstar_angle", t.vstar_angle},
                              {"sstar_angle", t.sstar_angle},
                              {"rstar_angle", t.rstar_angle},
                              {"feedback_residual", t.feedback_residual},
                              {"closed_loop_drift", t.closed_loop_drift},
                              {"zeros_checked", t.zeros_checked},
                              {"passed", t.passed()}};
        if (!t.error.empty()) row["error"] = t.error;
        rows.push_back(std::move(row));
    }
    return {{"trials", static_cast<int>(trials.size())}, {"failures", failures()}, {"results", rows}};
}

LtiSystem random_trial_system(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> state_dim(2, 6), io_dim(1, 3);
    const int n = state_dim(rng);
    const int m = io_dim(rng);
    const int p = io_dim(rng);
    return random_system(n, m, p, seed);
}

TrialResult run_trial(const LtiSystem& sys, std::uint64_t seed, const Tolerances& tol) {
    TrialResult r;
    r.seed = seed;
    r.n = sys.n();
    r.m = sys.m();
    r.p = sys.p();
    try {
        ExperimentConfig cfg;
        cfg.seed = seed;
        const ExperimentData data = collect(sys, cfg, tol);

        const Subspace v_dd = vstar_dd(data, tol), v_model = vstar_model(sys, tol);
        const Subspace s_dd = sstar_dd(data, tol), s_model = sstar_model(sys, tol);
        const Subspace r_dd = intersect(v_dd, s_dd, tol), r_model = intersect(v_model, s_model, tol);
        r.vstar_dim = v_dd.dim();
        r.sstar_dim = s_dd.dim();
        r.rstar_dim = r_dd.dim();
        r.vstar_angle = principal_angle_max(v_dd, v_model);
        r.sstar_angle = principal_angle_max(s_dd, s_model);
        r.rstar_angle = principal_angle_max(r_dd, r_model);
        r.subspaces_ok =
            subspaces_equal(v_dd, v_model, tol) && subspaces_equal(s_dd, s_model, tol) && subspaces_equal(r_dd, r_model, tol);

        const SingleTrajectory traj = random_trajectory(sys, 2 * (sys.n() + sys.m()), seed);
        const Mat f = feedback_dd(traj, v_dd, tol);
        r.feedback_residual = invariance_residual(sys.A() + sys.B() * f, v_dd);
        r.feedback_ok = r.feedback_residual <= 1e-8;
        r.closed_loop_drift = closed_loop_drift(sys.A() + sys.B() * f, v_dd, 50);

        if (r_model.is_trivial()) {
            r.zeros_checked = true;
            r.zeros_ok = zero_sets_match(zeros_dd(traj, v_dd, tol), invariant_zeros_model(sys, tol), 1e-6);
        }
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

VerificationReport run_verification(const VerificationConfig& cfg) {
    cfg.tol.validate();
    if (cfg.trials < 1) fail(ErrorCode::InvalidArgument, "trial count must be >= 1");
    VerificationReport report;
    report.trials.reserve(static_cast<std::size_t>(cfg.trials));
    for (int i = 0; i < cfg.trials; ++i) {
        const std::uint64_t seed = cfg.seed * 1000003u + static_cast<std::uint64_t>(i);
        report.trials.push_back(run_trial(random_trial_system(seed), seed, cfg.tol));
    }
    return report;
}

}  // namespace ddgeo
