// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ddgeo/attack.hpp"
#include "ddgeo/data_driven.hpp"
#include "ddgeo/oracle.hpp"
#include "ddgeo/verification.hpp"

using namespace ddgeo;

namespace {

constexpr int kSystems = 100;
constexpr std::uint64_t kSeedBase = 20240601;

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::uint64_t trial_seed(int i) { return kSeedBase + static_cast<std::uint64_t>(i); }

ExperimentData default_data(const LtiSystem& sys, std::uint64_t seed, Eigen::Index horizon = 0) {
    ExperimentConfig cfg;
    cfg.seed = seed;
    cfg.horizon = horizon;
    return collect(sys, cfg);
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Verdict subspace_agreement(const Tolerances& tol) {
    const auto start = std::chrono::steady_clock::now();
    int bad = 0;
    double worst = 0.0;
    for (int i = 0; i < kSystems; ++i) {
        const LtiSystem sys = random_trial_system(trial_seed(i));
        const auto data = default_data(sys, trial_seed(i));
        const Subspace pairs[3][2] = {{vstar_dd(data, tol), vstar_model(sys, tol)},
                                      {sstar_dd(data, tol), sstar_model(sys, tol)},
                                      {rstar_dd(data, tol), rstar_model(sys, tol)}};
        bool ok = true;
        for (const auto& pr : pairs) {
            worst = std::max(worst, principal_angle_max(pr[0], pr[1]));
            ok = ok && subspaces_equal(pr[0], pr[1], tol);
        }
        bad += ok ? 0 : 1;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {bad == 0 && secs < 30.0,
            fmt("%d/%d systems disagree, worst angle %.2e rad, %.2f s", bad, kSystems, worst, secs)};
}

Verdict finite_horizon_properties(const Tolerances& tol) {
    double worst_output = 0.0, worst_start = 0.0, worst_final = 0.0;
    for (int i = 0; i < kSystems; ++i) {
        const LtiSystem sys = random_trial_system(trial_seed(i));
        const auto data = default_data(sys, trial_seed(i));
        const Eigen::Index ku = data.KU().cols();

        const Mat coeffs = zero_output_coefficients(data, tol);
        if (coeffs.cols() > 0) {
            const Mat y = data.Y() * (data.KU() * coeffs.topRows(ku) + data.K0() * coeffs.bottomRows(coeffs.rows() - ku));
            worst_output = std::max(worst_output, y.colwise().norm().maxCoeff());
        }
        const Mat beta = zero_output_forced_coefficients(data, tol);
        if (beta.cols() > 0) {
            worst_start = std::max(worst_start, (data.X0() * data.K0() * beta).colwise().norm().maxCoeff());
            const Mat final_states = (data.X() * data.K0() * beta).bottomRows(data.n());
            const Subspace s = sstar_model(sys, tol);
            for (Eigen::Index j = 0; j < final_states.cols(); ++j) {
                const Vec x = final_states.col(j);
                worst_final = std::max(worst_final, s.distances(x)(0) / std::max(1.0, x.norm()));
            }
        }
    }
    return {worst_output <= 1e-9 && worst_start <= 1e-9 && worst_final <= 1e-8,
            fmt("max zero-output norm %.2e, max forced x(0) %.2e, max S* distance of x(T) %.2e", worst_output,
                worst_start, worst_final)};
}

Verdict feedback_invariance(const Tolerances& tol) {
    double worst_residual = 0.0, worst_drift = 0.0;
    int residual_bad = 0, drift_bad = 0, errors = 0;
    std::string drift_seeds;
    for (int i = 0; i < kSystems; ++i) {
        const std::uint64_t seed = trial_seed(i);
        const LtiSystem sys = random_trial_system(seed);
        try {
            const Subspace v = vstar_dd(default_data(sys, seed), tol);
            const auto traj = random_trajectory(sys, 2 * (sys.n() + sys.m()), seed);
            const auto factor = closed_loop_factor(traj, v, tol);
            worst_residual = std::max(worst_residual, factor.residual);
            residual_bad += factor.residual <= 1e-8 ? 0 : 1;
            const double drift = closed_loop_drift(sys.A() + sys.B() * factor.gain, v, 50);
            worst_drift = std::max(worst_drift, drift);
            if (drift > 1e-6) {
                ++drift_bad;
                drift_seeds += (drift_seeds.empty() ? "" : ",") + std::to_string(i);
            }
        } catch (const Error& e) {
            ++errors;
        }
    }
    return {residual_bad == 0 && drift_bad == 0 && errors == 0,
            fmt("residual > 1e-8: %d (worst %.2e); 50-step drift > 1e-6: %d (worst %.2e)%s%s; errors %d",
                residual_bad, worst_residual, drift_bad, worst_drift, drift_bad ? ", systems " : "",
                drift_seeds.c_str(), errors)};
}

Verdict invariant_zeros(const Tolerances& tol) {
    int fixture_bad = 0, random_bad = 0, member_bad = 0, outsider_bad = 0, errors = 0, checked = 0;
    std::mt19937_64 rng(kSeedBase);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);

    auto membership = [&](const ExperimentData& data, const Subspace& v, const std::vector<std::complex<double>>& zeros) {
        for (const auto& z : zeros) member_bad += zero_membership_dd(data, v, z, tol).is_zero ? 0 : 1;
        int outsiders = 0;
        while (outsiders < 10) {
            const std::complex<double> z(coord(rng), coord(rng));
            bool near = false;
            for (const auto& q : zeros) near = near || std::abs(z - q) < 1e-3;
            if (near) continue;
            outsider_bad += zero_membership_dd(data, v, z, tol).is_zero ? 1 : 0;
            ++outsiders;
        }
    };

    const std::vector<std::vector<double>> fixtures{{0.5}, {0.5, -0.25}};
    for (const auto& zs : fixtures) {
        const LtiSystem sys = siso_from_zeros_poles(zs, {0.8, -0.4, 0.2});
        const auto data = default_data(sys, 1);
        const Subspace v = vstar_dd(data, tol);
        const auto found = zeros_dd(random_trajectory(sys, 8, 1), v, tol);
        std::vector<std::complex<double>> expected(zs.begin(), zs.end());
        fixture_bad += zero_sets_match(found, expected, 1e-6) ? 0 : 1;
        membership(data, v, found);
    }

    std::string mismatched;
    for (std::uint64_t seed = kSeedBase + 5000; checked < kSystems; ++seed) {
        const LtiSystem sys = random_trial_system(seed);
        if (!rstar_model(sys, tol).is_trivial()) continue;
        ++checked;
        try {
            const auto data = default_data(sys, seed);
            const Subspace v = vstar_dd(data, tol);
            const auto found = zeros_dd(random_trajectory(sys, 2 * (sys.n() + sys.m()), seed), v, tol);
            if (!zero_sets_match(found, invariant_zeros_model(sys, tol), 1e-6)) {
                ++random_bad;
                mismatched += (mismatched.empty() ? "" : ",") + std::to_string(seed);
            }
            membership(data, v, found);
        } catch (const Error&) {
            ++errors;
        }
    }
    return {fixture_bad + random_bad + member_bad + outsider_bad + errors == 0,
            fmt("fixtures wrong %d/2; random mismatches %d/%d%s%s; true zeros rejected %d; outsiders accepted %d; "
                "errors %d",
                fixture_bad, random_bad, checked, random_bad ? " (seeds " : "", (mismatched + (random_bad ? ")" : "")).c_str(),
                member_bad, outsider_bad, errors)};
}

Verdict attack_reproduction(const Tolerances& tol) {
    const LtiSystem sys = consensus_example();
    const auto data = default_data(sys, 1);
    const Eigen::Index onset = 24;
    const AttackPlan plan = design_attack(data, tol, 1.0, onset);
    Vec u(3);
    u << -2, 2, 4;
    const auto outcome = simulate_attack(sys, plan, u, Vec::Zero(sys.n()), onset + plan.horizon);
    const double output = outcome.output_deviation.maxCoeff();
    const double state = outcome.state_deviation.segment(onset, plan.horizon + 1).maxCoeff();
    const Mat deviation = outcome.attacked_states - outcome.nominal_states;
    const double in_rstar = plan.rstar.distances(deviation).maxCoeff();
    return {output <= 1e-9 && state > 0.01 && in_rstar <= 1e-6 && !detect(outcome, 1e-9),
            fmt("max output deviation %.2e, max state deviation %.3f, max R* distance %.2e (onset %d, %d steps)",
                output, state, in_rstar, int(onset), int(outcome.steps()))};
}

Verdict horizon_invariance(const Tolerances& tol) {
    int bad = 0;
    for (int i = 0; i < kSystems; ++i) {
        const LtiSystem sys = random_trial_system(trial_seed(i));
        const auto shortest = default_data(sys, trial_seed(i));
        const auto longer = default_data(sys, trial_seed(i) + 77, sys.n() + 3);
        const bool ok = subspaces_equal(vstar_dd(shortest, tol), vstar_dd(longer, tol), tol) &&
                        subspaces_equal(sstar_dd(shortest, tol), sstar_dd(longer, tol), tol);
        bad += ok ? 0 : 1;
    }
    return {bad == 0, fmt("%d/%d systems differ between T = n and T = n + 3", bad, kSystems)};
}

Mat gaussian(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> g;
    Mat m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) m(i, j) = g(rng);
    return m;
}

Verdict numerics(const Tolerances& tol) {
    std::mt19937_64 rng(kSeedBase);
    std::uniform_int_distribution<int> dim(1, 8);
    double nullity = 0, moore = 0, grassmann = 0, mixed = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const int r = dim(rng), c = dim(rng), k = std::min({dim(rng), r, c});
        const Mat m = gaussian(rng, r, k) * gaussian(rng, k, c);
        const double scale = std::max(1.0, m.norm());
        nullity = std::max(nullity, double(std::abs(rank_tol(m, tol) + kernel_basis(m, tol).dim() - c)));

        const Mat pm = pinv(m, tol);
        const double pscale = std::max(1.0, pm.norm());
        moore = std::max({moore, (m * pm * m - m).norm() / scale, (pm * m * pm - pm).norm() / pscale,
                          ((m * pm).transpose() - m * pm).norm(), ((pm * m).transpose() - pm * m).norm()});

        const int n = dim(rng);
        const Subspace v1 = image_basis(gaussian(rng, n, dim(rng) % n + 1), tol);
        const Subspace v2 = image_basis(gaussian(rng, n, dim(rng) % n + 1), tol);
        grassmann = std::max(grassmann, double(std::abs(v1.dim() + v2.dim() - subspace_sum(v1, v2, tol).dim() -
                                                        intersect(v1, v2, tol).dim())));

        const Mat a = gaussian(rng, 2, 3), b = gaussian(rng, 3, 4), cm = gaussian(rng, 3, 2), d = gaussian(rng, 4, 2);
        mixed = std::max(mixed, (kron(a, b) * kron(cm, d) - kron(Mat(a * cm), Mat(b * d))).norm());
    }
    return {nullity == 0 && moore <= 1e-10 && grassmann == 0 && mixed <= 1e-10,
            fmt("rank-nullity defect %g, Moore-Penrose %.2e, Grassmann defect %g, Kronecker %.2e", nullity, moore,
                grassmann, mixed)};
}

}  // namespace

int main() {
    const Tolerances tol;
    const std::pair<const char*, std::function<Verdict(const Tolerances&)>> criteria[] = {
        {"subspace oracle agreement", subspace_agreement},
        {"finite-horizon zero-output properties", finite_horizon_properties},
        {"feedback invariance", feedback_invariance},
        {"invariant zeros", invariant_zeros},
        {"stealthy attack on the consensus network", attack_reproduction},
        {"horizon invariance", horizon_invariance},
        {"numerics suite", numerics},
    };
    int failed = 0, index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Verdict v;
        try {
            v = run(tol);
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        failed += v.pass ? 0 : 1;
        std::printf("criterion %d [%s] %s: %s\n", index, v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
