#include <random>

#include "doctest.h"
#include "ddgeo/attack.hpp"
#include "ddgeo/oracle.hpp"
#include "helpers.hpp"

using namespace ddgeo;

namespace {

ExperimentData data_for(const LtiSystem& sys, std::uint64_t seed = 1) {
    ExperimentConfig cfg;
    cfg.seed = seed;
    return collect(sys, cfg, {});
}

Vec consensus_nominal() {
    Vec u(3);
    u << -2, 2, 4;
    return u;
}

}  // namespace

TEST_CASE("design_attack") {
    const Tolerances tol;
    SUBCASE("no attack when C = I") {
        const LtiSystem base = random_system(3, 2, 1, 1);
        const LtiSystem sys(base.A(), base.B(), Mat::Identity(3, 3));
        try {
            (void)design_attack(data_for(sys), tol);
            FAIL("expected NoStealthyAttack");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NoStealthyAttack);
        }
    }
    SUBCASE("consensus plan") {
        const auto data = data_for(consensus_example());
        const AttackPlan plan = design_attack(data, tol, 2.0, 24);
        CHECK(plan.rstar.dim() == 3);
        CHECK(plan.generators.cols() > 0);
        CHECK(plan.attack.size() == 3 * 11);
        CHECK(plan.attack.norm() == doctest::Approx(2.0));
        // attack lies in the admissible image
        CHECK(image_basis(plan.generators, tol).distances(plan.attack)(0) <= 1e-9);
        CHECK(plan.input_at(-1).isZero());
        CHECK(plan.input_at(11).isZero());
    }
    CHECK_THROWS_AS(design_attack(data_for(consensus_example()), tol, 0.0), Error);
}

TEST_CASE("every generator is stealthy and stays in R*") {
    const Tolerances tol;
    const LtiSystem sys = consensus_example();
    const auto data = data_for(sys, 3);
    const AttackPlan plan = design_attack(data, tol);
    for (Eigen::Index j = 0; j < plan.generators.cols(); ++j) {
        const Mat u = plan.generators.col(j).reshaped(sys.m(), data.horizon());
        const auto traj = simulate(sys, Vec::Zero(sys.n()), u);
        CHECK((sys.C() * traj.states().leftCols(data.horizon())).colwise().norm().maxCoeff() <= 1e-9);
        CHECK(plan.rstar.distances(traj.states()).maxCoeff() <= 1e-9 * std::max(1.0, traj.states().norm()));
    }
}

TEST_CASE("simulate_attack") {
    const Tolerances tol;
    const LtiSystem sys = consensus_example();
    const auto data = data_for(sys);
    AttackPlan plan = design_attack(data, tol, 1.0, 24);

    SUBCASE("stealth and superposition") {
        const auto outcome = simulate_attack(sys, plan, consensus_nominal(), Vec::Zero(11), 24 + 11);
        CHECK(outcome.steps() == 35);
        CHECK(outcome.window_end == 35);
        CHECK(outcome.output_deviation.maxCoeff() <= 1e-9);
        CHECK(outcome.state_deviation.maxCoeff() > 0.01);
        CHECK_FALSE(detect(outcome, 1e-6));

        Mat u = Mat::Zero(3, 35);
        for (Eigen::Index t = 0; t < 11; ++t) u.col(24 + t) = plan.input_at(t);
        const auto forced = simulate(sys, Vec::Zero(11), u);
        CHECK((outcome.attacked_states - outcome.nominal_states - forced.states()).norm() < 1e-10);
        CHECK(plan.rstar.distances(Mat(outcome.attacked_states - outcome.nominal_states)).maxCoeff() <= 1e-6);
    }
    SUBCASE("zero attack changes nothing") {
        plan.attack.setZero();
        const auto outcome = simulate_attack(sys, plan, consensus_nominal(), Vec::Ones(11), 40);
        CHECK(outcome.state_deviation.isZero());
        CHECK_FALSE(detect(outcome, 0.0));
    }
    SUBCASE("window must fit") {
        CHECK_THROWS_AS(simulate_attack(sys, plan, consensus_nominal(), Vec::Zero(11), 30), Error);
        CHECK_THROWS_AS(simulate_attack(sys, plan, Vec::Zero(2), Vec::Zero(11), 40), Error);
    }
    SUBCASE("a random input of the same energy is detected") {
        std::mt19937_64 rng(17);
        plan.attack = test::gaussian(rng, plan.attack.size(), 1).normalized();
        CHECK(detect(simulate_attack(sys, plan, consensus_nominal(), Vec::Zero(11), 35), 1e-6));
    }
}

TEST_CASE("attack outcome CSV") {
    const LtiSystem sys = consensus_example();
    const AttackPlan plan = design_attack(data_for(sys), {}, 1.0, 2);
    const auto outcome = simulate_attack(sys, plan, consensus_nominal(), Vec::Zero(11), 13);
    const std::string csv = attack_outcome_csv(outcome);
    CHECK(csv.rfind("step,state_deviation,output_deviation,y_nominal_1,y_nominal_2,y_attacked_1,y_attacked_2\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 14);
}
