#include <random>

#include "doctest.h"
#include "ddgeo/oracle.hpp"
#include "helpers.hpp"

using namespace ddgeo;

namespace {

using Zeros = std::vector<std::complex<double>>;

LtiSystem with_c(const LtiSystem& sys, const Mat& c) { return {sys.A(), sys.B(), c}; }
LtiSystem with_b(const LtiSystem& sys, const Mat& b) { return {sys.A(), b, sys.C()}; }

}  // namespace

TEST_CASE("vstar_model") {
    const Tolerances tol;
    const LtiSystem sys = random_system(4, 1, 1, 21);
    CHECK(vstar_model(with_c(sys, Mat::Identity(4, 4)), tol).is_trivial());
    CHECK(vstar_model(with_c(sys, Mat::Zero(1, 4)), tol).is_full());
    CHECK(vstar_model(consensus_example(), tol).dim() == 8);
}

TEST_CASE("sstar_model") {
    const Tolerances tol;
    const LtiSystem sys = random_system(4, 2, 1, 22);
    CHECK(sstar_model(with_b(sys, Mat::Zero(4, 2)), tol).is_trivial());
    CHECK(sstar_model(with_b(sys, Mat::Identity(4, 4)), tol).is_full());
    CHECK(sstar_model(consensus_example(), tol).dim() == 6);

    SUBCASE("zero-output reachable set over horizon n") {
        // final states x(n) of trajectories from 0 with y(0..n-1) = 0
        const LtiSystem siso = random_system(4, 1, 1, 23);
        const Subspace k = kernel_basis(siso.output_forcing(4), tol);
        const Mat final_rows = siso.state_forcing(4).bottomRows(4);
        const Subspace brute = image_basis(Mat(final_rows * k.basis()), tol, spectral_norm(final_rows));
        CHECK(subspaces_equal(brute, sstar_model(siso, tol), tol));
    }
}

TEST_CASE("rstar_model") {
    const Tolerances tol;
    const LtiSystem sys = random_system(3, 3, 3, 24);
    CHECK(rstar_model(with_c(sys, Mat::Identity(3, 3)), tol).is_trivial());
    CHECK(rstar_model(LtiSystem(sys.A(), Mat::Identity(3, 3), Mat::Zero(1, 3)), tol).is_full());
    CHECK(rstar_model(consensus_example(), tol).dim() == 3);
}

TEST_CASE("recursion monotonicity") {
    const Tolerances tol;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const LtiSystem sys = random_system(2 + seed % 5, 1 + seed % 3, 1 + (seed / 3) % 3, 300 + seed);
        const auto v = vstar_iterate_dims(sys, tol);
        const auto s = sstar_iterate_dims(sys, tol);
        CHECK(v.size() <= static_cast<std::size_t>(sys.n()) + 1);
        CHECK(s.size() <= static_cast<std::size_t>(sys.n()) + 1);
        for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] <= v[i - 1]);
        for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] >= s[i - 1]);
    }
}

TEST_CASE("oracle invariants on random systems") {
    const Tolerances tol;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const LtiSystem sys = random_system(2 + seed % 5, 1 + seed % 3, 1 + (seed / 5) % 3, 400 + seed);
        const Mat a = sys.A();
        const Subspace kc = kernel_basis(sys.C(), tol), ib = image_basis(sys.B(), tol);

        const Subspace v = vstar_model(sys, tol);
        if (!v.is_trivial()) {
            CHECK((sys.C() * v.basis()).norm() <= 1e-9);
            CHECK(subspace_sum(v, ib, tol).distances(Mat(a * v.basis())).maxCoeff() <= 1e-9);
            const Mat f = friend_model(sys, v, tol);
            CHECK(invariance_residual(a + sys.B() * f, v) <= 1e-9);
        }

        const Subspace s = sstar_model(sys, tol);
        CHECK(s.distances(sys.B()).maxCoeff() <= 1e-9 * std::max(1.0, sys.B().norm()));
        const Subspace skc = intersect(s, kc, tol);
        if (!skc.is_trivial()) CHECK(s.distances(Mat(a * skc.basis())).maxCoeff() <= 1e-9);
    }
}

TEST_CASE("friend_model") {
    const Tolerances tol;
    const LtiSystem sys = random_system(5, 2, 1, 31);
    const Mat f = friend_model(sys, Subspace::full(5), tol);
    CHECK(f.rows() == 2);
    CHECK(invariance_residual(sys.A() + sys.B() * f, Subspace::full(5)) == 0.0);

    CHECK(vstar_model(sys, tol).dim() == 4);  // more inputs than outputs: V* = Ker C

    std::mt19937_64 rng(5);
    const LtiSystem narrow = random_system(5, 1, 2, 32);
    const Subspace line = image_basis(test::gaussian(rng, 5, 2), tol);
    CHECK_THROWS_AS(friend_model(narrow, line, tol), Error);
}

TEST_CASE("invariant_zeros_model") {
    const Tolerances tol;
    CHECK(invariant_zeros_model(with_c(random_system(3, 1, 1, 1), Mat::Identity(3, 3)), tol).empty());

    const Zeros one = invariant_zeros_model(siso_from_zeros_poles({0.5}, {0.8, -0.4, 0.2}), tol);
    REQUIRE(one.size() == 1);
    CHECK(std::abs(one[0] - 0.5) < 1e-9);

    const Zeros two = invariant_zeros_model(siso_from_zeros_poles({0.5, -0.25}, {0.8, -0.4, 0.2}), tol);
    CHECK(zero_sets_match(two, {-0.25, 0.5}, 1e-9));

    CHECK_THROWS_AS(invariant_zeros_model(test::degenerate_system(3), tol), Error);
}

TEST_CASE("invariant zeros do not depend on the friend") {
    const Tolerances tol;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const LtiSystem sys = random_system(3 + seed % 4, 1 + seed % 2, 2, 500 + seed);
        const Subspace v = vstar_model(sys, tol);
        if (v.is_trivial() || !rstar_model(sys, tol).is_trivial()) continue;
        const Mat f = friend_model(sys, v, tol);
        // any F + K (I - VV^T) is also a friend
        std::mt19937_64 rng(seed);
        const Mat other = f + test::gaussian(rng, sys.m(), sys.n()) * (Mat::Identity(sys.n(), sys.n()) - v.projector());
        CHECK(invariance_residual(sys.A() + sys.B() * other, v) <= 1e-9);
        CHECK(zero_sets_match(restricted_spectrum(sys.A() + sys.B() * f, v),
                              restricted_spectrum(sys.A() + sys.B() * other, v), 1e-6));
    }
}

TEST_CASE("sort_zeros and zero_sets_match") {
    Zeros z{{0.5, 0.0}, {-0.25, 0.0}, {0.1, -0.3}, {0.1, 0.3}};
    sort_zeros(z);
    CHECK(z[0] == std::complex<double>(-0.25, 0.0));
    CHECK(z[1] == std::complex<double>(0.1, -0.3));
    CHECK(z[2] == std::complex<double>(0.1, 0.3));
    CHECK(zero_sets_match({0.5, 0.5}, {0.5 + 1e-8, 0.5}, 1e-6));
    CHECK_FALSE(zero_sets_match({0.5, 0.5}, {0.5, 0.6}, 1e-6));
    CHECK_FALSE(zero_sets_match({0.5}, {}, 1e-6));
}
