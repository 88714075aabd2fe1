#include "ddgeo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ddgeo {

namespace {

struct Recursion {
    Subspace result;
    std::vector<Eigen::Index> dims;
};

Recursion run_vstar(const LtiSystem& sys, const Tolerances& tol) {
    const Subspace ker_c = kernel_basis(sys.C(), tol);
    const Subspace im_b = image_basis(sys.B(), tol);
    Recursion r{ker_c, {ker_c.dim()}};
    for (Eigen::Index i = 0; i < sys.n(); ++i) {
        Subspace next = intersect(preimage(sys.A(), subspace_sum(r.result, im_b, tol), tol), ker_c, tol);
        const bool fixed = next.dim() == r.result.dim();
        r.result = std::move(next);
        if (fixed) break;
        r.dims.push_back(r.result.dim());
    }
    return r;
}

Recursion run_sstar(const LtiSystem& sys, const Tolerances& tol) {
    const Subspace ker_c = kernel_basis(sys.C(), tol);
    const Subspace im_b = image_basis(sys.B(), tol);
    Recursion r{im_b, {im_b.dim()}};
    for (Eigen::Index i = 0; i < sys.n(); ++i) {
        Subspace next = subspace_sum(map_subspace(sys.A(), intersect(r.result, ker_c, tol), tol), im_b, tol);
        const bool fixed = next.dim() == r.result.dim();
        r.result = std::move(next);
        if (fixed) break;
        r.dims.push_back(r.result.dim());
    }
    return r;
}

}  // namespace

Subspace vstar_model(const LtiSystem& sys, const Tolerances& tol) { return run_vstar(sys, tol).result; }

Subspace sstar_model(const LtiSystem& sys, const Tolerances& tol) { return run_sstar(sys, tol).result; }

Subspace rstar_model(const LtiSystem& sys, const Tolerances& tol) {
    return intersect(vstar_model(sys, tol), sstar_model(sys, tol), tol);
}

std::vector<Eigen::Index> vstar_iterate_dims(const LtiSystem& sys, const Tolerances& tol) {
    return run_vstar(sys, tol).dims;
}

std::vector<Eigen::Index> sstar_iterate_dims(const LtiSystem& sys, const Tolerances& tol) {
    return run_sstar(sys, tol).dims;
}

double invariance_residual(const Mat& m, const Subspace& v) {
    if (v.is_trivial()) return 0.0;
    const Mat image = m * v.basis();
    return (image - v.basis() * (v.basis().transpose() * image)).norm();
}

Mat friend_model(const LtiSystem& sys, const Subspace& v, const Tolerances& tol) {
    if (v.ambient_dim() != sys.n()) fail(ErrorCode::DimensionMismatch, "friend_model: subspace not in R^n");
    const Eigen::Index m = sys.m();
    if (v.is_trivial()) return Mat::Zero(m, sys.n());

    // A v_j + B f_j = V c_j, solved for all basis vectors at once.
    Mat lhs(sys.n(), m + v.dim());
    lhs << sys.B(), -v.basis();
    const Mat solution = pinv(lhs, tol) * (-sys.A() * v.basis());
    const Mat gain_on_v = solution.topRows(m);
    Mat f = gain_on_v * v.basis().transpose();

    const double scale = std::max(1.0, sys.A().norm() + sys.B().norm());
    const double residual = invariance_residual(sys.A() + sys.B() * f, v);
    if (residual > tol.residual_abs * scale) {
        fail(ErrorCode::NotControlledInvariant,
             "subspace is not controlled invariant (residual " + std::to_string(residual) + ")");
    }
    return f;
}

std::vector<std::complex<double>> restricted_spectrum(const Mat& closed_loop, const Subspace& v) {
    if (v.is_trivial()) return {};
    const Mat restricted = v.basis().transpose() * closed_loop * v.basis();
    const Eigen::VectorXcd eig = restricted.eigenvalues();
    std::vector<std::complex<double>> out(eig.data(), eig.data() + eig.size());
    sort_zeros(out);
    return out;
}

std::vector<std::complex<double>> invariant_zeros_model(const LtiSystem& sys, const Tolerances& tol) {
    const Subspace vstar = vstar_model(sys, tol);
    const Subspace rstar = intersect(vstar, sstar_model(sys, tol), tol);
    if (!rstar.is_trivial()) {
        fail(ErrorCode::DegenerateSystem, "system is degenerate: R* has dimension " + std::to_string(rstar.dim()));
    }
    if (vstar.is_trivial()) return {};
    const Mat f = friend_model(sys, vstar, tol);
    return restricted_spectrum(sys.A() + sys.B() * f, vstar);
}

void sort_zeros(std::vector<std::complex<double>>& zeros, double tie_tol) {
    std::sort(zeros.begin(), zeros.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    // conjugate pairs computed separately can differ in the last bits of the
    // real part; reorder such runs by imaginary part
    for (std::size_t i = 0; i < zeros.size();) {
        std::size_t j = i + 1;
        while (j < zeros.size() && std::abs(zeros[j].real() - zeros[i].real()) <= tie_tol) ++j;
        std::sort(zeros.begin() + static_cast<std::ptrdiff_t>(i), zeros.begin() + static_cast<std::ptrdiff_t>(j),
                  [](const auto& a, const auto& b) { return a.imag() < b.imag(); });
        i = j;
    }
}

bool zero_sets_match(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b, double tol) {
    if (a.size() != b.size()) return false;
    sort_zeros(a);
    std::vector<bool> used(b.size(), false);
    for (const auto& za : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = b.size();
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(za - b[j]);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        if (best_j == b.size() || best > tol) return false;
        used[best_j] = true;
    }
    return true;
}

double closed_loop_drift(const Mat& m, const Subspace& v, int steps) {
    if (m.rows() != v.ambient_dim() || m.cols() != v.ambient_dim()) {
        fail(ErrorCode::DimensionMismatch, "closed_loop_drift: matrix and subspace sizes differ");
    }
    double worst = 0.0;
    for (Eigen::Index j = 0; j < v.dim(); ++j) {
        Vec x = v.basis().col(j);
        for (int t = 0; t < steps; ++t) {
            x = m * x;
            if (!x.allFinite()) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, v.distances(x)(0) / std::max(1.0, x.norm()));
        }
    }
    return worst;
}

}  // namespace ddgeo
