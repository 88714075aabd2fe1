#pragma once

#include <Eigen/Dense>

#include "ddgeo/error.hpp"

namespace ddgeo {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Numerical thresholds shared by every module. Exact-arithmetic statements
// (rank, kernel, containment) are evaluated against these.
struct Tolerances {
    double rank_rel = 1e-10;     // singular values below rank_rel * max(rows, cols) * sigma_max are zero
    double subspace_eq = 1e-8;   // max principal angle (rad) for two subspaces to count as equal
    double residual_abs = 1e-9;  // absolute residual bound for invariance/containment checks

    void validate() const;
};

// A linear subspace of R^n held as an orthonormal basis. The trivial
// subspace has an n x 0 basis.
class Subspace {
public:
    Subspace() = default;

    // `basis` must have orthonormal columns; checked to 1e-8.
    Subspace(Eigen::Index ambient_dim, Mat basis);

    static Subspace trivial(Eigen::Index ambient_dim);
    static Subspace full(Eigen::Index ambient_dim);

    [[nodiscard]] Eigen::Index ambient_dim() const noexcept { return ambient_dim_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return basis_.cols(); }
    [[nodiscard]] const Mat& basis() const noexcept { return basis_; }
    [[nodiscard]] bool is_trivial() const noexcept { return basis_.cols() == 0; }
    [[nodiscard]] bool is_full() const noexcept { return basis_.cols() == ambient_dim_; }

    // Orthogonal projector basis * basis^T.
    [[nodiscard]] Mat projector() const;

    // Euclidean distance of each column of `vectors` from the subspace.
    [[nodiscard]] Vec distances(const Mat& vectors) const;

    // True when every column of `vectors` lies in the subspace within `abs_tol`.
    [[nodiscard]] bool contains(const Mat& vectors, double abs_tol) const;

private:
    Eigen::Index ambient_dim_ = 0;
    Mat basis_;
};

void require_finite(const Mat& m, const char* what);

Eigen::Index rank_tol(const Mat& m, const Tolerances& tol);
Eigen::Index rank_tol(const CMat& m, const Tolerances& tol);

// Orthonormal basis of the right null space.
Subspace kernel_basis(const Mat& m, const Tolerances& tol);

// Complex right null space as an orthonormal (unitary) column block.
CMat kernel_basis(const CMat& m, const Tolerances& tol);

// Orthonormal basis of the column space.
Subspace image_basis(const Mat& m, const Tolerances& tol);

// Column space with the rank cutoff taken relative to `reference_norm`
// instead of sigma_max(m). Use for products L * Q with orthonormal Q, where
// an all-roundoff product must come out as the trivial subspace; pass ||L||_2.
Subspace image_basis(const Mat& m, const Tolerances& tol, double reference_norm);

// Largest singular value.
double spectral_norm(const Mat& m);

Subspace intersect(const Subspace& a, const Subspace& b, const Tolerances& tol);
Subspace subspace_sum(const Subspace& a, const Subspace& b, const Tolerances& tol);

// Preimage {x : M x in W} of a subspace under a linear map (a set operation,
// M need not be invertible).
Subspace preimage(const Mat& m, const Subspace& w, const Tolerances& tol);

// Image M * W of a subspace under a linear map.
Subspace map_subspace(const Mat& m, const Subspace& w, const Tolerances& tol);

// Largest principal angle in radians, computed from sines so that angles near
// zero keep full relative precision. For differing dimensions this is the
// largest of the min(dim) angles, so it is ~0 when the smaller subspace lies
// inside the larger one. A trivial subspace against a nontrivial one is pi/2.
double principal_angle_max(const Subspace& a, const Subspace& b);

// Equal dimension and max principal angle within tol.subspace_eq.
bool subspaces_equal(const Subspace& a, const Subspace& b, const Tolerances& tol);

Mat pinv(const Mat& m, const Tolerances& tol);

Mat kron(const Mat& a, const Mat& b);
CMat kron(const CMat& a, const CMat& b);

}  // namespace ddgeo
