#include "ddgeo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ddgeo {

namespace {

template <typename Matrix>
double rank_cutoff(const Matrix& m, double sigma_max, const Tolerances& tol) {
    return tol.rank_rel * static_cast<double>(std::max(m.rows(), m.cols())) * sigma_max;
}

template <typename Matrix>
Eigen::Index numerical_rank(const Matrix& m, const Tolerances& tol) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    const double cut = rank_cutoff(m, s(0), tol);
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > cut) ++r;
    return r;
}

template <typename Matrix>
Matrix null_space(const Matrix& m, const Tolerances& tol) {
    const Eigen::Index cols = m.cols();
    if (cols == 0) return Matrix(0, 0);
    if (m.rows() == 0) return Matrix::Identity(cols, cols);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    Eigen::Index r = 0;
    if (s.size() > 0 && s(0) > 0.0) {
        const double cut = rank_cutoff(m, s(0), tol);
        while (r < s.size() && s(r) > cut) ++r;
    }
    return svd.matrixV().rightCols(cols - r);
}

}  // namespace

void Tolerances::validate() const {
    if (!(rank_rel > 0.0) || !(subspace_eq > 0.0) || !(residual_abs > 0.0)) {
        fail(ErrorCode::InvalidArgument, "tolerances must be strictly positive");
    }
}

Subspace::Subspace(Eigen::Index ambient_dim, Mat basis) : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
    if (basis_.rows() != ambient_dim_) {
        fail(ErrorCode::DimensionMismatch, "subspace basis has " + std::to_string(basis_.rows()) +
                                               " rows, ambient dimension is " + std::to_string(ambient_dim_));
    }
    if (basis_.cols() > ambient_dim_) fail(ErrorCode::DimensionMismatch, "subspace basis has more columns than rows");
    require_finite(basis_, "subspace basis");
    if (basis_.cols() > 0) {
        const Mat gram = basis_.transpose() * basis_;
        if ((gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-8) {
            fail(ErrorCode::InvalidArgument, "subspace basis is not orthonormal");
        }
    }
}

Subspace Subspace::trivial(Eigen::Index ambient_dim) { return {ambient_dim, Mat(ambient_dim, 0)}; }

Subspace Subspace::full(Eigen::Index ambient_dim) { return {ambient_dim, Mat::Identity(ambient_dim, ambient_dim)}; }

Mat Subspace::projector() const { return basis_ * basis_.transpose(); }

Vec Subspace::distances(const Mat& vectors) const {
    if (vectors.rows() != ambient_dim_) fail(ErrorCode::DimensionMismatch, "vector length differs from ambient dimension");
    const Mat residual = vectors - basis_ * (basis_.transpose() * vectors);
    return residual.colwise().norm().transpose();
}

bool Subspace::contains(const Mat& vectors, double abs_tol) const {
    if (vectors.cols() == 0) return true;
    return distances(vectors).maxCoeff() <= abs_tol;
}

void require_finite(const Mat& m, const char* what) {
    if (!m.allFinite()) fail(ErrorCode::InvalidArgument, std::string(what) + " contains NaN or Inf");
}

Eigen::Index rank_tol(const Mat& m, const Tolerances& tol) {
    require_finite(m, "matrix");
    return numerical_rank(m, tol);
}

Eigen::Index rank_tol(const CMat& m, const Tolerances& tol) { return numerical_rank(m, tol); }

Subspace kernel_basis(const Mat& m, const Tolerances& tol) {
    require_finite(m, "matrix");
    return {m.cols(), null_space(m, tol)};
}

CMat kernel_basis(const CMat& m, const Tolerances& tol) { return null_space(m, tol); }

namespace {

Subspace column_space(const Mat& m, const Tolerances& tol, const double* reference_norm) {
    require_finite(m, "matrix");
    if (m.rows() == 0 || m.cols() == 0) return Subspace::trivial(m.rows());
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    const double reference = reference_norm != nullptr ? *reference_norm : s(0);
    Eigen::Index r = 0;
    if (reference > 0.0) {
        const double cut = rank_cutoff(m, reference, tol);
        while (r < s.size() && s(r) > cut) ++r;
    }
    return {m.rows(), svd.matrixU().leftCols(r)};
}

}  // namespace

Subspace image_basis(const Mat& m, const Tolerances& tol) { return column_space(m, tol, nullptr); }

Subspace image_basis(const Mat& m, const Tolerances& tol, double reference_norm) {
    return column_space(m, tol, &reference_norm);
}

double spectral_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

Subspace intersect(const Subspace& a, const Subspace& b, const Tolerances& tol) {
    if (a.ambient_dim() != b.ambient_dim()) fail(ErrorCode::DimensionMismatch, "intersect: ambient dimensions differ");
    if (a.is_trivial() || b.is_trivial()) return Subspace::trivial(a.ambient_dim());
    // a*x = b*y  <=>  [a  -b] [x; y] = 0
    Mat stacked(a.ambient_dim(), a.dim() + b.dim());
    stacked << a.basis(), -b.basis();
    const Subspace k = kernel_basis(stacked, tol);
    return image_basis(a.basis() * k.basis().topRows(a.dim()), tol, 1.0);
}

Subspace subspace_sum(const Subspace& a, const Subspace& b, const Tolerances& tol) {
    if (a.ambient_dim() != b.ambient_dim()) fail(ErrorCode::DimensionMismatch, "subspace_sum: ambient dimensions differ");
    Mat stacked(a.ambient_dim(), a.dim() + b.dim());
    stacked << a.basis(), b.basis();
    return image_basis(stacked, tol);
}

Subspace preimage(const Mat& m, const Subspace& w, const Tolerances& tol) {
    if (m.rows() != w.ambient_dim()) fail(ErrorCode::DimensionMismatch, "preimage: map codomain differs from subspace");
    const Eigen::Index n = m.cols();
    Mat stacked(m.rows(), n + w.dim());
    stacked << m, -w.basis();
    const Subspace k = kernel_basis(stacked, tol);
    return image_basis(k.basis().topRows(n), tol, 1.0);
}

Subspace map_subspace(const Mat& m, const Subspace& w, const Tolerances& tol) {
    if (m.cols() != w.ambient_dim()) fail(ErrorCode::DimensionMismatch, "map_subspace: map domain differs from subspace");
    return image_basis(m * w.basis(), tol, spectral_norm(m));
}

double principal_angle_max(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) {
        fail(ErrorCode::DimensionMismatch, "principal_angle_max: ambient dimensions differ");
    }
    if (a.is_trivial() && b.is_trivial()) return 0.0;
    if (a.is_trivial() || b.is_trivial()) return std::numbers::pi / 2.0;
    const Subspace& small = a.dim() <= b.dim() ? a : b;
    const Subspace& large = a.dim() <= b.dim() ? b : a;
    const Mat residual = small.basis() - large.basis() * (large.basis().transpose() * small.basis());
    Eigen::JacobiSVD<Mat> svd(residual);
    const double sine = std::clamp(svd.singularValues()(0), 0.0, 1.0);
    return std::asin(sine);
}

bool subspaces_equal(const Subspace& a, const Subspace& b, const Tolerances& tol) {
    return a.ambient_dim() == b.ambient_dim() && a.dim() == b.dim() && principal_angle_max(a, b) <= tol.subspace_eq;
}

Mat pinv(const Mat& m, const Tolerances& tol) {
    require_finite(m, "matrix");
    if (m.rows() == 0 || m.cols() == 0) return Mat::Zero(m.cols(), m.rows());
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    Eigen::Index r = 0;
    if (s(0) > 0.0) {
        const double cut = rank_cutoff(m, s(0), tol);
        while (r < s.size() && s(r) > cut) ++r;
    }
    const Vec inv = s.head(r).cwiseInverse();
    return svd.matrixV().leftCols(r) * inv.asDiagonal() * svd.matrixU().leftCols(r).transpose();
}

namespace {

template <typename Matrix>
Matrix kron_impl(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace

Mat kron(const Mat& a, const Mat& b) { return kron_impl(a, b); }

CMat kron(const CMat& a, const CMat& b) { return kron_impl(a, b); }

}  // namespace ddgeo
