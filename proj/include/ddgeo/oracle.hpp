#pragma once

#include <complex>
#include <vector>

#include "ddgeo/lti.hpp"

namespace ddgeo {

// Model-based ground truth. Every routine here needs (A, B, C) and serves to
// check the data-driven results.

// Largest (A, Im B)-controlled invariant subspace contained in Ker C, via
// V_0 = Ker C, V_i = A^-1(V_{i-1} + Im B) ∩ Ker C.
Subspace vstar_model(const LtiSystem& sys, const Tolerances& tol);

// Smallest (A, Ker C)-conditioned invariant subspace containing Im B, via
// S_1 = Im B, S_i = A(S_{i-1} ∩ Ker C) + Im B.
Subspace sstar_model(const LtiSystem& sys, const Tolerances& tol);

// V* ∩ S*
Subspace rstar_model(const LtiSystem& sys, const Tolerances& tol);

// Dimensions of the iterates of the two recursions, first entry is V_0 / S_1.
std::vector<Eigen::Index> vstar_iterate_dims(const LtiSystem& sys, const Tolerances& tol);
std::vector<Eigen::Index> sstar_iterate_dims(const LtiSystem& sys, const Tolerances& tol);

// An m x n gain F with (A + BF) V ⊆ V, zero on the orthogonal complement of V.
// Throws NotControlledInvariant when V is not (A, Im B)-controlled invariant.
Mat friend_model(const LtiSystem& sys, const Subspace& v, const Tolerances& tol);

// Spectrum of (A + BF) restricted to `v` in the coordinates of v's basis.
std::vector<std::complex<double>> restricted_spectrum(const Mat& closed_loop, const Subspace& v);

// Invariant zeros as the spectrum of A + BF on V* for a friend F of V*.
// Throws DegenerateSystem when R* is nontrivial.
std::vector<std::complex<double>> invariant_zeros_model(const LtiSystem& sys, const Tolerances& tol);

// Lexicographic by (real, imag); real parts closer than `tie_tol` count as
// equal so conjugate pairs order by imaginary part.
void sort_zeros(std::vector<std::complex<double>>& zeros, double tie_tol = 1e-9);

// Multiset equality: equal sizes and a one-to-one pairing with every pair
// closer than `tol`.
bool zero_sets_match(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b, double tol = 1e-6);

// Frobenius norm of (I - VV^T) M V, the invariance defect of `v` under `m`.
double invariance_residual(const Mat& m, const Subspace& v);

// Runs x(t+1) = M x(t) for `steps` steps from each basis vector of `v` and
// returns the largest dist(x(t), v) / max(1, ||x(t)||). Zero for trivial `v`.
double closed_loop_drift(const Mat& m, const Subspace& v, int steps);

}  // namespace ddgeo
