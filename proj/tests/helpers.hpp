#pragma once

#include <random>

#include "ddgeo/lti.hpp"

namespace ddgeo::test {

inline Mat gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> g;
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = g(rng);
    }
    return m;
}

// rows x cols with rank exactly k (generic).
inline Mat random_rank(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, Eigen::Index k) {
    return gaussian(rng, rows, k) * gaussian(rng, k, cols);
}

// Similarity transform of a block system whose first `k` states are reachable
// but invisible at the output: nontrivial R* of dimension k.
inline LtiSystem degenerate_system(std::uint64_t seed, Eigen::Index n = 5, Eigen::Index k = 2) {
    std::mt19937_64 rng(seed);
    Mat a = gaussian(rng, n, n) * 0.3;
    a.bottomLeftCorner(n - k, k).setZero();  // hidden block does not drive the visible one
    Mat b = gaussian(rng, n, 2);
    Mat c = gaussian(rng, 1, n);
    c.leftCols(k).setZero();
    b.bottomRows(n - k).col(0).setZero();      // input 0 only excites the hidden block
    const Mat t = gaussian(rng, n, n) + 3.0 * Mat::Identity(n, n);
    const Mat ti = t.inverse();
    return {t * a * ti, t * b, c * ti};
}

}  // namespace ddgeo::test
