#ifndef QNR_TESTS_SUPPORT_HPP
#define QNR_TESTS_SUPPORT_HPP

#include "qnr/linalg.hpp"
#include "qnr/optimize.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qnr::test {

inline OptimizerConfig cfg(std::uint64_t seed, std::size_t restarts = 32) {
    OptimizerConfig c;
    c.seed = seed;
    c.restarts = restarts;
    return c;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

/// Classical numerical radius by rotation: r(A) = max_theta lambda_max(Re(e^{i theta} A)),
/// a coarse scan followed by golden-section refinement of the best bracket.
inline double rotation_radius(const Matrix& a, std::size_t scan = 720) {
    auto h = [&a](double theta) {
        const Matrix r = std::polar(1.0, theta) * a;
        const Matrix herm = 0.5 * (r + r.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
        return es.eigenvalues().maxCoeff();
    };
    const double step = 2.0 * std::numbers::pi / static_cast<double>(scan);
    double best = -1.0;
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < scan; ++k) {
        const double v = h(step * static_cast<double>(k));
        if (v > best) {
            best = v;
            best_k = k;
        }
    }
    double lo = step * (static_cast<double>(best_k) - 1.0);
    double hi = step * (static_cast<double>(best_k) + 1.0);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 100; ++it) {
        const double m1 = hi - g * (hi - lo);
        const double m2 = lo + g * (hi - lo);
        if (h(m1) < h(m2)) lo = m1;
        else hi = m2;
    }
    return std::max(best, h(0.5 * (lo + hi)));
}

}  // namespace qnr::test

#endif  // QNR_TESTS_SUPPORT_HPP
