#ifndef QNR_OPTIMIZE_HPP
#define QNR_OPTIMIZE_HPP

// Multi-start Riemannian gradient ascent shared by the radius solvers.
//
// A Problem supplies
//   using Point = ...;
//   double value(const Point&) const;
//   Vector gradient(const Point&) const;   // Riemannian gradient, flattened
//   Point retract(const Point&, const Vector& dir, double step) const;
// Tangent vectors are flattened into complex vectors with the real inner
// product Re(a^* b); real coordinates are stored in the real part.

#include "qnr/linalg.hpp"
#include "qnr/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace qnr {

struct OptimizerConfig {
    std::size_t restarts = 32;
    std::size_t max_iters = 500;
    double step_tol = 1e-12;
    double grad_tol = 1e-8;
    std::uint64_t seed = 0;

    void validate() const;
};

template <class Point>
struct AscentResult {
    Point point{};
    double value = 0.0;
    double grad_norm = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

inline double real_dot(const Vector& a, const Vector& b) { return a.dot(b).real(); }

/// Armijo-backtracked ascent with Barzilai-Borwein trial steps.
template <class Problem>
AscentResult<typename Problem::Point> ascend(const Problem& problem, typename Problem::Point start,
                                             const OptimizerConfig& cfg) {
    using Point = typename Problem::Point;
    constexpr double kArmijo = 1e-4;

    AscentResult<Point> out;
    Point x = std::move(start);
    double f = problem.value(x);
    Vector g = problem.gradient(x);
    double gn = g.norm();
    double trial = 1.0 / std::max(1.0, gn);

    std::size_t it = 0;
    for (; it < cfg.max_iters; ++it) {
        if (gn <= cfg.grad_tol) {
            out.converged = true;
            break;
        }
        double t = trial;
        Point next;
        double fn = 0.0;
        bool accepted = false;
        while (t * gn >= cfg.step_tol) {
            next = problem.retract(x, g, t);
            fn = problem.value(next);
            if (fn >= f + kArmijo * t * gn * gn) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;

        Vector gnext = problem.gradient(next);
        const Vector s = t * g;
        const Vector y = gnext - g;
        const double sy = real_dot(s, y);
        const double ss = s.squaredNorm();
        trial = sy < 0.0 ? ss / -sy : 2.0 * t;
        trial = std::clamp(trial, 1e-12, 1e12);

        x = std::move(next);
        f = fn;
        g = std::move(gnext);
        gn = g.norm();
    }
    if (!out.converged && gn <= cfg.grad_tol) out.converged = true;
    out.point = std::move(x);
    out.value = f;
    out.grad_norm = gn;
    out.iterations = it;
    return out;
}

template <class Point>
struct MultiStartResult {
    AscentResult<Point> best;
    std::size_t restarts_used = 0;
    bool any_converged = false;
};

/// Runs run(i) for i < count and keeps the largest value; ties go to the lowest index.
template <class Point, class Run>
MultiStartResult<Point> best_of(std::size_t count, Run&& run) {
    std::vector<AscentResult<Point>> results(count);
    parallel::for_each_index(count, [&](std::size_t i) { results[i] = run(i); });
    MultiStartResult<Point> out;
    out.restarts_used = count;
    std::size_t best = 0;
    for (std::size_t i = 0; i < count; ++i) {
        out.any_converged = out.any_converged || results[i].converged;
        if (results[i].value > results[best].value) best = i;
    }
    if (count > 0) out.best = std::move(results[best]);
    return out;
}

/// Sub-seed of restart i.
inline std::uint64_t restart_seed(std::uint64_t seed, std::size_t i) {
    return seed ^ static_cast<std::uint64_t>(i);
}

}  // namespace qnr

#endif  // QNR_OPTIMIZE_HPP
