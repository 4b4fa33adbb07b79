#include "qnr/radius.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qnr {

void OptimizerConfig::validate() const {
    if (restarts < 1) throw ValidationError("optimizer: restarts must be >= 1");
    if (!(step_tol > 0.0) || !(grad_tol > 0.0))
        throw ValidationError("optimizer: tolerances must be positive");
}

namespace detail {

namespace {

// Orthogonal-term magnitudes below this fraction of |Ax| are treated as zero.
constexpr double kKinkTol = 1e-14;

Vector any_unit_orthogonal(const Vector& x) {
    const auto n = x.size();
    Vector best;
    double best_norm = -1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        Vector w = Vector::Unit(n, j);
        w -= x.dot(w) * x;
        w -= x.dot(w) * x;
        const double nrm = w.norm();
        if (nrm > best_norm) {
            best_norm = nrm;
            best = std::move(w);
        }
    }
    return best / best_norm;
}

}  // namespace

double classical_objective(const Matrix& a, const Vector& x) { return std::abs(x.dot(a * x)); }

Vector classical_gradient(const Matrix& a, const Vector& x) {
    const Vector ax = a * x;
    const Complex w = x.dot(ax);
    const Complex u = phase_of(w);
    return std::conj(u) * ax + u * (a.adjoint() * x);
}

double reduced_objective(const Matrix& a, const QParameter& q, const Vector& x) {
    const Vector ax = a * x;
    const Complex w = x.dot(ax);
    const double orth = (ax - w * x).norm();
    return q.q() * std::abs(w) + q.p() * orth;
}

Vector reduced_gradient(const Matrix& a, const QParameter& q, const Vector& x) {
    const Vector ax = a * x;
    const Complex w = x.dot(ax);
    const Complex u = phase_of(w);
    Vector g = q.q() * (std::conj(u) * ax + u * (a.adjoint() * x));
    if (q.p() > 0.0) {
        const Vector v = ax - w * x;
        const double vn = v.norm();
        if (vn > kKinkTol * std::max(ax.norm(), 1e-300)) {
            g += (q.p() / vn) * (a.adjoint() * v - std::conj(w) * v);
        }
    }
    return g;
}

Vector reduced_witness_y(const Matrix& a, const QParameter& q, const Vector& x) {
    if (q.p() == 0.0) return x;
    if (x.size() < 2) throw DimensionError("q-numerical radius: q < 1 needs n >= 2");
    const Vector ax = a * x;
    const Complex w = x.dot(ax);
    Vector v = ax - w * x;
    const double vn = v.norm();
    Vector z;
    if (vn > kKinkTol * std::max(ax.norm(), 1e-300)) {
        z = std::conj(phase_of(w)) * v / vn;
        z -= x.dot(z) * x;
        z.normalize();
    } else {
        z = any_unit_orthogonal(x);
    }
    return q.q() * x + q.p() * z;
}

}  // namespace detail

namespace {

template <class Objective, class Gradient>
struct SphereProblem {
    using Point = Vector;
    Objective objective;
    Gradient egrad;

    double value(const Vector& x) const { return objective(x); }
    Vector gradient(const Vector& x) const {
        const Vector g = egrad(x);
        return g - x.dot(g).real() * x;
    }
    Vector retract(const Vector& x, const Vector& d, double t) const { return (x + t * d).normalized(); }
};

template <class Problem>
MultiStartResult<Vector> sphere_multistart(const Problem& problem, std::size_t n, const OptimizerConfig& cfg,
                                           std::span<const Vector> extra_starts) {
    const std::size_t total = cfg.restarts + extra_starts.size();
    return best_of<Vector>(total, [&](std::size_t i) {
        Vector start;
        if (i < cfg.restarts) {
            Rng rng(restart_seed(cfg.seed, i));
            start = rng.unit_vector(n);
        } else {
            start = extra_starts[i - cfg.restarts];
            if (static_cast<std::size_t>(start.size()) != n)
                throw DimensionError("extra start has wrong length");
            start.normalize();
        }
        return ascend(problem, std::move(start), cfg);
    });
}

void require_admissible(std::size_t n, const QParameter& q) {
    if (n < 2 && q.p() > 0.0)
        throw DimensionError("q-numerical radius: q < 1 needs n >= 2 (no admissible pair)");
}

}  // namespace

RadiusEstimate numerical_radius(const Matrix& a, const OptimizerConfig& cfg,
                                std::span<const Vector> extra_starts) {
    require_square(a, "numerical_radius");
    require_finite(a, "numerical_radius");
    cfg.validate();
    const auto n = static_cast<std::size_t>(a.rows());
    auto obj = [&a](const Vector& x) { return detail::classical_objective(a, x); };
    auto grad = [&a](const Vector& x) { return detail::classical_gradient(a, x); };
    SphereProblem<decltype(obj), decltype(grad)> problem{obj, grad};
    const auto ms = sphere_multistart(problem, n, cfg, extra_starts);

    RadiusEstimate est;
    est.value = ms.best.value;
    est.witness_x = ms.best.point;
    est.restarts_used = ms.restarts_used;
    est.converged = ms.any_converged;
    est.best_gradient_norm = ms.best.grad_norm;
    return est;
}

RadiusEstimate q_radius_reduced(const Matrix& a, const QParameter& q, const OptimizerConfig& cfg,
                                std::span<const Vector> extra_starts) {
    require_square(a, "q_radius_reduced");
    require_finite(a, "q_radius_reduced");
    cfg.validate();
    const auto n = static_cast<std::size_t>(a.rows());
    require_admissible(n, q);
    auto obj = [&](const Vector& x) { return detail::reduced_objective(a, q, x); };
    auto grad = [&](const Vector& x) { return detail::reduced_gradient(a, q, x); };
    SphereProblem<decltype(obj), decltype(grad)> problem{obj, grad};
    const auto ms = sphere_multistart(problem, n, cfg, extra_starts);

    RadiusEstimate est;
    est.value = ms.best.value;
    est.witness_x = ms.best.point;
    est.witness_y = detail::reduced_witness_y(a, q, ms.best.point);
    est.restarts_used = ms.restarts_used;
    est.converged = ms.any_converged;
    est.best_gradient_norm = ms.best.grad_norm;
    return est;
}

namespace {

// Point of the product of the Stiefel manifold of orthonormal pairs (x, z)
// with the circle of phases theta.
struct PairPoint {
    Vector x;
    Vector z;
    double theta = 0.0;
};

struct DirectProblem {
    using Point = PairPoint;
    const Matrix& a;
    double q;
    double p;

    Complex pairing_value(const PairPoint& pt) const {
        const Vector ax = a * pt.x;
        return q * pt.x.dot(ax) + p * std::polar(1.0, -pt.theta) * pt.z.dot(ax);
    }

    double value(const PairPoint& pt) const { return std::abs(pairing_value(pt)); }

    Vector gradient(const PairPoint& pt) const {
        const auto n = pt.x.size();
        const Vector ax = a * pt.x;
        const Complex e = std::polar(1.0, -pt.theta);
        const Complex zax = pt.z.dot(ax);
        const Complex s = q * pt.x.dot(ax) + p * e * zax;
        const Complex u = phase_of(s);
        const Vector ahx = a.adjoint() * pt.x;
        const Vector ahz = a.adjoint() * pt.z;

        // Euclidean partials with respect to x, z and theta.
        Vector gx = std::conj(u) * q * ax + u * q * ahx + u * p * std::conj(e) * ahz;
        Vector gz = std::conj(u) * p * e * ax;
        const double gt = (std::conj(u) * Complex(0.0, -1.0) * p * e * zax).real();

        // Project onto the Stiefel tangent space: D = G - X herm(X^* G).
        Matrix frame(n, 2);
        frame.col(0) = pt.x;
        frame.col(1) = pt.z;
        Matrix grad(n, 2);
        grad.col(0) = gx;
        grad.col(1) = gz;
        const Matrix m = frame.adjoint() * grad;
        const Matrix herm = 0.5 * (m + m.adjoint());
        const Matrix tangent = grad - frame * herm;

        Vector out(2 * n + 1);
        out.head(n) = tangent.col(0);
        out.segment(n, n) = tangent.col(1);
        out(2 * n) = gt;
        return out;
    }

    PairPoint retract(const PairPoint& pt, const Vector& d, double t) const {
        const auto n = pt.x.size();
        PairPoint next;
        next.x = (pt.x + t * d.head(n)).normalized();
        Vector z = pt.z + t * d.segment(n, n);
        z -= next.x.dot(z) * next.x;
        z -= next.x.dot(z) * next.x;
        next.z = z.normalized();
        next.theta = std::remainder(pt.theta + t * d(2 * n).real(), 2.0 * std::numbers::pi);
        return next;
    }
};

}  // namespace

RadiusEstimate q_radius_direct(const Matrix& a, const QParameter& q, const OptimizerConfig& cfg) {
    require_square(a, "q_radius_direct");
    require_finite(a, "q_radius_direct");
    cfg.validate();
    const auto n = static_cast<std::size_t>(a.rows());
    require_admissible(n, q);

    RadiusEstimate est;
    if (n == 1) {
        // q = 1 and the only admissible pair is x = y up to phase.
        est.value = std::abs(a(0, 0));
        est.witness_x = Vector::Ones(1);
        est.witness_y = est.witness_x;
        est.restarts_used = 0;
        est.converged = true;
        return est;
    }

    DirectProblem problem{a, q.q(), q.p()};
    const auto ms = best_of<PairPoint>(cfg.restarts, [&](std::size_t i) {
        Rng rng(restart_seed(cfg.seed, i));
        PairPoint start;
        start.x = rng.unit_vector(n);
        start.z = rng.unit_vector_orthogonal_to(start.x);
        start.theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
        return ascend(problem, std::move(start), cfg);
    });

    const PairPoint& best = ms.best.point;
    est.value = ms.best.value;
    est.witness_x = best.x;
    est.witness_y = q.q() * best.x + q.p() * std::polar(1.0, best.theta) * best.z;
    est.restarts_used = ms.restarts_used;
    est.converged = ms.any_converged;
    est.best_gradient_norm = ms.best.grad_norm;
    return est;
}

std::vector<Complex> q_range_sample(const Matrix& a, const QParameter& q, std::size_t count,
                                    std::uint64_t seed) {
    require_square(a, "q_range_sample");
    if (count < 1) throw ValidationError("q_range_sample: count must be >= 1");
    const auto n = static_cast<std::size_t>(a.rows());
    require_admissible(n, q);
    Rng rng(seed);
    std::vector<Complex> points;
    points.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const Vector x = rng.unit_vector(n);
        Vector y = q.q() * x;
        if (q.p() > 0.0) {
            const Vector z = rng.unit_vector_orthogonal_to(x);
            y += q.p() * rng.unit_phase() * z;
        }
        points.push_back(y.dot(a * x));
    }
    return points;
}

double beta_constant(const QParameter& q) {
    const double p = q.p();
    if (p >= 0.5) return std::max(1.0 / p, 1.0 / q.q());
    if (p >= 0.25) return std::sqrt(5.0 - 4.0 * p) / q.q();
    return 2.0 / q.q();
}

bool EquivalenceReport::all_hold() const {
    for (const auto& c : checks)
        if (!c.holds) return false;
    return true;
}

EquivalenceReport check_equivalence(const Matrix& a, const QParameter& q, const OptimizerConfig& cfg,
                                    const EquivalenceTolerance& tol) {
    require_square(a, "check_equivalence");
    EquivalenceReport rep;
    const RadiusEstimate classical = numerical_radius(a, cfg);
    // Ascending from the classical witness certifies r_q >= q r for the computed values.
    const Vector warm[] = {classical.witness_x};
    const RadiusEstimate qr = q_radius_reduced(a, q, cfg, warm);
    rep.r = classical.value;
    rep.r_q = qr.value;
    rep.op_norm = schatten_norm(a, SchattenOrder::operator_norm);
    rep.beta = beta_constant(q);
    rep.converged = classical.converged && qr.converged;

    const double scale = std::max(1.0, rep.op_norm);
    const double round_abs = tol.rounding * scale;
    auto add = [&rep](std::string name, double lhs, double rhs) {
        rep.checks.push_back({std::move(name), lhs <= rhs, rhs - lhs});
    };
    add("q*r <= r_q", q.q() * rep.r, rep.r_q + round_abs);
    add("r_q <= |A|", rep.r_q, rep.op_norm + round_abs);
    add("|A| <= beta*r_q", rep.op_norm, rep.beta * rep.r_q * (1.0 + tol.optimizer));
    add("r <= |A|", rep.r, rep.op_norm + round_abs);
    add("|A| <= 2r", rep.op_norm, 2.0 * rep.r * (1.0 + tol.optimizer));
    return rep;
}

}  // namespace qnr
