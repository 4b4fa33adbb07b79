#include "qnr/c_radius.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace qnr {

OptimizerConfig c_radius_config(std::uint64_t seed) {
    OptimizerConfig cfg;
    cfg.restarts = 64;
    cfg.seed = seed;
    return cfg;
}

namespace detail {

Complex c_trace(const Matrix& a, const Matrix& c, const Matrix& u) {
    const Matrix b = u.adjoint() * a * u;
    return (c.array() * b.transpose().array()).sum();
}

Matrix c_gradient(const Matrix& a, const Matrix& c, const Matrix& u) {
    const Matrix b = u.adjoint() * a * u;
    const Complex t = (c.array() * b.transpose().array()).sum();
    const Matrix n = std::conj(phase_of(t)) * (c * b - b * c);
    return 0.5 * (n.adjoint() - n);
}

Matrix skew_exp(const Matrix& omega) {
    // Padé approximation with scaling and squaring.
    return omega.exp();
}

}  // namespace detail

namespace {

struct UnitaryProblem {
    using Point = Matrix;
    const Matrix& a;
    const Matrix& c;

    double value(const Matrix& u) const { return std::abs(detail::c_trace(a, c, u)); }

    Vector gradient(const Matrix& u) const {
        const Matrix g = detail::c_gradient(a, c, u);
        return Eigen::Map<const Vector>(g.data(), g.size());
    }

    Matrix retract(const Matrix& u, const Vector& d, double t) const {
        const Eigen::Map<const Matrix> omega(d.data(), u.rows(), u.cols());
        return u * detail::skew_exp(t * Matrix(omega));
    }
};

}  // namespace

RadiusEstimate c_radius(const Matrix& a, const Matrix& c, const OptimizerConfig& cfg) {
    require_square(a, "c_radius");
    require_same_size(a, c, "c_radius");
    require_finite(a, "c_radius");
    require_finite(c, "c_radius");
    cfg.validate();
    const auto n = static_cast<std::size_t>(a.rows());

    UnitaryProblem problem{a, c};
    const auto ms = best_of<Matrix>(cfg.restarts, [&](std::size_t i) {
        Rng rng(restart_seed(cfg.seed, i));
        return ascend(problem, rng.unitary(n), cfg);
    });

    RadiusEstimate est;
    est.value = ms.best.value;
    est.witness_unitary = ms.best.point;
    est.witness_x = ms.best.point.col(0);
    est.restarts_used = ms.restarts_used;
    est.converged = ms.any_converged;
    est.best_gradient_norm = ms.best.grad_norm;
    return est;
}

std::vector<Complex> c_range_sample(const Matrix& a, const Matrix& c, std::size_t count, std::uint64_t seed) {
    require_square(a, "c_range_sample");
    require_same_size(a, c, "c_range_sample");
    if (count < 1) throw ValidationError("c_range_sample: count must be >= 1");
    Rng rng(seed);
    std::vector<Complex> points;
    points.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const Matrix u = rng.unitary(static_cast<std::size_t>(a.rows()));
        points.push_back(detail::c_trace(a, c, u));
    }
    return points;
}

NormCertificate norm_certificate(const Matrix& c, double tol) {
    require_square(c, "norm_certificate");
    if (!(tol > 0.0)) throw ValidationError("norm_certificate: tol must be positive");
    NormCertificate cert;
    cert.trace_c = c.trace();
    const auto n = static_cast<double>(c.rows());
    const Matrix centered = c - (cert.trace_c / n) * Matrix::Identity(c.rows(), c.cols());
    const double scale = std::max(1.0, c.norm());
    cert.is_scalar_c = centered.norm() <= tol * scale;
    cert.is_norm = !cert.is_scalar_c && std::abs(cert.trace_c) > tol * scale;
    return cert;
}

}  // namespace qnr
