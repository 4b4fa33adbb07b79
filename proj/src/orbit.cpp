#include "qnr/orbit.hpp"

#include <cmath>
#include <sstream>

namespace qnr {

Matrix build_cq(const QParameter& q, std::size_t n) {
    if (n < 2) throw DimensionError("build_cq: n must be >= 2");
    Matrix c = Matrix::Zero(n, n);
    c(0, 0) = q.q();
    c(0, 1) = q.p();
    return c;
}

OrbitMembership is_in_orbit(const Matrix& a, const QParameter& q, double tol) {
    require_square(a, "is_in_orbit");
    if (!(tol > 0.0)) throw ValidationError("is_in_orbit: tol must be positive");
    OrbitMembership m;
    m.rank = numerical_rank(a, tol);
    m.abs_trace = std::abs(a.trace());
    m.hs_norm = a.norm();
    m.in_orbit = m.rank == 1 && std::abs(m.abs_trace - q.q()) <= tol && std::abs(m.hs_norm - 1.0) <= tol;
    return m;
}

CanonicalForm canonicalize(const Matrix& a, const QParameter& q) {
    const OrbitMembership m = is_in_orbit(a, q, 1e-6);
    if (!m.in_orbit) {
        std::ostringstream msg;
        msg << "canonicalize: matrix is not in SU(C_q) (rank " << m.rank << ", |tr| " << m.abs_trace
            << ", hs_norm " << m.hs_norm << ")";
        throw DomainError(msg.str());
    }
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector x = svd.matrixU().col(0);
    const Vector y_raw = svd.singularValues()(0) * svd.matrixV().col(0);

    // a = x (x) y_raw^*; rotate so that a = theta x (x) y^* with <x, y> = |tr a|.
    const Complex theta = phase_of(a.trace());
    const Vector y = theta * y_raw;

    Matrix w;
    if (q.p() == 0.0) {
        const Vector cols[] = {x};
        w = extend_to_unitary(cols, 1e-6);
    } else {
        Vector z = y - q.q() * x;
        z -= x.dot(z) * x;
        const Vector cols[] = {x, z.normalized()};
        w = extend_to_unitary(cols, 1e-6);
    }
    return {theta, fix_first_entry_phase(w.adjoint())};
}

namespace {

OrbitElement element_from_canonical(const Matrix& a, const QParameter& q, const CanonicalForm& cf) {
    const auto n = a.rows();
    OrbitElement e;
    e.matrix = a;
    e.canonical_unitary = cf.u;
    e.canonical_phase = cf.theta;
    e.phase = cf.theta;
    const Matrix uh = cf.u.adjoint();
    e.x = uh.col(0);
    Vector c = Vector::Zero(n);
    c(0) = q.q();
    c(1) = q.p();
    e.y = uh * c;
    return e;
}

}  // namespace

OrbitElement orbit_element_from_matrix(const Matrix& a, const QParameter& q) {
    return element_from_canonical(a, q, canonicalize(a, q));
}

OrbitElement make_orbit_element(const QParameter& q, const Vector& x, const Vector& w, Complex theta) {
    constexpr double kTol = 1e-8;
    if (x.size() < 2 || w.size() != x.size())
        throw DimensionError("make_orbit_element: x and w must have equal length >= 2");
    if (std::abs(x.norm() - 1.0) > kTol) throw ValidationError("make_orbit_element: x is not a unit vector");
    if (q.p() > 0.0) {
        if (std::abs(w.norm() - 1.0) > kTol) throw ValidationError("make_orbit_element: w is not a unit vector");
        if (std::abs(x.dot(w)) > kTol) throw ValidationError("make_orbit_element: w is not orthogonal to x");
    }
    if (std::abs(std::abs(theta) - 1.0) > kTol) throw ValidationError("make_orbit_element: |theta| != 1");

    const Vector y = q.p() > 0.0 ? Vector(q.q() * x + q.p() * w) : x;
    OrbitElement e;
    e.matrix = theta * dyad(x, y);
    e.x = x;
    e.y = y;
    e.phase = theta;
    const CanonicalForm cf = canonicalize(e.matrix, q);
    e.canonical_unitary = cf.u;
    e.canonical_phase = cf.theta;
    return e;
}

namespace {

// Two points of modulus `radius` summing to `sum`; the first lies on the
// positive side of the direction of `sum`.
std::pair<Complex, Complex> split_on_circle(Complex sum, double radius) {
    const Complex dir = phase_of(sum);
    const double half = std::abs(sum) / 2.0;
    const double h = std::sqrt(std::max(0.0, radius * radius - half * half));
    const Complex mid = half * dir;
    const Complex off = Complex(0.0, h) * dir;
    return {mid + off, mid - off};
}

}  // namespace

RankOneSplit decompose_rank_one(const Matrix& r, const QParameter& q, double t, std::size_t column,
                                std::optional<double> p_prime) {
    require_square(r, "decompose_rank_one");
    require_finite(r, "decompose_rank_one");
    const auto n = static_cast<std::size_t>(r.rows());
    if (column < 3 || column > n)
        throw DimensionError("decompose_rank_one: column index k must satisfy 3 <= k <= n");
    if (q.p() == 0.0)
        throw DomainError("decompose_rank_one: q = 1 gives an empty domain (|R| < 2p = 0 is impossible)");
    if (numerical_rank(r) != 1) throw DomainError("decompose_rank_one: R must have rank one");

    const double bound = std::min(2.0 * q.q(), 2.0 * q.p());
    const double op = schatten_norm(r, SchattenOrder::operator_norm);
    if (!(op < bound)) {
        std::ostringstream msg;
        msg << "decompose_rank_one: |R| = " << op << " violates |R| < min(2q, 2p) = " << bound;
        throw DomainError(msg.str());
    }

    // Unitary W with W^* R W = xi E11 + eta E12.
    Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector u = svd.matrixU().col(0);
    const Vector v = svd.matrixV().col(0);
    Vector w2 = v - u.dot(v) * u;
    w2 -= u.dot(w2) * u;
    Matrix w;
    if (w2.norm() > 1e-12) {
        const Vector cols[] = {u, w2.normalized()};
        w = extend_to_unitary(cols, 1e-6);
    } else {
        const Vector cols[] = {u};
        w = extend_to_unitary(cols, 1e-6);
    }
    const Matrix reduced = w.adjoint() * r * w;
    const Complex xi = reduced(0, 0);
    const Complex eta = reduced(0, 1);
    if (!(std::abs(xi) < 2.0 * q.q()) || !(std::abs(eta) < 2.0 * q.p()))
        throw DomainError("decompose_rank_one: reduced coefficients out of range");

    const double pp = p_prime.value_or(0.5 * (std::abs(eta) / 2.0 + q.p()));
    if (pp < std::abs(eta) / 2.0 || !(pp < q.p()))
        throw DomainError("decompose_rank_one: p' must lie in [|eta|/2, p)");
    const double rr = std::sqrt((q.p() - pp) * (q.p() + pp));

    const auto [z1, z3] = split_on_circle(xi, q.q());
    const auto [z2, z4] = split_on_circle(eta, pp);
    const std::size_t k = column - 1;
    const Complex tail = rr * std::polar(1.0, t);

    Matrix at = Matrix::Zero(n, n);
    Matrix bt = Matrix::Zero(n, n);
    at(0, 0) = z1;
    at(0, 1) = z2;
    at(0, k) = tail;
    bt(0, 0) = z3;
    bt(0, 1) = z4;
    bt(0, k) = -tail;

    RankOneSplit out;
    out.xi = xi;
    out.eta = eta;
    out.first = orbit_element_from_matrix(w * at * w.adjoint(), q);
    out.second = orbit_element_from_matrix(w * bt * w.adjoint(), q);
    return out;
}

std::vector<Matrix> rank_one_split_sample(const Matrix& r, std::size_t count, std::uint64_t seed) {
    require_square(r, "rank_one_split_sample");
    if (numerical_rank(r) != 2) throw DomainError("rank_one_split_sample: R must have rank two");
    Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix left = svd.matrixU().leftCols(2);
    const Matrix right = svd.matrixV().leftCols(2);
    const Eigen::Vector2cd inv_diag(1.0 / svd.singularValues()(0), 1.0 / svd.singularValues()(1));

    // R = P M Q^*; N = s t^T is rank one and M - N is singular iff t^T M^{-1} s = 1.
    Rng rng(seed);
    std::vector<Matrix> out;
    out.reserve(count);
    while (out.size() < count) {
        const Eigen::Vector2cd s(rng.complex_gaussian(), rng.complex_gaussian());
        Eigen::Vector2cd t(rng.complex_gaussian(), rng.complex_gaussian());
        const Complex kappa = t(0) * inv_diag(0) * s(0) + t(1) * inv_diag(1) * s(1);
        if (std::abs(kappa) < 1e-3) continue;
        t /= kappa;
        const Eigen::Matrix2cd core = s * t.transpose();
        out.push_back(left * core * right.adjoint());
    }
    return out;
}

RealVector real_span_singular_values(const std::vector<Matrix>& mats) {
    if (mats.empty()) return RealVector();
    const auto entries = mats.front().size();
    Eigen::MatrixXd stacked(2 * entries, static_cast<Eigen::Index>(mats.size()));
    for (std::size_t c = 0; c < mats.size(); ++c) {
        const Eigen::Map<const Vector> v(mats[c].data(), entries);
        stacked.col(c).head(entries) = v.real();
        stacked.col(c).tail(entries) = v.imag();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
    return svd.singularValues();
}

Json to_json(const OrbitElement& e) {
    return Json{{"matrix", to_json(e.matrix)},
                {"x", to_json(Matrix(e.x))},
                {"y", to_json(Matrix(e.y))},
                {"phase", complex_to_json(e.phase)},
                {"theta", complex_to_json(e.canonical_phase)},
                {"U", to_json(e.canonical_unitary)}};
}

OrbitElement orbit_element_from_json(const Json& j) {
    for (const char* key : {"matrix", "x", "y", "phase", "theta", "U"})
        if (!j.contains(key)) throw ValidationError(std::string("orbit element JSON: missing '") + key + "'");
    OrbitElement e;
    e.matrix = matrix_from_json(j.at("matrix"));
    e.x = vector_from_json(j.at("x"));
    e.y = vector_from_json(j.at("y"));
    e.phase = complex_from_json(j.at("phase"));
    e.canonical_phase = complex_from_json(j.at("theta"));
    e.canonical_unitary = matrix_from_json(j.at("U"));
    return e;
}

}  // namespace qnr
