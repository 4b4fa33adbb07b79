#include "support.hpp"

#include "qnr/dual.hpp"
#include "qnr/radius.hpp"

using namespace qnr;
using qnr::test::cfg;

namespace {

Matrix random_member(const QParameter& q, std::size_t n, Rng& rng) {
    const Matrix u = rng.unitary(n);
    return rng.unit_phase() * (u.adjoint() * build_cq(q, n) * u);
}

double coefficient_sum(const DualEstimate& d) {
    double s = 0.0;
    for (const Complex& c : d.coefficients) s += std::abs(c);
    return s;
}

void check_invariants(const Matrix& t, const QParameter& q, const DualEstimate& d, const DualOptions& opts = {}) {
    CHECK(d.lower <= d.upper * (1 + opts.gap_tol));
    CHECK(d.feasibility_residual <= opts.feas_tol);
    CHECK(std::abs(coefficient_sum(d) - d.upper) <= 1e-10 * std::max(1.0, d.upper));
    const std::size_t n = static_cast<std::size_t>(t.rows());
    CHECK(d.atoms.size() <= 2 * n * n + 1);
    CHECK(d.atoms.size() == d.coefficients.size());
    Matrix sum = Matrix::Zero(t.rows(), t.cols());
    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
        CHECK(is_in_orbit(d.atoms[i].matrix, q).in_orbit);
        sum += d.coefficients[i] * d.atoms[i].matrix;
    }
    CHECK(std::abs((sum - t).norm() - d.feasibility_residual) <= 1e-12);
}

}  // namespace

TEST_CASE("orbit points lie on the dual unit sphere") {
    const QParameter q(0.6);
    const Matrix c = build_cq(q, 2);
    const DualEstimate d = dual_radius(c, q, cfg(1));
    CHECK(d.converged);
    CHECK(d.gap() <= 0.02);
    CHECK(std::abs(d.lower - 1.0) <= 0.02);
    CHECK(std::abs(d.upper - 1.0) <= 0.02);
    check_invariants(c, q, d);

    Rng rng(71);
    for (int i = 0; i < 10; ++i) {
        const QParameter qi(rng.uniform(0.2, 0.95));
        const Matrix x = random_member(qi, 2 + i % 2, rng);
        const DualEstimate dx = dual_radius(x, qi, cfg(i));
        CHECK(dx.upper <= 1.02);
        CHECK(dx.lower >= 0.98);
    }
}

TEST_CASE("positive homogeneity") {
    Rng rng(72);
    const QParameter q(0.45);
    const Matrix x = random_member(q, 3, rng);
    for (double alpha : {0.25, 3.0, 17.5}) {
        const DualEstimate d = dual_radius(alpha * x, q, cfg(2));
        CHECK(std::abs(d.upper / alpha - 1.0) <= 0.02);
        CHECK(std::abs(d.lower / alpha - 1.0) <= 0.02);
    }
}

TEST_CASE("random 2x2 and 3x3 close to the gap tolerance") {
    Rng rng(73);
    for (int i = 0; i < 12; ++i) {
        const std::size_t n = i < 8 ? 2 : 3;
        const Matrix t = rng.dense(n);
        const QParameter q(i < 4 ? 0.6 : rng.uniform(0.1, 1.0));
        const DualEstimate d = dual_radius(t, q, cfg(100 + i));
        CHECK_MESSAGE(d.gap() <= 0.02, "gap " << d.gap());
        check_invariants(t, q, d);
    }
}

TEST_CASE("pairing witness reproduces the lower bound") {
    Rng rng(74);
    for (int i = 0; i < 6; ++i) {
        const Matrix t = rng.dense(2 + i % 2);
        const QParameter q(rng.uniform(0.2, 0.9));
        const OptimizerConfig c = cfg(200 + i);
        const DualEstimate d = dual_radius(t, q, c);
        const double r = q_radius_reduced(d.pairing_witness, q, c).value;
        CHECK(std::abs(std::abs(pairing(t, d.pairing_witness)) / r - d.lower) <= 1e-8 * std::max(1.0, d.lower));
    }
}

TEST_CASE("zero and known values") {
    const QParameter q(0.6);
    const DualEstimate z = dual_radius(Matrix::Zero(3, 3), q, cfg(3));
    CHECK(z.lower == 0.0);
    CHECK(z.upper == 0.0);
    CHECK(z.gap() == 0.0);
    CHECK(z.atoms.empty());

    // r_q(I) = q, so the identity gives |tr I| / q as a lower bound.
    const DualEstimate id = dual_radius(Matrix::Identity(2, 2), q, cfg(4));
    CHECK(id.lower >= 2.0 / 0.6 * (1 - 1e-6));
    CHECK(id.upper <= 2.0 / 0.6 * 1.02);
}

TEST_CASE("duality_check examples") {
    Rng rng(75);
    const QParameter q(0.6);
    const Matrix c = build_cq(q, 2);
    for (int i = 0; i < 5; ++i) {
        const Matrix a = rng.dense(2);
        CHECK(duality_check(c, a, q, cfg(i)).holds);
    }
    // Equality at the witness-aligned matrix: r_q(A) is attained by x (x) y^*, an orbit member.
    const Matrix a = rng.dense(2);
    const RadiusEstimate est = q_radius_reduced(a, q, cfg(5));
    const Matrix x = dyad(est.witness_x, *est.witness_y);
    const DualityCheck eq = duality_check(x, a, q, cfg(5));
    CHECK(eq.holds);
    CHECK(std::abs(eq.pairing - eq.dual_upper * eq.radius) <= 1e-3 * eq.dual_upper * eq.radius + 1e-2 * eq.radius);

    const DualityCheck zero = duality_check(Matrix::Zero(2, 2), a, q, cfg(6));
    CHECK(zero.holds);
    CHECK(zero.pairing == 0.0);

    const Matrix t = rng.dense(2);
    const DualityCheck with_id = duality_check(t, Matrix::Identity(2, 2), q, cfg(7));
    CHECK(with_id.holds);
    CHECK(std::abs(with_id.radius - 0.6) <= 1e-8);
    CHECK(std::abs(trace(t)) <= with_id.dual_upper * 0.6 * (1 + 1e-3));
}

TEST_CASE("trace-norm sandwich") {
    const QParameter q(0.6);
    const SandwichReport c = dual_trace_sandwich(build_cq(q, 2), q, cfg(8));
    CHECK(c.holds());
    CHECK(std::abs(c.trace_norm - 1.0) <= 1e-12);
    CHECK(std::abs(c.beta - 1.0 / 0.6) <= 1e-12);

    const SandwichReport id = dual_trace_sandwich(Matrix::Identity(2, 2), q, cfg(9));
    CHECK(id.holds());
    CHECK(id.upper >= 2.0);
    CHECK(id.lower <= 2.0 / 0.6 * (1 + 1e-6));

    const SandwichReport z = dual_trace_sandwich(Matrix::Zero(2, 2), q, cfg(10));
    CHECK(z.holds());
    CHECK(z.trace_norm == 0.0);
    CHECK(z.lower == 0.0);
    CHECK(z.upper == 0.0);

    Rng rng(76);
    for (int i = 0; i < 6; ++i) {
        const QParameter qi(rng.uniform(0.1, 1.0));
        CHECK(dual_trace_sandwich(rng.dense(2), qi, cfg(300 + i)).holds());
    }
}

TEST_CASE("triangle inequality of upper bounds") {
    Rng rng(77);
    const QParameter q(0.5);
    for (int i = 0; i < 4; ++i) {
        const Matrix t = rng.dense(2);
        const Matrix s = rng.dense(2);
        const DualEstimate dt = dual_radius(t, q, cfg(400 + i));
        const DualEstimate ds = dual_radius(s, q, cfg(500 + i));
        // Seeding T + S with the union of both decompositions makes the
        // inequality hold for the estimates and not only for the true norm.
        DualOptions opts;
        for (const DualEstimate* d : {&dt, &ds}) {
            for (std::size_t k = 0; k < d->atoms.size(); ++k) {
                opts.warm_atoms.push_back(d->atoms[k].matrix);
                opts.warm_coefficients.push_back(d->coefficients[k]);
            }
        }
        const DualEstimate sum = dual_radius(t + s, q, cfg(600 + i), opts);
        CHECK(sum.upper <= dt.upper + ds.upper + 2 * opts.feas_tol);
    }
}

TEST_CASE("circled symmetry") {
    Rng rng(78);
    const QParameter q(0.7);
    for (int i = 0; i < 4; ++i) {
        const Matrix t = rng.dense(2);
        const DualEstimate a = dual_radius(t, q, cfg(700 + i));
        const DualEstimate b = dual_radius(rng.unit_phase() * t, q, cfg(800 + i));
        CHECK(std::abs(a.upper - b.upper) <= 0.02 * a.upper);
        CHECK(std::abs(a.lower - b.lower) <= 0.02 * a.upper);
    }
}

TEST_CASE("minimal l1 combination") {
    // Columns e1, e2 and (e1 + e2) / sqrt 2: the cheapest way to make (1, 1)
    // uses only the third column, with weight sqrt 2.
    Matrix atoms(2, 3);
    atoms << 1.0, 0.0, 1.0 / std::sqrt(2.0), 0.0, 1.0, 1.0 / std::sqrt(2.0);
    Vector target(2);
    target << 1.0, 1.0;
    const detail::AtomicSolution s = detail::min_l1_combination(atoms, target);
    CHECK(s.residual <= 1e-8);
    CHECK(std::abs(s.objective - std::sqrt(2.0)) <= 1e-6);
    CHECK((atoms * s.coefficients - target).norm() <= 1e-8);

    // Complex phases: i e1 is reached with |c| = 1.
    Vector t2(2);
    t2 << Complex(0.0, 1.0), 0.0;
    const detail::AtomicSolution s2 = detail::min_l1_combination(atoms, t2);
    CHECK(std::abs(s2.objective - 1.0) <= 1e-6);
}

TEST_CASE("caratheodory reduction keeps the sum and does not raise the cost") {
    Rng rng(79);
    const Matrix atoms = rng.gaussian_matrix(3, 12);
    Vector c = rng.gaussian_vector(12);
    const Vector target = atoms * c;
    const double before = c.cwiseAbs().sum();
    const std::vector<std::size_t> kept = detail::caratheodory_reduce(atoms, c);
    CHECK(kept.size() <= 6);
    CHECK(static_cast<std::size_t>(c.size()) == kept.size());
    Vector rebuilt = Vector::Zero(3);
    for (std::size_t i = 0; i < kept.size(); ++i) rebuilt += c(static_cast<Eigen::Index>(i)) * atoms.col(static_cast<Eigen::Index>(kept[i]));
    CHECK((rebuilt - target).norm() <= 1e-9 * target.norm());
    CHECK(c.cwiseAbs().sum() <= before * (1 + 1e-12));
}

TEST_CASE("dimension cap and errors") {
    Rng rng(80);
    const QParameter q(0.6);
    CHECK_THROWS_AS(dual_radius(rng.dense(5), q, cfg(11)), DimensionError);
    CHECK_THROWS_AS(dual_radius(Matrix::Zero(2, 3), q, cfg(11)), DimensionError);
    DualOptions big;
    big.allow_large = true;
    big.max_iterations = 2;
    CHECK_NOTHROW(dual_radius(rng.dense(5), q, cfg(11, 2), big));
}

TEST_CASE("dual estimate JSON") {
    const QParameter q(0.6);
    const DualEstimate d = dual_radius(build_cq(q, 2), q, cfg(12));
    const Json j = to_json(d);
    for (const char* key : {"lower", "upper", "atoms", "coefficients", "feasibility_residual", "pairing_witness"})
        CHECK(j.contains(key));
    CHECK(j["atoms"].size() == d.atoms.size());
    CHECK(j["coefficients"].size() == d.coefficients.size());
}
