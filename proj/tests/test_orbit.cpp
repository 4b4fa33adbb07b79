#include "support.hpp"

#include "qnr/orbit.hpp"
#include "qnr/radius.hpp"

using namespace qnr;

namespace {

Matrix random_member(const QParameter& q, std::size_t n, Rng& rng) {
    const Matrix u = rng.unitary(n);
    return rng.unit_phase() * (u.adjoint() * build_cq(q, n) * u);
}

double reconstruction_residual(const Matrix& a, const QParameter& q) {
    const CanonicalForm cf = canonicalize(a, q);
    return (cf.theta * (cf.u.adjoint() * build_cq(q, static_cast<std::size_t>(a.rows())) * cf.u) - a).norm();
}

}  // namespace

TEST_CASE("build_cq") {
    CHECK(build_cq(QParameter(1.0), 2) == matrix_unit(2, 0, 0));
    const Matrix c = build_cq(QParameter(0.6), 2);
    CHECK(c(0, 0) == Complex(0.6));
    CHECK(std::abs(c(0, 1) - 0.8) <= 1e-15);
    CHECK(c(1, 0) == Complex(0.0));
    CHECK(c(1, 1) == Complex(0.0));
    for (double q : {0.05, 0.3, 0.77, 1.0}) {
        const Matrix m = build_cq(QParameter(q), 4);
        CHECK(std::abs(m.trace() - q) <= 1e-15);
        CHECK(std::abs(m.norm() - 1.0) <= 1e-15);
    }
    CHECK_THROWS_AS(build_cq(QParameter(0.5), 1), DimensionError);
}

TEST_CASE("make_orbit_element") {
    const QParameter q(0.6);
    const Vector e1 = Vector::Unit(3, 0);
    const Vector e2 = Vector::Unit(3, 1);
    const OrbitElement c = make_orbit_element(q, e1, e2, 1.0);
    CHECK((c.matrix - build_cq(q, 3)).norm() <= 1e-15);
    CHECK(std::abs(inner(c.x, c.y) - 0.6) <= 1e-15);

    const OrbitElement e11 = make_orbit_element(QParameter(1.0), e1, e2, 1.0);
    CHECK(e11.matrix == matrix_unit(3, 0, 0));
    // w is ignored for q = 1.
    CHECK_NOTHROW(make_orbit_element(QParameter(1.0), e1, e1, 1.0));

    Rng rng(61);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 2 + i % 4;
        const QParameter qi(rng.uniform(0.05, 1.0));
        const Vector x = rng.unit_vector(n);
        const Vector w = rng.unit_vector_orthogonal_to(x);
        const Complex theta = rng.unit_phase();
        const OrbitElement e = make_orbit_element(qi, x, w, theta);
        CHECK(is_in_orbit(e.matrix, qi).in_orbit);
        CHECK((e.matrix - e.phase * dyad(e.x, e.y)).norm() <= 1e-14);
        CHECK((e.matrix - e.canonical_phase * (e.canonical_unitary.adjoint() * build_cq(qi, n) * e.canonical_unitary))
                  .norm() <= 1e-8);
    }

    CHECK_THROWS_AS(make_orbit_element(q, 2.0 * e1, e2, 1.0), ValidationError);
    CHECK_THROWS_AS(make_orbit_element(q, e1, e1, 1.0), ValidationError);
    CHECK_THROWS_AS(make_orbit_element(q, e1, (e1 + e2).normalized(), 1.0), ValidationError);
    CHECK_THROWS_AS(make_orbit_element(q, e1, e2, 2.0), ValidationError);
}

TEST_CASE("is_in_orbit examples") {
    Rng rng(62);
    const QParameter q(0.6);
    for (int i = 0; i < 50; ++i) CHECK(is_in_orbit(random_member(q, 2 + i % 4, rng), q).in_orbit);
    const OrbitMembership rank2 = is_in_orbit(matrix_unit(2, 0, 0) + matrix_unit(2, 1, 1), q);
    CHECK_FALSE(rank2.in_orbit);
    CHECK(rank2.rank == 2);
    const OrbitMembership half = is_in_orbit(0.5 * build_cq(q, 2), q);
    CHECK_FALSE(half.in_orbit);
    CHECK(std::abs(half.hs_norm - 0.5) <= 1e-15);
    CHECK_FALSE(is_in_orbit(Matrix::Zero(2, 2), q).in_orbit);
}

TEST_CASE("characterization: violators of each condition are rejected") {
    Rng rng(63);
    for (int i = 0; i < 300; ++i) {
        const std::size_t n = 2 + i % 4;
        const QParameter q(rng.uniform(0.1, 0.9));
        const Vector x = rng.unit_vector(n);
        const Vector w = rng.unit_vector_orthogonal_to(x);
        // Wrong |trace| with rank one and HS norm one.
        const double q2 = q.q() + (q.q() > 0.5 ? -0.05 : 0.05);
        const Matrix wrong_trace = dyad(x, q2 * x + std::sqrt(1 - q2 * q2) * w);
        CHECK(std::abs(wrong_trace.norm() - 1.0) <= 1e-12);
        CHECK_FALSE(is_in_orbit(wrong_trace, q).in_orbit);
        // Wrong HS norm with rank one and trace q.
        const Matrix wrong_hs = dyad(x, q.q() * x + 0.5 * q.p() * w);
        CHECK(std::abs(wrong_hs.trace() - q.q()) <= 1e-12);
        CHECK_FALSE(is_in_orbit(wrong_hs, q).in_orbit);
        // Rank two with trace and HS norm matched.
        Matrix rank2 = q.q() * matrix_unit(n, 0, 0);
        rank2(1, 0) = q.p() / std::sqrt(2.0);
        rank2(0, 1) = q.p() / std::sqrt(2.0);
        CHECK(std::abs(rank2.norm() - 1.0) <= 1e-12);
        CHECK(numerical_rank(rank2) == 2);
        CHECK_FALSE(is_in_orbit(rank2, q).in_orbit);
    }
}

TEST_CASE("canonicalize") {
    const QParameter q(0.6);
    const CanonicalForm c = canonicalize(build_cq(q, 3), q);
    CHECK(std::abs(c.theta - 1.0) <= 1e-12);
    // U is the identity up to a global phase of U (fixed here to be positive).
    CHECK((c.u - Matrix::Identity(3, 3)).norm() <= 1e-10);

    Rng rng(64);
    for (int i = 0; i < 200; ++i) {
        const QParameter qi(i % 10 == 0 ? 1.0 : rng.uniform(0.05, 0.99));
        CHECK(reconstruction_residual(random_member(qi, 2 + i % 4, rng), qi) <= 1e-8);
    }
    CHECK(reconstruction_residual(matrix_unit(3, 0, 0), QParameter(1.0)) <= 1e-10);
    const CanonicalForm e11 = canonicalize(matrix_unit(3, 0, 0), QParameter(1.0));
    CHECK(std::abs(e11.theta - 1.0) <= 1e-12);
    CHECK(std::abs(std::abs(e11.u(0, 0)) - 1.0) <= 1e-12);

    try {
        canonicalize(Matrix::Identity(2, 2), q);
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("rank 2") != std::string::npos);
    }
}

TEST_CASE("canonical unitary uses first-entry phase convention") {
    Rng rng(65);
    for (int i = 0; i < 20; ++i) {
        const QParameter q(0.4);
        const CanonicalForm cf = canonicalize(random_member(q, 3, rng), q);
        for (Eigen::Index k = 0; k < cf.u.size(); ++k) {
            if (std::abs(cf.u.data()[k]) > 1e-12) {
                CHECK(std::abs(cf.u.data()[k].imag()) <= 1e-14);
                CHECK(cf.u.data()[k].real() > 0.0);
                break;
            }
        }
    }
}

TEST_CASE("decompose_rank_one worked example") {
    const QParameter q(0.6);
    Matrix r = Matrix::Zero(3, 3);
    r(0, 0) = 0.5;
    r(0, 1) = 0.5;
    CHECK(std::abs(schatten_norm(r, SchattenOrder::operator_norm) - std::sqrt(0.5)) <= 1e-12);
    const RankOneSplit s = decompose_rank_one(r, q, 0.0, 3);
    CHECK((s.first.matrix + s.second.matrix - r).norm() <= 1e-10);
    CHECK(is_in_orbit(s.first.matrix, q).in_orbit);
    CHECK(is_in_orbit(s.second.matrix, q).in_orbit);
}

TEST_CASE("decompose_rank_one families over t and random inputs") {
    const QParameter q(0.6);
    Matrix r = Matrix::Zero(4, 4);
    r(0, 0) = 0.5;
    r(0, 1) = 0.5;
    std::vector<Matrix> firsts;
    for (double t : {0.0, std::numbers::pi / 2, std::numbers::pi}) {
        const RankOneSplit s = decompose_rank_one(r, q, t, 3);
        CHECK((s.first.matrix + s.second.matrix - r).norm() <= 1e-10);
        CHECK(is_in_orbit(s.first.matrix, q).in_orbit);
        CHECK(is_in_orbit(s.second.matrix, q).in_orbit);
        firsts.push_back(s.first.matrix);
    }
    CHECK((firsts[0] - firsts[1]).norm() > 1e-3);
    CHECK((firsts[1] - firsts[2]).norm() > 1e-3);
    CHECK((decompose_rank_one(r, q, 0.0, 4).first.matrix - firsts[0]).norm() > 1e-3);

    Rng rng(66);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 3 + i % 3;
        const QParameter qi(rng.uniform(0.15, 0.95));
        const double bound = std::min(2 * qi.q(), 2 * qi.p());
        Matrix ri = dyad(rng.gaussian_vector(n), rng.gaussian_vector(n));
        ri *= rng.uniform(0.01, 0.99) * bound / schatten_norm(ri, SchattenOrder::operator_norm);
        const RankOneSplit s = decompose_rank_one(ri, qi, rng.uniform(0, 6.3), 3 + i % (n - 2));
        CHECK((s.first.matrix + s.second.matrix - ri).norm() <= 1e-10);
        CHECK(is_in_orbit(s.first.matrix, qi).in_orbit);
        CHECK(is_in_orbit(s.second.matrix, qi).in_orbit);
    }
}

TEST_CASE("decompose_rank_one preconditions") {
    const QParameter q(0.6);
    Matrix big = Matrix::Zero(3, 3);
    big(0, 0) = 1.2;
    CHECK_THROWS_AS(decompose_rank_one(big, q, 0.0, 3), DomainError);
    Matrix ok = Matrix::Zero(3, 3);
    ok(0, 0) = 0.3;
    CHECK_THROWS_AS(decompose_rank_one(ok, QParameter(1.0), 0.0, 3), DomainError);
    CHECK_THROWS_AS(decompose_rank_one(ok, q, 0.0, 2), DimensionError);
    CHECK_THROWS_AS(decompose_rank_one(ok, q, 0.0, 4), DimensionError);
    CHECK_THROWS_AS(decompose_rank_one(Matrix::Identity(3, 3) * 0.1, q, 0.0, 3), DomainError);
    CHECK_THROWS_AS(decompose_rank_one(ok, q, 0.0, 3, 0.9), DomainError);
    const RankOneSplit s = decompose_rank_one(ok, q, 0.3, 3, 0.5);
    CHECK((s.first.matrix + s.second.matrix - ok).norm() <= 1e-10);
}

TEST_CASE("rank-two span has real dimension at most 7") {
    Rng rng(67);
    const Matrix r = rng.rank_k(4, 2);
    const std::vector<Matrix> samples = rank_one_split_sample(r, 200, 5);
    for (const Matrix& a : samples) {
        CHECK(numerical_rank(a, 1e-8) == 1);
        CHECK(numerical_rank(r - a, 1e-8) == 1);
    }
    const RealVector sv = real_span_singular_values(samples);
    for (Eigen::Index k = 7; k < sv.size(); ++k) CHECK(sv(k) <= 1e-6 * sv(0));
    CHECK(sv(6) > 1e-3 * sv(0));
    CHECK_THROWS_AS(rank_one_split_sample(rng.rank_k(4, 1), 3, 1), DomainError);
}

TEST_CASE("orbit elements attain the dual pairing bound") {
    Rng rng(68);
    for (int i = 0; i < 10; ++i) {
        const Matrix a = rng.dense(3);
        const QParameter q(rng.uniform(0.1, 1.0));
        const RadiusEstimate est = q_radius_reduced(a, q, qnr::test::cfg(i));
        for (int k = 0; k < 200; ++k) CHECK(std::abs(pairing(random_member(q, 3, rng), a)) <= est.value * (1 + 1e-4));
        const Matrix x = dyad(est.witness_x, *est.witness_y);
        CHECK(is_in_orbit(x, q).in_orbit);
        CHECK(std::abs(std::abs(pairing(x, a)) - est.value) <= 1e-10);
    }
}

TEST_CASE("orbit element JSON round trip") {
    Rng rng(69);
    const QParameter q(0.35);
    const Vector x = rng.unit_vector(3);
    const OrbitElement e = make_orbit_element(q, x, rng.unit_vector_orthogonal_to(x), rng.unit_phase());
    const Json j = to_json(e);
    for (const char* key : {"matrix", "x", "y", "phase", "theta", "U"}) CHECK(j.contains(key));
    const OrbitElement back = orbit_element_from_json(Json::parse(j.dump()));
    CHECK(back.matrix == e.matrix);
    CHECK(back.x == e.x);
    CHECK(back.y == e.y);
    CHECK(back.phase == e.phase);
    CHECK(back.canonical_unitary == e.canonical_unitary);
    Json missing = j;
    missing.erase("U");
    CHECK_THROWS_AS(orbit_element_from_json(missing), ValidationError);
}
