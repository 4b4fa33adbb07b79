#include "support.hpp"

#include "qnr/isometry.hpp"
#include "qnr/orbit.hpp"
#include "qnr/radius.hpp"

#include <atomic>

using namespace qnr;
using qnr::test::cfg;

namespace {

constexpr DaggerMode kModes[] = {DaggerMode::identity, DaggerMode::transpose, DaggerMode::adjoint,
                                 DaggerMode::conjugate};

double action_residual(const IsometryDescriptor& a, const IsometryDescriptor& b, Rng& rng) {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const Matrix m = rng.dense(static_cast<std::size_t>(a.u.rows()));
        const Matrix fa = qnr::apply(a, m);
        worst = std::max(worst, (fa - qnr::apply(b, m)).norm() / std::max(1.0, fa.norm()));
    }
    return worst;
}

}  // namespace

TEST_CASE("apply examples") {
    Rng rng(81);
    const Matrix a = rng.dense(3);
    const IsometryDescriptor id{Matrix::Zero(3, 3), 1.0, Matrix::Identity(3, 3), DaggerMode::identity};
    CHECK(qnr::apply(id, a) == a);

    const Matrix s0 = rng.dense(3);
    const IsometryDescriptor shift{s0, 1.0, Matrix::Identity(3, 3), DaggerMode::identity};
    CHECK(qnr::apply(shift, Matrix::Zero(3, 3)) == s0);

    const Matrix u = rng.unitary(3);
    const IsometryDescriptor adj{Matrix::Zero(3, 3), Complex(0, 1), u, DaggerMode::adjoint};
    const Matrix expect = Complex(0, 1) * (u.adjoint() * matrix_unit(3, 1, 0) * u);
    CHECK((qnr::apply(adj, matrix_unit(3, 0, 1)) - expect).norm() <= 1e-15);

    CHECK_THROWS_AS(qnr::apply(id, rng.dense(2)), DimensionError);
}

TEST_CASE("descriptor validation") {
    IsometryDescriptor d{Matrix::Zero(2, 2), 1.0, Matrix::Identity(2, 2), DaggerMode::identity};
    CHECK_NOTHROW(d.validate());
    d.mu = 1.1;
    CHECK_THROWS_AS(d.validate(), ValidationError);
    d.mu = 1.0;
    d.u(0, 1) = 0.1;
    CHECK_THROWS_AS(d.validate(), ValidationError);
}

TEST_CASE("descriptor maps are isometries in every mode") {
    Rng rng(82);
    for (DaggerMode mode : kModes) {
        for (std::size_t n : {2u, 3u}) {
            const IsometryDescriptor d = random_descriptor(n, mode, rng);
            const QParameter q(rng.uniform(0.1, 1.0));
            const IsometryReport rep = verify_isometry(as_map(d), q, 6, 1000 + n, cfg(n));
            CHECK_MESSAGE(rep.passed, to_string(mode) << " defect " << rep.max_defect);
            CHECK(rep.max_defect <= kIsometryDefectTol);
            CHECK(rep.trials.size() == 6);
        }
    }
}

TEST_CASE("scaling fails and translation passes") {
    const QParameter q(0.6);
    const BlackBoxMap twice{2, [](const Matrix& a) { return Matrix(2.0 * a); }, false};
    const IsometryReport bad = verify_isometry(twice, q, 4, 5, cfg(5));
    CHECK_FALSE(bad.passed);
    CHECK(std::abs(bad.max_defect - 1.0) <= 1e-3);
    CHECK(bad.worst_trial < bad.trials.size());

    Rng rng(83);
    const Matrix s0 = rng.dense(2);
    const BlackBoxMap shift{2, [s0](const Matrix& a) { return Matrix(a + s0); }, false};
    CHECK(verify_isometry(shift, q, 4, 6, cfg(6)).passed);
}

TEST_CASE("single-threaded maps are never called concurrently") {
    std::atomic<int> inside{0};
    std::atomic<bool> overlap{false};
    BlackBoxMap f{2,
                  [&](const Matrix& a) {
                      if (inside.fetch_add(1) != 0) overlap = true;
                      Matrix r = a.transpose();
                      inside.fetch_sub(1);
                      return r;
                  },
                  true};
    CHECK(verify_isometry(f, QParameter(0.5), 8, 7, cfg(7)).passed);
    CHECK_FALSE(overlap.load());
}

TEST_CASE("verify_isometry is reproducible") {
    Rng rng(84);
    const IsometryDescriptor d = random_descriptor(3, DaggerMode::adjoint, rng);
    const IsometryReport a = verify_isometry(as_map(d), QParameter(0.4), 5, 9, cfg(9));
    const IsometryReport b = verify_isometry(as_map(d), QParameter(0.4), 5, 9, cfg(9));
    CHECK(a.max_defect == b.max_defect);
    for (std::size_t i = 0; i < a.trials.size(); ++i) CHECK(a.trials[i].radius_after == b.trials[i].radius_after);
    CHECK_THROWS_AS(verify_isometry(as_map(d), QParameter(0.4), 0, 9, cfg(9)), ValidationError);
}

TEST_CASE("recover the identity map") {
    const BlackBoxMap id{3, [](const Matrix& a) { return a; }, false};
    const RecoveryResult r = recover_parameters(id, QParameter(0.6), 3);
    CHECK(r.descriptor.s0.norm() <= 1e-12);
    CHECK(std::abs(r.descriptor.mu - 1.0) <= 1e-12);
    CHECK((r.descriptor.u - Matrix::Identity(3, 3)).norm() <= 1e-12);
    CHECK(r.descriptor.mode == DaggerMode::identity);
    CHECK(r.residual <= 1e-8);
}

TEST_CASE("recovery round trip over random descriptors") {
    Rng rng(85);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 2 + i % 3;
        const DaggerMode mode = kModes[(i / 3) % 4];
        const IsometryDescriptor d = random_descriptor(n, mode, rng);
        const RecoveryResult r = recover_parameters(as_map(d), QParameter(0.5), n);
        CHECK(r.residual <= 1e-8);
        CHECK(r.descriptor.mode == mode);
        CHECK((r.descriptor.s0 - d.s0).norm() <= 1e-10);
        CHECK(action_residual(r.descriptor, d, rng) <= 1e-8);
        CHECK_NOTHROW(r.descriptor.validate());
    }
}

TEST_CASE("recovery uses the documented probe budget") {
    Rng rng(86);
    for (std::size_t n : {2u, 3u, 4u}) {
        const IsometryDescriptor d = random_descriptor(n, DaggerMode::transpose, rng);
        int calls = 0;
        const BlackBoxMap counted{n, [&](const Matrix& a) { ++calls; return qnr::apply(d, a); }, true};
        const RecoveryResult r = recover_parameters(counted, QParameter(0.5), n);
        CHECK(r.probes == n * n + 5);
        // Probes plus the 20 validation matrices.
        CHECK(calls == static_cast<int>(n * n + 5 + 20));
    }
}

TEST_CASE("maps of another form are rejected") {
    const QParameter q(0.6);
    const BlackBoxMap herm{2, [](const Matrix& a) { return Matrix(a + a.adjoint()); }, false};
    CHECK_THROWS_AS(recover_parameters(herm, q, 2), DomainError);
    try {
        recover_parameters(herm, q, 2);
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("not of the form") != std::string::npos);
    }
    const BlackBoxMap twice{2, [](const Matrix& a) { return Matrix(2.0 * a); }, false};
    CHECK_THROWS_AS(recover_parameters(twice, q, 2), DomainError);
    const BlackBoxMap square{2, [](const Matrix& a) { return Matrix(a * a); }, false};
    CHECK_THROWS_AS(recover_parameters(square, q, 2), DomainError);
    const BlackBoxMap id{2, [](const Matrix& a) { return a; }, false};
    CHECK_THROWS_AS(recover_parameters(id, q, 3), DimensionError);
}

TEST_CASE("composition closure and the mode table") {
    using enum DaggerMode;
    // Klein four-group: identity neutral, every element its own inverse.
    CHECK(compose(transpose, transpose) == identity);
    CHECK(compose(adjoint, adjoint) == identity);
    CHECK(compose(conjugate, conjugate) == identity);
    CHECK(compose(transpose, conjugate) == adjoint);
    CHECK(compose(conjugate, transpose) == adjoint);
    CHECK(compose(transpose, adjoint) == conjugate);
    CHECK(compose(adjoint, conjugate) == transpose);
    for (DaggerMode m : kModes) CHECK(compose(identity, m) == m);

    Rng rng(87);
    for (DaggerMode mo : kModes) {
        for (DaggerMode mi : kModes) {
            const IsometryDescriptor outer = random_descriptor(3, mo, rng);
            const IsometryDescriptor inner = random_descriptor(3, mi, rng);
            const IsometryDescriptor c = compose(outer, inner);
            CHECK(c.mode == compose(mo, mi));
            CHECK_NOTHROW(c.validate());
            for (int k = 0; k < 5; ++k) {
                const Matrix a = rng.dense(3);
                const Matrix direct = qnr::apply(outer, qnr::apply(inner, a));
                CHECK((qnr::apply(c, a) - direct).norm() <= 1e-12 * std::max(1.0, direct.norm()));
            }
        }
    }
    const IsometryDescriptor c = compose(random_descriptor(2, adjoint, rng), random_descriptor(2, transpose, rng));
    CHECK(verify_isometry(as_map(c), QParameter(0.3), 4, 11, cfg(11)).passed);
}

TEST_CASE("descriptor maps preserve the orbit") {
    Rng rng(88);
    for (DaggerMode mode : kModes) {
        IsometryDescriptor d = random_descriptor(3, mode, rng);
        d.s0 = Matrix::Zero(3, 3);
        for (int k = 0; k < 20; ++k) {
            const QParameter q(rng.uniform(0.05, 1.0));
            const Matrix u = rng.unitary(3);
            const Matrix x = rng.unit_phase() * (u.adjoint() * build_cq(q, 3) * u);
            CHECK(is_in_orbit(qnr::apply(d, x), q).in_orbit);
        }
    }
}

TEST_CASE("dagger invariance") {
    const QParameter q(0.6);
    const DaggerInvarianceReport c = dagger_invariance_check(build_cq(q, 2), q, cfg(12));
    CHECK(c.holds);
    for (double v : c.values) CHECK(std::abs(v - c.values[0]) <= 1e-12);

    Rng rng(89);
    const Matrix g = rng.dense(3);
    const Matrix h = g + g.adjoint();
    const DaggerInvarianceReport hr = dagger_invariance_check(h, q, cfg(13));
    CHECK(hr.values[0] == hr.values[2]);
    CHECK(hr.holds);

    for (int i = 0; i < 10; ++i) {
        const DaggerInvarianceReport r = dagger_invariance_check(rng.dense(4), QParameter(0.3), cfg(14 + i));
        CHECK(r.spread <= kDaggerSpreadTol);
        CHECK(r.holds);
    }
}

TEST_CASE("descriptor JSON round trip") {
    Rng rng(90);
    const IsometryDescriptor d = random_descriptor(3, DaggerMode::conjugate, rng);
    const Json j = to_json(d);
    for (const char* key : {"s0", "mu", "u", "mode"}) CHECK(j.contains(key));
    CHECK(j["mode"] == "conjugate");
    const IsometryDescriptor back = descriptor_from_json(Json::parse(j.dump()));
    CHECK(back.s0 == d.s0);
    CHECK(back.mu == d.mu);
    CHECK(back.u == d.u);
    CHECK(back.mode == d.mode);

    Json bad = j;
    bad["mode"] = "sideways";
    CHECK_THROWS(descriptor_from_json(bad));
    Json scaled = j;
    scaled["mu"] = Json::array({2.0, 0.0});
    CHECK_THROWS_AS(descriptor_from_json(scaled), ValidationError);
}
