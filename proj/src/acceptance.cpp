#include "qnr/acceptance.hpp"

#include "qnr/c_radius.hpp"
#include "qnr/dual.hpp"
#include "qnr/isometry.hpp"
#include "qnr/oracle.hpp"
#include "qnr/orbit.hpp"
#include "qnr/parallel.hpp"
#include "qnr/radius.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace qnr::acceptance {

namespace {

constexpr std::array<double, 6> kQGrid = {0.1, 0.25, 0.5, 0.6, 0.9, 1.0};

std::size_t scaled(std::size_t nominal, double scale) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(nominal) * scale)));
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng.engine());
}

std::uint64_t criterion_seed(const Options& opts, int id) {
    return opts.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(id));
}

OptimizerConfig config_for(std::uint64_t seed) {
    OptimizerConfig cfg;
    cfg.seed = seed;
    return cfg;
}

Matrix orbit_member(const QParameter& q, std::size_t n, Rng& rng) {
    const Matrix u = rng.unitary(n);
    return rng.unit_phase() * (u.adjoint() * build_cq(q, n) * u);
}

CriterionResult identity_radius(const Options& opts) {
    CriterionResult r{1, "identity radius", true, {}};
    double worst = 0.0;
    for (std::size_t n = 2; n <= 8; ++n)
        for (double qv : kQGrid) {
            const QParameter q(qv);
            const double v = q_radius_reduced(Matrix::Identity(n, n), q, config_for(criterion_seed(opts, 1))).value;
            worst = std::max(worst, std::abs(v - qv));
        }
    r.passed = worst <= 1e-8;
    r.detail = "max |r_q(I_n) - q| = " + fmt(worst) + " (tol 1e-8, n = 2..8, 6 values of q)";
    return r;
}

CriterionResult jordan_cell(const Options& opts) {
    CriterionResult r{2, "Jordan-cell value", true, {}};
    const Matrix e12 = matrix_unit(2, 0, 1);
    double worst = 0.0;
    double worst_oracle = 0.0;
    bool oracle_ok = true;
    for (double qv : kQGrid) {
        const QParameter q(qv);
        const double exact = (1.0 + q.p()) / 2.0;
        const double v = q_radius_reduced(e12, q, config_for(criterion_seed(opts, 2))).value;
        worst = std::max(worst, std::abs(v - exact));
        const oracle::OracleValue o = oracle::brute_q_radius_2x2(e12, q, {400});
        worst_oracle = std::max(worst_oracle, std::abs(v - o.value));
        oracle_ok = oracle_ok && std::abs(v - o.value) <= o.error_bound && o.value <= v + 1e-12;
    }
    r.passed = worst <= 1e-6 && oracle_ok;
    r.detail = "max |r_q(E12) - (1+p)/2| = " + fmt(worst) + " (tol 1e-6); max |solver - oracle| = " +
               fmt(worst_oracle) + (oracle_ok ? " within grid error" : " exceeds grid error");
    return r;
}

CriterionResult three_methods(const Options& opts) {
    CriterionResult r{3, "three-method agreement", true, {}};
    const std::size_t count = scaled(200, opts.scale);
    constexpr std::array<double, 3> qs = {0.3, 0.7, 1.0};
    Rng rng(criterion_seed(opts, 3));
    std::vector<Matrix> mats;
    for (std::size_t i = 0; i < count; ++i) mats.push_back(rng.dense(3));

    std::vector<double> spread(count * qs.size(), 0.0);
    parallel::for_each_index(spread.size(), [&](std::size_t k) {
        const Matrix& a = mats[k / qs.size()];
        const QParameter q(qs[k % qs.size()]);
        const std::uint64_t s = criterion_seed(opts, 3) + k;
        const double v1 = q_radius_reduced(a, q, config_for(s)).value;
        const double v2 = q_radius_direct(a, q, config_for(s)).value;
        const double v3 = c_radius(a, build_cq(q, 3), c_radius_config(s)).value;
        const double hi = std::max({v1, v2, v3});
        const double lo = std::min({v1, v2, v3});
        spread[k] = (hi - lo) / std::max(hi, 1e-12);
    });
    const double worst = *std::max_element(spread.begin(), spread.end());
    const auto bad = std::count_if(spread.begin(), spread.end(), [](double s) { return s > 1e-4; });
    r.passed = bad == 0;
    r.detail = std::to_string(count) + " matrices x 3 q: max relative spread " + fmt(worst) + ", " +
               std::to_string(bad) + " above 1e-4";
    return r;
}

CriterionResult inequality_suite(const Options& opts) {
    CriterionResult r{4, "inequality suite", true, {}};
    const std::size_t count = scaled(1000, opts.scale);
    Rng rng(criterion_seed(opts, 4));
    std::vector<Matrix> mats;
    std::vector<double> qs;
    for (std::size_t i = 0; i < count; ++i) {
        mats.push_back(rng.dense(pick(rng, 2, 5)));
        qs.push_back(i % 10 == 9 ? 1.0 : rng.uniform(0.05, 1.0));
    }
    std::vector<std::size_t> violations(count, 0);
    parallel::for_each_index(count, [&](std::size_t i) {
        const EquivalenceReport rep =
            check_equivalence(mats[i], QParameter(qs[i]), config_for(criterion_seed(opts, 4) + i));
        for (const auto& c : rep.checks) violations[i] += c.holds ? 0 : 1;
    });
    std::size_t total = 0;
    for (auto v : violations) total += v;
    r.passed = total == 0;
    r.detail = std::to_string(count) + " matrices, 5 inequalities each: " + std::to_string(total) + " violations";
    return r;
}

CriterionResult orbit_characterization(const Options& opts) {
    CriterionResult r{5, "orbit characterization", true, {}};
    const std::size_t count = scaled(1000, opts.scale);
    Rng rng(criterion_seed(opts, 5));
    std::size_t members_ok = 0;
    std::size_t violators_rejected = 0;
    double worst_round_trip = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t n = pick(rng, 2, 5);
        const double qv = i % 10 == 9 ? 1.0 : rng.uniform(0.05, 0.95);
        const QParameter q(qv);
        const Matrix a = orbit_member(q, n, rng);
        if (is_in_orbit(a, q).in_orbit) ++members_ok;
        const CanonicalForm cf = canonicalize(a, q);
        const Matrix back = cf.theta * (cf.u.adjoint() * build_cq(q, n) * cf.u);
        worst_round_trip = std::max(worst_round_trip, (back - a).norm());

        Matrix bad;
        switch (i % 3) {
            case 0: {  // rank two
                const Vector x = rng.unit_vector(n);
                bad = a + 0.1 * dyad(x, rng.unit_vector(n));
                break;
            }
            case 1: {  // rank one, HS norm 1, wrong trace
                const double other = qv > 0.5 ? qv - rng.uniform(0.05, 0.4) : qv + rng.uniform(0.05, 0.4);
                bad = orbit_member(QParameter(other), n, rng);
                break;
            }
            default: {  // rank one, trace q, wrong HS norm
                const Vector x = rng.unit_vector(n);
                const Vector w = rng.unit_vector_orthogonal_to(x);
                const double off = q.p() + (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0) * rng.uniform(0.05, 0.3);
                bad = dyad(x, qv * x + std::max(off, 0.0) * w);
                if (std::abs(bad.norm() - 1.0) < 1e-3) bad *= 1.1;
                break;
            }
        }
        if (!is_in_orbit(bad, q).in_orbit) ++violators_rejected;
    }
    r.passed = members_ok == count && violators_rejected == count && worst_round_trip <= 1e-8;
    r.detail = std::to_string(members_ok) + "/" + std::to_string(count) + " members accepted, " +
               std::to_string(violators_rejected) + "/" + std::to_string(count) +
               " violators rejected, max canonical round-trip " + fmt(worst_round_trip) + " (tol 1e-8)";
    return r;
}

CriterionResult rank_one_decomposition(const Options& opts) {
    CriterionResult r{6, "rank-one decomposition", true, {}};
    const std::size_t count = scaled(100, opts.scale);
    Rng rng(criterion_seed(opts, 6));
    std::size_t ok = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t n = pick(rng, 3, 5);
        const QParameter q(rng.uniform(0.15, 0.95));
        const double bound = std::min(2.0 * q.q(), 2.0 * q.p());
        Matrix rr = dyad(rng.gaussian_vector(n), rng.gaussian_vector(n));
        rr *= rng.uniform(0.05, 0.95) * bound / schatten_norm(rr, SchattenOrder::operator_norm);
        const RankOneSplit split =
            decompose_rank_one(rr, q, rng.uniform(0.0, 2.0 * std::numbers::pi), pick(rng, 3, n));
        const double res = (split.first.matrix + split.second.matrix - rr).norm();
        worst = std::max(worst, res);
        if (is_in_orbit(split.first.matrix, q).in_orbit && is_in_orbit(split.second.matrix, q).in_orbit &&
            res <= 1e-10)
            ++ok;
    }
    r.passed = ok == count;
    r.detail = std::to_string(ok) + "/" + std::to_string(count) + " splits valid, max |A + B - R|_2 = " + fmt(worst) +
               " (tol 1e-10)";
    return r;
}

CriterionResult rank_k_lipschitz(const Options& opts) {
    CriterionResult r{7, "rank-k Lipschitz", true, {}};
    const std::size_t count = scaled(1000, opts.scale);
    Rng rng(criterion_seed(opts, 7));
    std::size_t violations = 0;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t n = pick(rng, 2, 8);
        const std::size_t k = pick(rng, 1, std::min<std::size_t>(3, n));
        const Matrix t = rng.rank_k(n, pick(rng, 1, k));
        const Matrix s = rng.rank_k(n, pick(rng, 1, k));
        const Matrix d = t - s;
        const double hs = schatten_norm(d, SchattenOrder::hilbert_schmidt);
        const double tr = schatten_norm(d, SchattenOrder::trace);
        const double bound = std::sqrt(2.0 * static_cast<double>(k));
        if (!(hs <= tr * (1.0 + 1e-12)) || !(tr <= bound * hs * (1.0 + 1e-12))) ++violations;
        worst_ratio = std::max(worst_ratio, tr / (bound * hs));
    }
    r.passed = violations == 0;
    r.detail = std::to_string(count) + " pairs: " + std::to_string(violations) +
               " violations, max |T-S|_1 / (sqrt(2k) |T-S|_2) = " + fmt(worst_ratio);
    return r;
}

CriterionResult dual_bounds(const Options& opts) {
    CriterionResult r{8, "dual two-sided bound", true, {}};
    const std::size_t n2 = scaled(50, opts.scale);
    const std::size_t n3 = scaled(20, opts.scale);
    const std::size_t members = scaled(100, opts.scale);
    Rng rng(criterion_seed(opts, 8));

    struct Case {
        Matrix t;
        QParameter q;
    };
    std::vector<Case> random_cases;
    for (std::size_t i = 0; i < n2 + n3; ++i)
        random_cases.push_back({rng.dense(i < n2 ? 2 : 3), QParameter(rng.uniform(0.1, 1.0))});
    std::vector<Case> member_cases;
    for (std::size_t i = 0; i < members; ++i) {
        const QParameter q(rng.uniform(0.1, 1.0));
        member_cases.push_back({orbit_member(q, pick(rng, 2, 3), rng), q});
    }

    std::vector<SandwichReport> sandwich(random_cases.size());
    parallel::for_each_index(random_cases.size(), [&](std::size_t i) {
        sandwich[i] = dual_trace_sandwich(random_cases[i].t, random_cases[i].q, config_for(criterion_seed(opts, 8) + i));
    });
    std::vector<DualEstimate> member_est(members);
    parallel::for_each_index(members, [&](std::size_t i) {
        member_est[i] = dual_radius(member_cases[i].t, member_cases[i].q, config_for(criterion_seed(opts, 8) + 1000 + i));
    });

    std::size_t gap_ok = 0;
    std::size_t sandwich_ok = 0;
    double worst_gap = 0.0;
    for (const auto& s : sandwich) {
        worst_gap = std::max(worst_gap, s.gap);
        gap_ok += s.gap <= 0.02 ? 1 : 0;
        sandwich_ok += s.holds() ? 1 : 0;
    }
    std::size_t members_ok = 0;
    double worst_member = 0.0;
    for (const auto& e : member_est) {
        worst_member = std::max({worst_member, std::abs(e.lower - 1.0), std::abs(e.upper - 1.0)});
        members_ok += e.lower >= 0.98 && e.upper <= 1.02 ? 1 : 0;
    }
    const std::size_t total = random_cases.size();
    r.passed = gap_ok == total && sandwich_ok == total && members_ok == members;
    r.detail = std::to_string(gap_ok) + "/" + std::to_string(total) + " gaps <= 2% (max " + fmt(worst_gap) + "), " +
               std::to_string(sandwich_ok) + "/" + std::to_string(total) + " sandwiches hold, " +
               std::to_string(members_ok) + "/" + std::to_string(members) +
               " orbit members in [0.98, 1.02] (max deviation " + fmt(worst_member) + ")";
    return r;
}

CriterionResult isometry_classification(const Options& opts) {
    CriterionResult r{9, "isometry classification", true, {}};
    const std::size_t descriptors = scaled(100, opts.scale);
    const std::size_t matrices = scaled(200, opts.scale);
    constexpr std::array<DaggerMode, 4> modes = {DaggerMode::identity, DaggerMode::transpose, DaggerMode::adjoint,
                                                 DaggerMode::conjugate};
    const std::uint64_t base = criterion_seed(opts, 9);
    Rng rng(base);

    std::size_t verify_ok = 0;
    double worst_defect = 0.0;
    for (std::size_t i = 0; i < descriptors; ++i) {
        const std::size_t n = 2 + i % 3;
        const IsometryDescriptor d = random_descriptor(n, modes[i % 4], rng);
        const IsometryReport rep = verify_isometry(as_map(d), QParameter(rng.uniform(0.1, 1.0)), 2, base + i,
                                                   config_for(base + i));
        worst_defect = std::max(worst_defect, rep.max_defect);
        verify_ok += rep.passed ? 1 : 0;
    }

    std::size_t scaling_rejected = 0;
    for (std::size_t n = 2; n <= 4; ++n) {
        const BlackBoxMap twice{n, [](const Matrix& a) { return Matrix(2.0 * a); }, false};
        const IsometryReport rep = verify_isometry(twice, QParameter(0.6), 2, base + 500 + n, config_for(base + n));
        scaling_rejected += rep.passed ? 0 : 1;
    }

    std::size_t recover_ok = 0;
    double worst_residual = 0.0;
    for (std::size_t i = 0; i < descriptors; ++i) {
        const std::size_t n = 2 + i % 3;
        const IsometryDescriptor d = random_descriptor(n, modes[(i / 3) % 4], rng);
        try {
            const RecoveryResult rec = recover_parameters(as_map(d), QParameter(0.5), n);
            worst_residual = std::max(worst_residual, rec.residual);
            recover_ok += rec.residual <= 1e-8 && rec.descriptor.mode == d.mode ? 1 : 0;
        } catch (const DomainError&) {
            worst_residual = std::max(worst_residual, 1.0);
        }
    }

    std::size_t invariance_ok = 0;
    double worst_spread = 0.0;
    std::vector<Matrix> mats;
    std::vector<double> qs;
    for (std::size_t i = 0; i < matrices; ++i) {
        mats.push_back(rng.dense(pick(rng, 2, 4)));
        qs.push_back(rng.uniform(0.1, 1.0));
    }
    std::vector<double> spreads(matrices, 0.0);
    parallel::for_each_index(matrices, [&](std::size_t i) {
        spreads[i] = dagger_invariance_check(mats[i], QParameter(qs[i]), config_for(base + 2000 + i)).spread;
    });
    for (double s : spreads) {
        worst_spread = std::max(worst_spread, s);
        invariance_ok += s <= kDaggerSpreadTol ? 1 : 0;
    }

    r.passed = verify_ok == descriptors && scaling_rejected == 3 && recover_ok == descriptors &&
               invariance_ok == matrices;
    r.detail = std::to_string(verify_ok) + "/" + std::to_string(descriptors) + " descriptor maps verified (max defect " +
               fmt(worst_defect) + "), " + std::to_string(scaling_rejected) + "/3 scaling maps rejected, " +
               std::to_string(recover_ok) + "/" + std::to_string(descriptors) + " recoveries (max residual " +
               fmt(worst_residual) + "), " + std::to_string(invariance_ok) + "/" + std::to_string(matrices) +
               " dagger spreads <= 1e-4 (max " + fmt(worst_spread) + ")";
    return r;
}

CriterionResult norm_certificates(const Options& opts) {
    CriterionResult r{10, "norm certificate", true, {}};
    bool cq_ok = true;
    for (double qv : kQGrid)
        for (std::size_t n = 2; n <= 4; ++n) cq_ok = cq_ok && norm_certificate(build_cq(QParameter(qv), n)).is_norm;
    const Matrix scalar = Complex(2.5, -1.0) * Matrix::Identity(3, 3);
    Matrix traceless = matrix_unit(3, 0, 1);
    Matrix diag = Matrix::Zero(3, 3);
    diag(0, 0) = 1.0;
    diag(1, 1) = -1.0;
    const bool rejects = !norm_certificate(scalar).is_norm && !norm_certificate(traceless).is_norm &&
                         !norm_certificate(diag).is_norm;

    Rng rng(criterion_seed(opts, 10));
    double worst_scalar = 0.0;
    double worst_identity = 0.0;
    for (int i = 0; i < 10; ++i) {
        const std::size_t n = pick(rng, 2, 4);
        const Matrix a = rng.dense(n);
        const Complex lambda = rng.complex_gaussian();
        const double v = c_radius(a, lambda * Matrix::Identity(n, n), c_radius_config(criterion_seed(opts, 10) + i)).value;
        worst_scalar = std::max(worst_scalar, std::abs(v - std::abs(lambda) * std::abs(a.trace())));
        const Matrix c = rng.dense(n);
        const double w = c_radius(Matrix::Identity(n, n), c, c_radius_config(criterion_seed(opts, 10) + 100 + i)).value;
        worst_identity = std::max(worst_identity, std::abs(w - std::abs(c.trace())));
    }
    r.passed = cq_ok && rejects && worst_scalar <= 1e-8 && worst_identity <= 1e-8;
    r.detail = std::string("C_q certified ") + (cq_ok ? "for all q" : "NOT for all q") +
               ", scalar/traceless " + (rejects ? "rejected" : "NOT rejected") + ", max |r_{lI}(A) - |l||tr A|| = " +
               fmt(worst_scalar) + ", max |r_C(I) - |tr C|| = " + fmt(worst_identity) + " (tol 1e-8)";
    return r;
}

CriterionResult rank_two_span(const Options& opts) {
    CriterionResult r{11, "rank-two span bound", true, {}};
    Rng rng(criterion_seed(opts, 11));
    const Matrix rr = rng.rank_k(4, 2);
    const std::vector<Matrix> samples = rank_one_split_sample(rr, 64, criterion_seed(opts, 11) + 1);
    const RealVector sv = real_span_singular_values(samples);
    const double rel = sv(7) / sv(0);
    std::size_t dim = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) dim += sv(k) > 1e-6 * sv(0) ? 1 : 0;
    r.passed = rel <= 1e-6;
    r.detail = "64 samples at n = 4: numerical real dimension " + std::to_string(dim) + ", sigma_8 / sigma_1 = " +
               fmt(rel) + " (tol 1e-6)";
    return r;
}

CriterionResult determinism(const Options& opts) {
    CriterionResult r{12, "determinism", true, {}};
    const std::string first = selftest_report(opts.seed, opts.determinism_scale).dump(2);
    const std::string second = selftest_report(opts.seed, opts.determinism_scale).dump(2);
    r.passed = first == second;
    r.detail = "two self-test runs with seed " + std::to_string(opts.seed) + ": " + std::to_string(first.size()) +
               " bytes, " + (r.passed ? "identical" : "different");
    return r;
}

}  // namespace

CriterionResult run_criterion(int id, const Options& opts) {
    switch (id) {
        case 1: return identity_radius(opts);
        case 2: return jordan_cell(opts);
        case 3: return three_methods(opts);
        case 4: return inequality_suite(opts);
        case 5: return orbit_characterization(opts);
        case 6: return rank_one_decomposition(opts);
        case 7: return rank_k_lipschitz(opts);
        case 8: return dual_bounds(opts);
        case 9: return isometry_classification(opts);
        case 10: return norm_certificates(opts);
        case 11: return rank_two_span(opts);
        case 12: return determinism(opts);
        default: throw std::out_of_range("unknown acceptance criterion " + std::to_string(id));
    }
}

std::vector<CriterionResult> run_all(const Options& opts, const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<CriterionResult> out;
    const int last = opts.include_determinism ? kCriterionCount : kCriterionCount - 1;
    for (int id = 1; id <= last; ++id) {
        CriterionResult res;
        try {
            res = run_criterion(id, opts);
        } catch (const std::exception& e) {
            res.id = id;
            res.passed = false;
            res.name = "criterion " + std::to_string(id);
            res.detail = std::string("exception: ") + e.what();
        }
        if (on_result) on_result(res);
        out.push_back(std::move(res));
    }
    return out;
}

std::string format_line(const CriterionResult& r) {
    char head[64];
    std::snprintf(head, sizeof head, "criterion %2d %s ", r.id, r.passed ? "PASS" : "FAIL");
    return head + r.name + ": " + r.detail;
}

std::vector<OracleCheck> oracle_cross_checks(std::uint64_t seed, double scale) {
    std::vector<OracleCheck> out;
    const std::size_t count = scaled(50, scale);
    constexpr std::array<double, 3> qs = {0.2, 0.6, 1.0};
    Rng rng(seed ^ 0x0a5c1eULL);
    std::vector<Matrix> mats;
    for (std::size_t i = 0; i < count; ++i) mats.push_back(rng.dense(2));

    for (double qv : qs) {
        const QParameter q(qv);
        std::size_t ok = 0;
        double worst = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const double v = q_radius_reduced(mats[i], q, config_for(seed + i)).value;
            const oracle::OracleValue o = oracle::brute_q_radius_2x2(mats[i], q, {120});
            worst = std::max(worst, std::abs(v - o.value));
            ok += std::abs(v - o.value) <= 3.0 * o.error_bound && o.value <= v + 1e-9 ? 1 : 0;
        }
        out.push_back({"q-radius vs grid, q = " + fmt(qv), ok == count,
                       std::to_string(ok) + "/" + std::to_string(count) + " within 3x grid bound, max gap " + fmt(worst)});
    }

    const std::size_t c_count = std::min<std::size_t>(count, 5);
    std::size_t ok = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < c_count; ++i) {
        const QParameter q(0.6);
        const oracle::OracleValue a = oracle::brute_c_radius_2x2(mats[i], build_cq(q, 2), {40});
        const oracle::OracleValue b = oracle::brute_q_radius_2x2(mats[i], q, {120});
        worst = std::max(worst, std::abs(a.value - b.value));
        ok += std::abs(a.value - b.value) <= a.error_bound + b.error_bound ? 1 : 0;
    }
    out.push_back({"C_q grid vs q grid", ok == c_count,
                   std::to_string(ok) + "/" + std::to_string(c_count) + " within combined bound, max gap " + fmt(worst)});

    const oracle::OracleValue e12 = oracle::brute_q_radius_2x2(matrix_unit(2, 0, 1), QParameter(0.6), {400});
    out.push_back({"grid E12 at q = 0.6", std::abs(e12.value - 0.9) <= 0.003, "value " + fmt(e12.value) + ", expected 0.9"});
    return out;
}

Json selftest_report(std::uint64_t seed, double scale) {
    Options opts;
    opts.seed = seed;
    opts.scale = scale;
    opts.include_determinism = false;

    Json checks = Json::array();
    Json table = Json::array();
    bool all = true;
    for (const auto& c : oracle_cross_checks(seed, scale)) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        table.push_back(std::string("oracle ") + (c.passed ? "PASS " : "FAIL ") + c.name + ": " + c.detail);
        all = all && c.passed;
    }
    Json criteria = Json::array();
    for (const auto& c : run_all(opts)) {
        criteria.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        table.push_back(format_line(c));
        all = all && c.passed;
    }
    return Json{{"seed", seed},
                {"scale", scale},
                {"oracle_checks", std::move(checks)},
                {"criteria", std::move(criteria)},
                {"table", std::move(table)},
                {"passed", all}};
}

}  // namespace qnr::acceptance
