#include "qnr/isometry.hpp"

#include "qnr/parallel.hpp"
#include "qnr/radius.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qnr {

void IsometryDescriptor::validate() const {
    require_square(u, "isometry descriptor u");
    require_square(s0, "isometry descriptor s0");
    require_same_size(s0, u, "isometry descriptor");
    const auto n = u.rows();
    const double defect = schatten_norm(u.adjoint() * u - Matrix::Identity(n, n), SchattenOrder::operator_norm);
    if (defect > 1e-10) throw ValidationError("isometry descriptor: u is not unitary");
    if (std::abs(std::abs(mu) - 1.0) > 1e-12) throw ValidationError("isometry descriptor: |mu| != 1");
}

Matrix apply(const IsometryDescriptor& d, const Matrix& a) {
    require_same_size(d.s0, a, "apply");
    return d.s0 + d.mu * (d.u.adjoint() * dagger(a, d.mode) * d.u);
}

IsometryDescriptor compose(const IsometryDescriptor& outer, const IsometryDescriptor& inner) {
    require_same_size(outer.u, inner.u, "compose");
    // (mu1 U1^* B U1)^dag2 = mu1' V^* B^dag2 V with V = U1 or conj(U1).
    const bool conj_u = outer.mode == DaggerMode::transpose || outer.mode == DaggerMode::conjugate;
    const Matrix v = conj_u ? Matrix(inner.u.conjugate()) : inner.u;
    const Complex mu1 = is_conjugate_linear(outer.mode) ? std::conj(inner.mu) : inner.mu;

    IsometryDescriptor out;
    out.s0 = outer.s0 + outer.mu * (outer.u.adjoint() * dagger(inner.s0, outer.mode) * outer.u);
    out.mu = outer.mu * mu1;
    out.u = v * outer.u;
    out.mode = compose(outer.mode, inner.mode);
    return out;
}

BlackBoxMap as_map(const IsometryDescriptor& d) {
    return {static_cast<std::size_t>(d.u.rows()), [d](const Matrix& a) { return qnr::apply(d, a); }, false};
}

IsometryDescriptor random_descriptor(std::size_t n, DaggerMode mode, Rng& rng) {
    IsometryDescriptor d;
    d.s0 = rng.dense(n);
    d.mu = rng.unit_phase();
    d.u = rng.unitary(n);
    d.mode = mode;
    return d;
}

IsometryReport verify_isometry(const BlackBoxMap& f, const QParameter& q, std::size_t trials, std::uint64_t seed,
                               const OptimizerConfig& cfg) {
    if (trials < 1) throw ValidationError("verify_isometry: trials must be >= 1");
    if (!f.eval) throw ValidationError("verify_isometry: empty map");
    cfg.validate();

    IsometryReport rep;
    rep.trials.resize(trials);
    Rng rng(seed);
    for (auto& t : rep.trials) {
        t.a = rng.dense(f.dim);
        t.b = rng.dense(f.dim);
    }

    std::vector<Matrix> fa(trials), fb(trials);
    auto evaluate = [&](std::size_t i) {
        fa[i] = f.eval(rep.trials[i].a);
        fb[i] = f.eval(rep.trials[i].b);
        require_same_size(fa[i], rep.trials[i].a, "verify_isometry: map output");
        require_same_size(fb[i], rep.trials[i].b, "verify_isometry: map output");
    };
    if (f.single_threaded) {
        for (std::size_t i = 0; i < trials; ++i) evaluate(i);
    }

    std::vector<char> converged(trials, 0);
    parallel::for_each_index(trials, [&](std::size_t i) {
        if (!f.single_threaded) evaluate(i);
        IsometryTrial& t = rep.trials[i];
        OptimizerConfig c = cfg;
        c.seed = restart_seed(cfg.seed, i);
        const RadiusEstimate before = q_radius_reduced(t.a - t.b, q, c);
        const RadiusEstimate after = q_radius_reduced(fa[i] - fb[i], q, c);
        t.radius_before = before.value;
        t.radius_after = after.value;
        t.defect = std::abs(after.value - before.value) / std::max(before.value, 1e-12);
        converged[i] = before.converged && after.converged;
    });

    rep.converged = true;
    for (std::size_t i = 0; i < trials; ++i) {
        rep.converged = rep.converged && converged[i];
        if (rep.trials[i].defect > rep.max_defect) {
            rep.max_defect = rep.trials[i].defect;
            rep.worst_trial = i;
        }
    }
    rep.passed = rep.max_defect <= kIsometryDefectTol;
    return rep;
}

namespace {

[[noreturn]] void not_isometry_form(const std::string& detail) {
    throw DomainError("recover_parameters: map is not of the form S0 + mu U^* A^dag U (" + detail + ")");
}

Vector leading_eigenvector(const Matrix& h) {
    const Matrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    return es.eigenvectors().col(sym.rows() - 1);
}

Matrix fix_largest_entry_phase(const Matrix& u) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        const double a = std::abs(u.data()[k]);
        if (a > best_abs * (1.0 + 1e-9)) {
            best_abs = a;
            best = k;
        }
    }
    return std::conj(phase_of(u.data()[best])) * u;
}

}  // namespace

RecoveryResult recover_parameters(const BlackBoxMap& f, [[maybe_unused]] const QParameter& q, std::size_t n) {
    if (!f.eval) throw ValidationError("recover_parameters: empty map");
    if (n < 2) throw DimensionError("recover_parameters: n must be >= 2");
    if (f.dim != 0 && f.dim != n) throw DimensionError("recover_parameters: map size differs from n");
    constexpr double kTol = 1e-6;

    RecoveryResult out;
    auto probe = [&](const Matrix& a) {
        ++out.probes;
        Matrix v = f.eval(a);
        require_same_size(v, a, "recover_parameters: map output");
        return v;
    };

    const Matrix s0 = probe(Matrix::Zero(n, n));
    const Matrix psi_id = probe(Matrix::Identity(n, n)) - s0;
    const Complex mu = psi_id.trace() / static_cast<double>(n);
    const double scalar_defect =
        schatten_norm(psi_id - mu * Matrix::Identity(n, n), SchattenOrder::hilbert_schmidt);
    if (scalar_defect > kTol) {
        std::ostringstream msg;
        msg << "psi(I) is not scalar, |psi(I) - mu I|_2 = " << scalar_defect;
        not_isometry_form(msg.str());
    }
    if (std::abs(std::abs(mu) - 1.0) > kTol) {
        std::ostringstream msg;
        msg << "|mu| = " << std::abs(mu) << " is not 1";
        not_isometry_form(msg.str());
    }
    const Complex mu_unit = phase_of(mu);
    auto chi = [&](const Matrix& a) { return Matrix(std::conj(mu_unit) * (probe(a) - s0)); };

    std::vector<Matrix> units(n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) units[i + n * j] = chi(matrix_unit(n, i, j));
    auto unit = [&](std::size_t i, std::size_t j) -> const Matrix& { return units[i + n * j]; };

    const Matrix& e11 = unit(0, 0);
    const double e11_norm = e11.norm();
    if (e11_norm < kTol) not_isometry_form("chi(E11) vanishes");
    const Matrix i_e11 = chi(kI * matrix_unit(n, 0, 0));
    const double lin = (i_e11 - kI * e11).norm() / e11_norm;
    const double anti_lin = (i_e11 + kI * e11).norm() / e11_norm;
    if ((lin <= kTol) == (anti_lin <= kTol)) {
        std::ostringstream msg;
        msg << "ambiguous linearity, linear defect " << lin << ", conjugate-linear defect " << anti_lin;
        not_isometry_form(msg.str());
    }
    const bool conj_linear = anti_lin <= kTol;

    const Matrix e12 = matrix_unit(n, 0, 1);
    const Matrix e22 = matrix_unit(n, 1, 1);
    const Matrix p1 = chi(e12 * e22);
    const Matrix p2 = chi(e22 * e12);
    const double scale = std::max(unit(0, 1).norm(), kTol);
    const double mult = std::max((p1 - unit(0, 1) * unit(1, 1)).norm(), (p2 - unit(1, 1) * unit(0, 1)).norm()) / scale;
    const double anti = std::max((p1 - unit(1, 1) * unit(0, 1)).norm(), (p2 - unit(0, 1) * unit(1, 1)).norm()) / scale;
    if ((mult <= kTol) == (anti <= kTol)) {
        std::ostringstream msg;
        msg << "ambiguous multiplicativity, multiplicative defect " << mult << ", antimultiplicative defect " << anti;
        not_isometry_form(msg.str());
    }
    const bool anti_mult = anti <= kTol;

    DaggerMode mode = DaggerMode::identity;
    if (!conj_linear && anti_mult) mode = DaggerMode::transpose;
    if (conj_linear && !anti_mult) mode = DaggerMode::conjugate;
    if (conj_linear && anti_mult) mode = DaggerMode::adjoint;

    // chi(E_jj) = v_j v_j^* with v_j = U^* e_j; chi(E_1j) fixes the relative phases.
    Matrix ustar(n, n);
    ustar.col(0) = leading_eigenvector(unit(0, 0));
    for (std::size_t j = 1; j < n; ++j) {
        const Vector vj = leading_eigenvector(unit(j, j));
        const Matrix& c1j = unit(0, j);
        const Vector v1 = ustar.col(0);
        if (anti_mult) {
            const Complex alpha = vj.dot(c1j * v1);
            ustar.col(static_cast<Eigen::Index>(j)) = phase_of(alpha) * vj;
        } else {
            const Complex alpha = v1.dot(c1j * vj);
            ustar.col(static_cast<Eigen::Index>(j)) = std::conj(phase_of(alpha)) * vj;
        }
    }

    out.descriptor.s0 = s0;
    out.descriptor.mu = mu_unit;
    out.descriptor.u = fix_largest_entry_phase(ustar.adjoint());
    out.descriptor.mode = mode;

    Rng rng(0x5a11da7eULL);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = rng.dense(n);
        const Matrix fa = f.eval(a);
        const double res = (qnr::apply(out.descriptor, a) - fa).norm() / std::max(fa.norm(), 1e-12);
        out.residual = std::max(out.residual, res);
    }
    if (!(out.residual <= 1e-8)) {
        std::ostringstream msg;
        msg << "validation residual " << out.residual << " exceeds 1e-8";
        not_isometry_form(msg.str());
    }
    return out;
}

DaggerInvarianceReport dagger_invariance_check(const Matrix& a, const QParameter& q, const OptimizerConfig& cfg) {
    require_square(a, "dagger_invariance_check");
    constexpr std::array<DaggerMode, 4> modes = {DaggerMode::identity, DaggerMode::transpose, DaggerMode::adjoint,
                                                 DaggerMode::conjugate};
    std::array<Matrix, 4> mats;
    for (std::size_t m = 0; m < 4; ++m) mats[m] = dagger(a, modes[m]);

    // Witness transfer: (x, y) for A gives conj(y), y, conj(x) as starts for
    // A^t, A^*, conj(A); each map is its own inverse.
    auto transfer = [&](DaggerMode mode, const Vector& x, const Vector& y) -> Vector {
        switch (mode) {
            case DaggerMode::transpose: return y.conjugate();
            case DaggerMode::adjoint: return y;
            case DaggerMode::conjugate: return x.conjugate();
            case DaggerMode::identity: break;
        }
        return x;
    };

    std::array<RadiusEstimate, 4> est;
    for (std::size_t m = 0; m < 4; ++m) est[m] = q_radius_reduced(mats[m], q, cfg);
    std::size_t best = 0;
    for (std::size_t m = 1; m < 4; ++m)
        if (est[m].value > est[best].value) best = m;
    const Vector xa = transfer(modes[best], est[best].witness_x, *est[best].witness_y);
    const Vector ya = detail::reduced_witness_y(a, q, xa);

    DaggerInvarianceReport rep;
    for (std::size_t m = 0; m < 4; ++m) {
        const Vector start[] = {transfer(modes[m], xa, ya)};
        rep.values[m] = std::max(est[m].value, q_radius_reduced(mats[m], q, cfg, start).value);
    }
    // Identical inputs get identical values.
    for (std::size_t m = 1; m < 4; ++m)
        for (std::size_t k = 0; k < m; ++k)
            if (mats[m] == mats[k]) rep.values[m] = rep.values[k];

    const auto [lo, hi] = std::minmax_element(rep.values.begin(), rep.values.end());
    rep.spread = (*hi - *lo) / std::max(*hi, 1e-12);
    rep.holds = rep.spread <= kDaggerSpreadTol;
    return rep;
}

Json to_json(const IsometryDescriptor& d) {
    return Json{{"s0", to_json(d.s0)},
                {"mu", complex_to_json(d.mu)},
                {"u", to_json(d.u)},
                {"mode", std::string(to_string(d.mode))}};
}

IsometryDescriptor descriptor_from_json(const Json& j) {
    for (const char* key : {"s0", "mu", "u", "mode"})
        if (!j.contains(key)) throw ValidationError(std::string("isometry descriptor JSON: missing '") + key + "'");
    if (!j.at("mode").is_string()) throw ValidationError("isometry descriptor JSON: mode must be a string");
    IsometryDescriptor d;
    d.s0 = matrix_from_json(j.at("s0"));
    d.mu = complex_from_json(j.at("mu"));
    d.u = matrix_from_json(j.at("u"));
    d.mode = dagger_mode_from_string(j.at("mode").get<std::string>());
    d.validate();
    return d;
}

}  // namespace qnr
