#include "qnr/dual.hpp"

#include "qnr/radius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qnr {

double DualEstimate::gap() const { return upper > 0.0 ? (upper - lower) / upper : 0.0; }

namespace detail {

AtomicSolution min_l1_combination(const Matrix& atoms, const Vector& target) {
    const auto rows = atoms.rows();
    const auto m = atoms.cols();
    AtomicSolution sol;
    sol.coefficients = Vector::Zero(m);
    sol.lambda = Vector::Zero(rows);
    const double scale = target.norm();
    if (scale == 0.0 || m == 0) {
        sol.residual = scale;
        return sol;
    }

    constexpr std::size_t kMaxIter = 400;
    constexpr double kDecay = 0.8;
    const double eps_min = 1e-12 * scale;
    double eps = scale;
    RealVector weights = RealVector::Ones(m);
    double previous = std::numeric_limits<double>::infinity();

    for (std::size_t it = 0; it < kMaxIter; ++it) {
        // Weighted least squares: min sum |c_i|^2 / w_i subject to atoms c = target.
        Matrix gram = atoms * weights.asDiagonal() * atoms.adjoint();
        const double ridge = 1e-14 * std::max(gram.trace().real() / static_cast<double>(rows), 1e-300);
        gram.diagonal().array() += ridge;
        const Vector lambda = gram.ldlt().solve(target);
        const Vector c = weights.cast<Complex>().cwiseProduct(atoms.adjoint() * lambda);
        const double objective = c.cwiseAbs().sum();

        sol.coefficients = c;
        sol.lambda = lambda;
        sol.objective = objective;

        weights = (c.cwiseAbs2().array() + eps * eps).sqrt().matrix();
        if (eps <= eps_min && std::abs(previous - objective) <= 1e-13 * objective) break;
        previous = objective;
        eps = std::max(eps * kDecay, eps_min);
    }
    sol.residual = (atoms * sol.coefficients - target).norm();
    return sol;
}

std::vector<std::size_t> caratheodory_reduce(const Matrix& atoms, Vector& coefficients) {
    const auto rows = atoms.rows();
    const double total = coefficients.cwiseAbs().sum();
    std::vector<std::size_t> keep;
    std::vector<double> mass;
    std::vector<Complex> phase;
    for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
        const double a = std::abs(coefficients(i));
        if (a > 1e-15 * total) {
            keep.push_back(static_cast<std::size_t>(i));
            mass.push_back(a);
            phase.push_back(coefficients(i) / a);
        }
    }

    const auto real_dim = static_cast<std::size_t>(2 * rows);
    while (keep.size() > real_dim) {
        const auto m = static_cast<Eigen::Index>(keep.size());
        Eigen::MatrixXd y(2 * rows, m);
        for (Eigen::Index k = 0; k < m; ++k) {
            const Vector col = phase[k] * atoms.col(static_cast<Eigen::Index>(keep[k]));
            y.col(k).head(rows) = col.real();
            y.col(k).tail(rows) = col.imag();
        }
        // m > 2N columns in R^{2N} are linearly dependent.
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeFullV);
        Eigen::VectorXd mu = svd.matrixV().col(m - 1);
        if (mu.sum() < 0.0) mu = -mu;
        double step = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < m; ++k)
            if (mu(k) > 1e-14) step = std::min(step, mass[k] / mu(k));
        std::vector<std::size_t> next_keep;
        std::vector<double> next_mass;
        std::vector<Complex> next_phase;
        for (Eigen::Index k = 0; k < m; ++k) {
            const double s = mass[k] - step * mu(k);
            if (s > 1e-15 * total) {
                next_keep.push_back(keep[k]);
                next_mass.push_back(s);
                next_phase.push_back(phase[k]);
            }
        }
        if (next_keep.size() >= keep.size()) {
            // Degenerate null vector; drop the smallest coefficient instead.
            const auto smallest = std::min_element(mass.begin(), mass.end()) - mass.begin();
            next_keep = keep;
            next_mass = mass;
            next_phase = phase;
            next_keep.erase(next_keep.begin() + smallest);
            next_mass.erase(next_mass.begin() + smallest);
            next_phase.erase(next_phase.begin() + smallest);
        }
        keep = std::move(next_keep);
        mass = std::move(next_mass);
        phase = std::move(next_phase);
    }
    Vector reduced(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) reduced(static_cast<Eigen::Index>(k)) = mass[k] * phase[k];
    coefficients = std::move(reduced);
    return keep;
}

}  // namespace detail

namespace {

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix stack(const std::vector<Matrix>& mats) {
    const auto size = mats.front().size();
    Matrix out(size, static_cast<Eigen::Index>(mats.size()));
    for (std::size_t i = 0; i < mats.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = vec(mats[i]);
    return out;
}

struct Decomposition {
    std::vector<Matrix> atoms;
    Vector coefficients;
    double objective = std::numeric_limits<double>::infinity();
};

struct DualCandidate {
    double ratio = 0.0;
    Matrix witness;          // normalized so that its computed r_q is 1
    Matrix atom_of_witness;  // the orbit element attaining r_q(witness)
};

DualCandidate evaluate_candidate(const Matrix& t, const Matrix& g, const QParameter& q, const OptimizerConfig& cfg) {
    DualCandidate cand;
    const RadiusEstimate est = q_radius_reduced(g, q, cfg);
    cand.atom_of_witness = dyad(est.witness_x, *est.witness_y);
    if (est.value <= 0.0) return cand;
    cand.witness = g / est.value;
    cand.ratio = std::abs(pairing(t, cand.witness));
    return cand;
}

// Danskin ascent on |tr(T G)| / r_q(G) from g.
DualCandidate polish_lower(const Matrix& t, DualCandidate best, const QParameter& q, const OptimizerConfig& cfg,
                           std::size_t steps) {
    double step = 0.1;
    for (std::size_t s = 0; s < steps; ++s) {
        const Matrix& g = best.witness;  // r_q(g) = 1
        const Complex num_phase = phase_of(pairing(t, g));
        const Complex atom_phase = phase_of(pairing(best.atom_of_witness, g));
        const Matrix direction =
            num_phase * t.adjoint() - best.ratio * atom_phase * best.atom_of_witness.adjoint();
        const double dn = direction.norm();
        if (dn <= 1e-14) break;
        bool improved = false;
        for (int tries = 0; tries < 6; ++tries) {
            const Matrix trial = g + (step / dn) * direction;
            DualCandidate cand = evaluate_candidate(t, trial, q, cfg);
            if (cand.ratio > best.ratio) {
                best = std::move(cand);
                improved = true;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
    }
    return best;
}

}  // namespace

DualEstimate dual_radius(const Matrix& t, const QParameter& q, const OptimizerConfig& cfg, const DualOptions& opts) {
    require_square(t, "dual_radius");
    require_finite(t, "dual_radius");
    cfg.validate();
    if (!(opts.gap_tol > 0.0)) throw ValidationError("dual_radius: gap_tol must be positive");
    const auto n = static_cast<std::size_t>(t.rows());
    if (n < 2) throw DimensionError("dual_radius: n must be >= 2");
    if (n > opts.max_dim && !opts.allow_large) {
        std::ostringstream msg;
        msg << "dual_radius: n = " << n << " exceeds the default cap " << opts.max_dim
            << " (set allow_large to override)";
        throw DimensionError(msg.str());
    }
    if (opts.warm_atoms.size() != opts.warm_coefficients.size())
        throw ValidationError("dual_radius: warm atoms and coefficients differ in length");

    DualEstimate out;
    const double tnorm = t.norm();
    if (tnorm == 0.0) {
        out.converged = true;
        out.pairing_witness = Matrix::Zero(n, n);
        return out;
    }
    const Vector target = vec(t);
    const double feas_abs = opts.feas_tol * std::max(1.0, tnorm);

    std::vector<Matrix> atoms = opts.warm_atoms;
    Decomposition best;
    if (!opts.warm_atoms.empty()) {
        Vector c(static_cast<Eigen::Index>(opts.warm_coefficients.size()));
        for (std::size_t i = 0; i < opts.warm_coefficients.size(); ++i) c(static_cast<Eigen::Index>(i)) = opts.warm_coefficients[i];
        const double res = (stack(atoms) * c - target).norm();
        if (res <= feas_abs) {
            best.atoms = atoms;
            best.coefficients = c;
            best.objective = c.cwiseAbs().sum();
        }
    }
    {
        Rng rng(cfg.seed ^ 0x5eedd0a1ULL);
        const std::size_t initial = 2 * n * n;
        for (std::size_t i = 0; i < initial; ++i) {
            const Vector x = rng.unit_vector(n);
            const Vector w = rng.unit_vector_orthogonal_to(x);
            atoms.push_back(dyad(x, q.q() * x + q.p() * w));
        }
    }

    // T^* pairs with T as |T|_2^2 and is the natural first dual candidate.
    DualCandidate lower = evaluate_candidate(t, t.adjoint(), q, cfg);
    atoms.push_back(lower.atom_of_witness);

    std::size_t it = 0;
    for (; it < opts.max_iterations; ++it) {
        const Matrix stacked = stack(atoms);
        const detail::AtomicSolution sol = detail::min_l1_combination(stacked, target);
        if (sol.residual <= feas_abs && sol.objective < best.objective) {
            best.atoms = atoms;
            best.coefficients = sol.coefficients;
            best.objective = sol.objective;
        }
        const Matrix lambda = Eigen::Map<const Matrix>(sol.lambda.data(), n, n);
        DualCandidate cand = evaluate_candidate(t, lambda.adjoint(), q, cfg);
        atoms.push_back(cand.atom_of_witness);
        if (cand.ratio > lower.ratio) lower = std::move(cand);
        if (best.objective - lower.ratio <= opts.gap_tol * best.objective) {
            out.converged = true;
            ++it;
            break;
        }
    }
    if (!out.converged && opts.polish_steps > 0) {
        lower = polish_lower(t, std::move(lower), q, cfg, opts.polish_steps);
        out.converged = best.objective - lower.ratio <= opts.gap_tol * best.objective;
    }
    out.iterations = it;

    // Prune to at most 2n^2 atoms, then restore feasibility on the support.
    Vector coeffs = best.coefficients;
    const Matrix all = stack(best.atoms);
    const std::vector<std::size_t> keep = detail::caratheodory_reduce(all, coeffs);
    Matrix support(all.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) support.col(static_cast<Eigen::Index>(k)) = all.col(static_cast<Eigen::Index>(keep[k]));
    const Vector residual = target - support * coeffs;
    coeffs += support.completeOrthogonalDecomposition().solve(residual);

    out.upper = coeffs.cwiseAbs().sum();
    out.feasibility_residual = (support * coeffs - target).norm();
    out.lower = lower.ratio;
    out.pairing_witness = lower.witness;
    out.converged = out.converged && out.upper - out.lower <= opts.gap_tol * out.upper;
    for (std::size_t k = 0; k < keep.size(); ++k) {
        out.atoms.push_back(orbit_element_from_matrix(best.atoms[keep[k]], q));
        out.coefficients.push_back(coeffs(static_cast<Eigen::Index>(k)));
    }
    return out;
}

DualityCheck duality_check(const Matrix& t, const Matrix& a, const QParameter& q, const OptimizerConfig& cfg,
                           const DualOptions& opts) {
    require_same_size(t, a, "duality_check");
    DualityCheck chk;
    chk.pairing = std::abs(pairing(t, a));
    chk.dual_upper = dual_radius(t, q, cfg, opts).upper;
    chk.radius = q_radius_reduced(a, q, cfg).value;
    chk.holds = chk.pairing <= chk.dual_upper * chk.radius * (1.0 + 1e-3);
    return chk;
}

SandwichReport dual_trace_sandwich(const Matrix& t, const QParameter& q, const OptimizerConfig& cfg,
                                   const DualOptions& opts, double tol) {
    const DualEstimate d = dual_radius(t, q, cfg, opts);
    SandwichReport rep;
    rep.trace_norm = schatten_norm(t, SchattenOrder::trace);
    rep.lower = d.lower;
    rep.upper = d.upper;
    rep.beta = beta_constant(q);
    rep.gap = d.gap();
    const double abs_tol = tol * std::max(1.0, rep.trace_norm);
    rep.trace_below_upper = rep.trace_norm <= rep.upper * (1.0 + tol) + abs_tol;
    rep.lower_below_beta = rep.lower <= rep.beta * rep.trace_norm * (1.0 + tol) + abs_tol;
    const double g = std::clamp(rep.gap, 0.0, 0.5);
    const double slack = g / (1.0 - g) + tol;
    rep.within_gap = rep.trace_norm <= rep.lower * (1.0 + slack) + abs_tol &&
                     rep.upper <= rep.beta * rep.trace_norm * (1.0 + slack) + abs_tol;
    return rep;
}

Json to_json(const DualEstimate& d) {
    Json atoms = Json::array();
    for (const auto& a : d.atoms) atoms.push_back(to_json(a));
    Json coeffs = Json::array();
    for (const auto& c : d.coefficients) coeffs.push_back(complex_to_json(c));
    return Json{{"lower", d.lower},
                {"upper", d.upper},
                {"gap", d.gap()},
                {"converged", d.converged},
                {"iterations", d.iterations},
                {"feasibility_residual", d.feasibility_residual},
                {"atoms", std::move(atoms)},
                {"coefficients", std::move(coeffs)},
                {"pairing_witness", to_json(d.pairing_witness)}};
}

}  // namespace qnr
