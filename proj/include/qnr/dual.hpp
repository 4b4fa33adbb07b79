#ifndef QNR_DUAL_HPP
#define QNR_DUAL_HPP

// Two-sided estimation of the dual norm
//
//   r_q^*(T) = min { sum |c_i| : T = sum c_i X_i, X_i in SU(C_q) }
//            = sup { |tr(T A)| / r_q(A) : A != 0 }.
//
// The upper bound comes from an explicit atomic decomposition built by
// fully-corrective column generation; its linear-maximization oracle is a
// q-radius solve, whose witness pair (x, y) yields the atom x (x) y^*
// because tr((x (x) y^*) A) = <Ax, y>. The lower bound is the pairing
// quotient at the best dual iterate found.

#include "qnr/json_io.hpp"
#include "qnr/optimize.hpp"
#include "qnr/orbit.hpp"

#include <vector>

namespace qnr {

struct DualOptions {
    double gap_tol = 0.02;
    double feas_tol = 1e-8;
    std::size_t max_iterations = 150;
    /// Matrices larger than max_dim are rejected unless allow_large is set.
    std::size_t max_dim = 4;
    bool allow_large = false;
    /// Ascent steps on the pairing quotient when column generation stops short of gap_tol.
    std::size_t polish_steps = 20;
    /// Optional known decomposition T = sum c_i X_i used as a starting point.
    std::vector<Matrix> warm_atoms;
    std::vector<Complex> warm_coefficients;
};

struct DualEstimate {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<OrbitElement> atoms;
    std::vector<Complex> coefficients;
    double feasibility_residual = 0.0;
    /// A with r_q(A) = 1 (as computed) and |tr(T A)| = lower.
    Matrix pairing_witness;
    bool converged = false;
    std::size_t iterations = 0;

    /// (upper - lower) / upper, zero when upper is zero.
    double gap() const;
};

DualEstimate dual_radius(const Matrix& t, const QParameter& q, const OptimizerConfig& cfg = {},
                         const DualOptions& opts = {});

struct DualityCheck {
    bool holds = false;
    double pairing = 0.0;
    double dual_upper = 0.0;
    double radius = 0.0;
};

/// |tr(T A)| <= r_q^*(T).upper * r_q(A) * (1 + 1e-3).
DualityCheck duality_check(const Matrix& t, const Matrix& a, const QParameter& q, const OptimizerConfig& cfg = {},
                           const DualOptions& opts = {});

struct SandwichReport {
    double trace_norm = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double beta = 0.0;
    double gap = 0.0;
    /// |T|_1 <= upper * (1 + tol): sound side, upper bounds the true value.
    bool trace_below_upper = false;
    /// lower <= beta |T|_1 (1 + tol): sound side, lower is below the true value.
    bool lower_below_beta = false;
    /// |T|_1 <= lower (1 + s) and upper <= beta |T|_1 (1 + s) with s = gap / (1 - gap).
    bool within_gap = false;

    bool holds() const { return trace_below_upper && lower_below_beta && within_gap; }
};

SandwichReport dual_trace_sandwich(const Matrix& t, const QParameter& q, const OptimizerConfig& cfg = {},
                                   const DualOptions& opts = {}, double tol = 1e-6);

Json to_json(const DualEstimate& d);

namespace detail {

struct AtomicSolution {
    Vector coefficients;
    /// Dual vector with |a_i^* lambda| <= 1 (approximately) on the atoms.
    Vector lambda;
    double objective = 0.0;
    double residual = 0.0;
};

/// min sum |c_i| subject to atoms * c = target, by iteratively reweighted
/// least squares with a decreasing smoothing parameter. Columns of `atoms`
/// are vectorized atoms.
AtomicSolution min_l1_combination(const Matrix& atoms, const Vector& target);

/// Carathéodory reduction: rewrites sum c_i a_i with at most 2N atoms (N =
/// rows of `atoms`) without increasing sum |c_i|. Returns kept column indices;
/// `coefficients` is updated in place to the kept entries.
std::vector<std::size_t> caratheodory_reduce(const Matrix& atoms, Vector& coefficients);

}  // namespace detail

}  // namespace qnr

#endif  // QNR_DUAL_HPP
