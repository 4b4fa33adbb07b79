#ifndef QNR_RADIUS_HPP
#define QNR_RADIUS_HPP

// Classical and q-numerical radius.
//
//   r(A)   = sup { |<Ax, x>| : |x| = 1 }
//   r_q(A) = sup { |<Ax, y>| : |x| = |y| = 1, <x, y> = q }
//
// Every value returned here is the best objective found by multi-start
// ascent and therefore a lower bound on the true supremum.

#include "qnr/linalg.hpp"
#include "qnr/optimize.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qnr {

struct RadiusEstimate {
    double value = 0.0;
    Vector witness_x;
    std::optional<Vector> witness_y;
    std::optional<Matrix> witness_unitary;
    std::size_t restarts_used = 0;
    bool converged = false;
    double best_gradient_norm = 0.0;
};

RadiusEstimate numerical_radius(const Matrix& a, const OptimizerConfig& cfg = {},
                                std::span<const Vector> extra_starts = {});

/// Maximizes the single-sphere objective q|<Ax,x>| + p|Ax - <Ax,x>x|.
/// extra_starts are additional ascent starting points (e.g. a classical
/// witness); they run after the seeded restarts.
RadiusEstimate q_radius_reduced(const Matrix& a, const QParameter& q, const OptimizerConfig& cfg = {},
                                std::span<const Vector> extra_starts = {});

/// Maximizes |<Ax, y>| jointly over x, z (orthonormal pair) and the phase
/// theta, with y = q x + p e^{i theta} z. Independent of q_radius_reduced.
RadiusEstimate q_radius_direct(const Matrix& a, const QParameter& q, const OptimizerConfig& cfg = {});

/// Points <Ax, y> for randomly sampled admissible pairs (x, y).
std::vector<Complex> q_range_sample(const Matrix& a, const QParameter& q, std::size_t count,
                                    std::uint64_t seed);

/// Constant beta(q) with |A| <= beta r_q(A).
double beta_constant(const QParameter& q);

struct InequalityCheck {
    std::string name;
    bool holds = false;
    /// Right-hand side minus left-hand side, tolerance included.
    double slack = 0.0;
};

/// Upper-side inequalities (a computed lower bound below an exact value) only
/// need rounding slack; lower-side ones (an exact value below a multiple of a
/// computed lower bound) carry the optimizer's relative slack.
struct EquivalenceTolerance {
    double rounding = 1e-6;
    double optimizer = 1e-3;
};

struct EquivalenceReport {
    double r = 0.0;
    double r_q = 0.0;
    double op_norm = 0.0;
    double beta = 0.0;
    bool converged = false;
    std::vector<InequalityCheck> checks;

    bool all_hold() const;
};

EquivalenceReport check_equivalence(const Matrix& a, const QParameter& q, const OptimizerConfig& cfg = {},
                                    const EquivalenceTolerance& tol = {});

namespace detail {

/// |<Ax, x>|
double classical_objective(const Matrix& a, const Vector& x);
/// Euclidean gradient of classical_objective (before projection onto the sphere).
Vector classical_gradient(const Matrix& a, const Vector& x);

/// q|<Ax,x>| + p|Ax - <Ax,x>x|
double reduced_objective(const Matrix& a, const QParameter& q, const Vector& x);
/// Euclidean gradient of reduced_objective; the orthogonal-term gradient is
/// taken as zero where Ax - <Ax,x>x vanishes.
Vector reduced_gradient(const Matrix& a, const QParameter& q, const Vector& x);

/// Admissible y attaining the reduced objective at unit x.
Vector reduced_witness_y(const Matrix& a, const QParameter& q, const Vector& x);

}  // namespace detail

}  // namespace qnr

#endif  // QNR_RADIUS_HPP
