#ifndef QNR_ISOMETRY_HPP
#define QNR_ISOMETRY_HPP

// Isometries of the q-numerical radius, phi(A) = S0 + mu U^* A^dag U, and
// their recovery from a black-box map.

#include "qnr/json_io.hpp"
#include "qnr/linalg.hpp"
#include "qnr/optimize.hpp"

#include <array>
#include <functional>
#include <vector>

namespace qnr {

struct IsometryDescriptor {
    Matrix s0;
    Complex mu{1.0};
    Matrix u;
    DaggerMode mode = DaggerMode::identity;

    /// Throws ValidationError unless u is unitary (1e-10) and |mu| = 1 (1e-12).
    void validate() const;
};

/// A deterministic, size-preserving map on dim x dim matrices.
struct BlackBoxMap {
    std::size_t dim = 0;
    std::function<Matrix(const Matrix&)> eval;
    /// Set when eval must not be called from several threads at once.
    bool single_threaded = false;
};

Matrix apply(const IsometryDescriptor& d, const Matrix& a);

/// Descriptor of A |-> outer(inner(A)).
IsometryDescriptor compose(const IsometryDescriptor& outer, const IsometryDescriptor& inner);

BlackBoxMap as_map(const IsometryDescriptor& d);

IsometryDescriptor random_descriptor(std::size_t n, DaggerMode mode, Rng& rng);

struct IsometryTrial {
    double radius_before = 0.0;  // r_q(A - B)
    double radius_after = 0.0;   // r_q(f(A) - f(B))
    double defect = 0.0;
    Matrix a;
    Matrix b;
};

struct IsometryReport {
    double max_defect = 0.0;
    std::size_t worst_trial = 0;
    bool passed = false;
    bool converged = false;
    std::vector<IsometryTrial> trials;
};

inline constexpr double kIsometryDefectTol = 1e-3;

IsometryReport verify_isometry(const BlackBoxMap& f, const QParameter& q, std::size_t trials, std::uint64_t seed,
                               const OptimizerConfig& cfg = {});

struct RecoveryResult {
    IsometryDescriptor descriptor;
    /// Largest relative HS residual of the validation matrices.
    double residual = 0.0;
    std::size_t probes = 0;
};

/// Reconstructs (S0, mu, U, mode). Uses the probes 0, I, every E_ij, iE_11,
/// E_12 E_22 and E_22 E_12, then validates on 20 random matrices. Throws
/// DomainError ("not of the form S0 + mu U^* A^dag U") when a structure test fails.
RecoveryResult recover_parameters(const BlackBoxMap& f, const QParameter& q, std::size_t n);

struct DaggerInvarianceReport {
    /// r_q of A^dag for identity, transpose, adjoint, conjugate.
    std::array<double, 4> values{};
    double spread = 0.0;
    bool holds = false;
};

inline constexpr double kDaggerSpreadTol = 1e-4;

DaggerInvarianceReport dagger_invariance_check(const Matrix& a, const QParameter& q, const OptimizerConfig& cfg = {});

Json to_json(const IsometryDescriptor& d);
IsometryDescriptor descriptor_from_json(const Json& j);

}  // namespace qnr

#endif  // QNR_ISOMETRY_HPP
