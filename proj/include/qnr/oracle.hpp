#ifndef QNR_ORACLE_HPP
#define QNR_ORACLE_HPP

// Exhaustive grid references for 2 x 2 matrices. Slow and deliberately
// independent of the ascent solvers: the objectives are evaluated with
// hand-written 2 x 2 arithmetic.

#include "qnr/linalg.hpp"

namespace qnr::oracle {

/// Points per angular parameter; must be at least 8.
struct GridSpec {
    std::size_t density = 200;

    void validate() const;
};

struct OracleValue {
    double value = 0.0;
    /// Lipschitz bound on the gap to the true maximum:
    /// L * (sum of grid spacings) / 2.
    double error_bound = 0.0;
};

/// max over x = (cos a, e^{i phi} sin a) of q|<Ax, x>| + p|<Ax, x_perp>|.
/// The grids in a and phi nest when the density doubles.
OracleValue brute_q_radius_2x2(const Matrix& a, const QParameter& q, const GridSpec& grid = {});

/// max |tr(C U^* A U)| over U = [[e^{ib} cos t, e^{ig} sin t], [-e^{-ig} sin t, e^{-ib} cos t]];
/// the global phase of U does not affect the objective.
OracleValue brute_c_radius_2x2(const Matrix& a, const Matrix& c, const GridSpec& grid = {});

}  // namespace qnr::oracle

#endif  // QNR_ORACLE_HPP
