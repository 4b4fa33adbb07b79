#ifndef QNR_C_RADIUS_HPP
#define QNR_C_RADIUS_HPP

// C-numerical radius r_C(A) = sup_U |tr(C U^* A U)| over unitaries U,
// computed by multi-start ascent on the unitary group.

#include "qnr/linalg.hpp"
#include "qnr/optimize.hpp"
#include "qnr/radius.hpp"

#include <vector>

namespace qnr {

/// Defaults for c_radius: 64 restarts, otherwise as OptimizerConfig.
OptimizerConfig c_radius_config(std::uint64_t seed = 0);

RadiusEstimate c_radius(const Matrix& a, const Matrix& c, const OptimizerConfig& cfg = c_radius_config());

/// tr(C U_i^* A U_i) for `count` sampled Haar unitaries U_i.
std::vector<Complex> c_range_sample(const Matrix& a, const Matrix& c, std::size_t count, std::uint64_t seed);

struct NormCertificate {
    bool is_norm = false;
    bool is_scalar_c = false;
    Complex trace_c{};
};

/// r_C is a norm iff C is non-scalar with non-zero trace. Both tests are
/// relative to max(1, |C|_2).
NormCertificate norm_certificate(const Matrix& c, double tol = 1e-9);

namespace detail {

Complex c_trace(const Matrix& a, const Matrix& c, const Matrix& u);

/// Skew-Hermitian Riemannian gradient Omega of |tr(C U^* A U)| for steps U exp(t Omega).
Matrix c_gradient(const Matrix& a, const Matrix& c, const Matrix& u);

Matrix skew_exp(const Matrix& omega);

}  // namespace detail

}  // namespace qnr

#endif  // QNR_C_RADIUS_HPP
