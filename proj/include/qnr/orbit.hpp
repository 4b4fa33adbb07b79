#ifndef QNR_ORBIT_HPP
#define QNR_ORBIT_HPP

// The saturated unitary orbit SU(C_q) = { lambda U^* C_q U : |lambda| = 1, U unitary }
// of C_q = q E_11 + p E_12. Its members are exactly the rank-one matrices with
// |tr| = q and Hilbert-Schmidt norm 1.

#include "qnr/json_io.hpp"
#include "qnr/linalg.hpp"

#include <optional>
#include <vector>

namespace qnr {

struct OrbitElement {
    /// phase * (x (x) y^*)
    Matrix matrix;
    Vector x;
    /// Unit vector with <x, y> = q.
    Vector y;
    Complex phase{1.0};
    /// matrix = canonical_phase * U^* C_q U with U = canonical_unitary.
    Matrix canonical_unitary;
    Complex canonical_phase{1.0};
};

Matrix build_cq(const QParameter& q, std::size_t n);

/// Builds theta * x (x) (q x + p w)^*; w is ignored when q = 1.
OrbitElement make_orbit_element(const QParameter& q, const Vector& x, const Vector& w, Complex theta);

struct OrbitMembership {
    bool in_orbit = false;
    std::size_t rank = 0;
    double abs_trace = 0.0;
    double hs_norm = 0.0;
};

OrbitMembership is_in_orbit(const Matrix& a, const QParameter& q, double tol = 1e-8);

struct CanonicalForm {
    Complex theta{1.0};
    /// a = theta * u^* C_q u
    Matrix u;
};

/// Requires is_in_orbit(a, q, 1e-6); throws DomainError otherwise.
CanonicalForm canonicalize(const Matrix& a, const QParameter& q);

/// Factors an orbit member into an OrbitElement (phase = canonical phase).
OrbitElement orbit_element_from_matrix(const Matrix& a, const QParameter& q);

struct RankOneSplit {
    OrbitElement first;
    OrbitElement second;
    /// The (xi, eta) coefficients of R in its reduced form xi E_11 + eta E_12.
    Complex xi{};
    Complex eta{};
};

/// Splits a rank-one R with |R| < min(2q, 2p) into two orbit members using
/// the one-parameter family A_t = z1 E11 + z2 E12 + r e^{it} E1k. The column
/// index k is one-based (k >= 3, k <= n). p_prime defaults to the midpoint
/// of [|eta|/2, p).
RankOneSplit decompose_rank_one(const Matrix& r, const QParameter& q, double t, std::size_t column,
                                std::optional<double> p_prime = std::nullopt);

/// Rank-one matrices A with R - A also rank one, for a rank-two R.
std::vector<Matrix> rank_one_split_sample(const Matrix& r, std::size_t count, std::uint64_t seed);

/// Singular values of the stacked real vectorizations [Re vec; Im vec].
RealVector real_span_singular_values(const std::vector<Matrix>& mats);

Json to_json(const OrbitElement& e);
OrbitElement orbit_element_from_json(const Json& j);

}  // namespace qnr

#endif  // QNR_ORBIT_HPP
