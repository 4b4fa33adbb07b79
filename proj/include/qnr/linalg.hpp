#ifndef QNR_LINALG_HPP
#define QNR_LINALG_HPP

// Dense complex linear algebra substrate shared by every other module:
// traces, Schatten norms, numerical rank, the four dagger maps, unitary
// completion and seeded random generators.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qnr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes do not fit the operation (non-square, size mismatch, n too small).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Input data violates a stated precondition (non-orthonormal, NaN, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Input lies outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// q in (0, 1] together with p = sqrt(1 - q^2).
class QParameter {
public:
    explicit QParameter(double q);

    double q() const noexcept { return q_; }
    double p() const noexcept { return p_; }

private:
    double q_;
    double p_;
};

enum class DaggerMode { identity, transpose, adjoint, conjugate };

std::string_view to_string(DaggerMode mode) noexcept;
DaggerMode dagger_mode_from_string(std::string_view name);

/// Mode of A -> (A^inner)^outer. The four modes form the Klein four-group.
DaggerMode compose(DaggerMode outer, DaggerMode inner) noexcept;

/// True for the modes that are conjugate-linear (adjoint, conjugate).
bool is_conjugate_linear(DaggerMode mode) noexcept;

/// True for the modes that reverse products (transpose, adjoint).
bool is_antimultiplicative(DaggerMode mode) noexcept;

enum class SchattenOrder { trace, hilbert_schmidt, operator_norm };

std::string_view to_string(SchattenOrder order) noexcept;
SchattenOrder schatten_order_from_string(std::string_view name);

void require_square(const Matrix& a, std::string_view what);
void require_same_size(const Matrix& a, const Matrix& b, std::string_view what);
void require_finite(const Matrix& a, std::string_view what);

Complex trace(const Matrix& a);

/// The trace pairing <C, T> = tr(C T).
Complex pairing(const Matrix& c, const Matrix& t);

/// Singular values in non-increasing order.
RealVector singular_values(const Matrix& a);

double schatten_norm(const Matrix& a, SchattenOrder order);

/// Number of singular values strictly above tol * sigma_max; zero for the zero matrix.
std::size_t numerical_rank(const Matrix& a, double tol = 1e-9);

Matrix dagger(const Matrix& a, DaggerMode mode);

/// n x n matrix unit E_ij with zero-based indices.
Matrix matrix_unit(std::size_t n, std::size_t i, std::size_t j);

/// The dyad x (x) y^* : v |-> <v, y> x.
Matrix dyad(const Vector& x, const Vector& y);

/// <a, b> = b^* a, linear in the first argument.
Complex inner(const Vector& a, const Vector& b);

/// Largest modulus of an entry of V^* V - I.
double gram_defect(std::span<const Vector> vectors);

/// Completes k orthonormal vectors to an n x n unitary U with U e_i = v_i.
/// The inputs are re-orthonormalized by Gram-Schmidt, so columns agree
/// with the inputs to within their Gram defect.
Matrix extend_to_unitary(std::span<const Vector> vectors, double tol = 1e-8);

/// Multiplies U by a unit scalar so that its first entry (column-major)
/// of modulus above threshold becomes real and positive.
Matrix fix_first_entry_phase(const Matrix& u, double threshold = 1e-12);

/// Unit-modulus phase of z, with phase(0) = 1.
Complex phase_of(Complex z) noexcept;

/// Seeded source of the random objects used throughout the library.
/// Complex Gaussians have independent N(0, 1/2) real and imaginary parts.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi);
    double gaussian();
    Complex complex_gaussian();
    Complex unit_phase();

    Vector gaussian_vector(std::size_t n);
    Matrix gaussian_matrix(std::size_t rows, std::size_t cols);

    Vector unit_vector(std::size_t n);
    /// Unit vector orthogonal to x (requires n >= 2).
    Vector unit_vector_orthogonal_to(const Vector& x);
    /// Haar unitary: QR of a Gaussian matrix with R's diagonal made positive.
    Matrix unitary(std::size_t n);
    Matrix rank_k(std::size_t n, std::size_t k);
    Matrix dense(std::size_t n);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

enum class SampleKind { unit_vector, unitary, rank_k, dense };

std::string_view to_string(SampleKind kind) noexcept;
SampleKind sample_kind_from_string(std::string_view name);

/// Deterministic sample for (kind, n, seed, k); vectors are returned as n x 1.
Matrix sample(SampleKind kind, std::size_t n, std::uint64_t seed, std::size_t k = 0);

}  // namespace qnr

#endif  // QNR_LINALG_HPP
