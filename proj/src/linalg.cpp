#include "qnr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace qnr {

QParameter::QParameter(double q) : q_(q), p_(0.0) {
    if (!std::isfinite(q) || !(q > 0.0) || q > 1.0) {
        std::ostringstream msg;
        msg << "q must lie in (0, 1], got " << q;
        throw ValidationError(msg.str());
    }
    p_ = q == 1.0 ? 0.0 : std::sqrt((1.0 - q) * (1.0 + q));
}

std::string_view to_string(DaggerMode mode) noexcept {
    switch (mode) {
    case DaggerMode::identity: return "identity";
    case DaggerMode::transpose: return "transpose";
    case DaggerMode::adjoint: return "adjoint";
    case DaggerMode::conjugate: return "conjugate";
    }
    return "identity";
}

DaggerMode dagger_mode_from_string(std::string_view name) {
    if (name == "identity") return DaggerMode::identity;
    if (name == "transpose") return DaggerMode::transpose;
    if (name == "adjoint") return DaggerMode::adjoint;
    if (name == "conjugate") return DaggerMode::conjugate;
    throw ValidationError("unknown dagger mode '" + std::string(name) + "'");
}

bool is_conjugate_linear(DaggerMode mode) noexcept {
    return mode == DaggerMode::adjoint || mode == DaggerMode::conjugate;
}

bool is_antimultiplicative(DaggerMode mode) noexcept {
    return mode == DaggerMode::transpose || mode == DaggerMode::adjoint;
}

DaggerMode compose(DaggerMode outer, DaggerMode inner) noexcept {
    // adjoint = transpose o conjugate; each mode is a pair of bits.
    const bool conj = is_conjugate_linear(outer) != is_conjugate_linear(inner);
    const bool anti = is_antimultiplicative(outer) != is_antimultiplicative(inner);
    if (conj && anti) return DaggerMode::adjoint;
    if (conj) return DaggerMode::conjugate;
    if (anti) return DaggerMode::transpose;
    return DaggerMode::identity;
}

std::string_view to_string(SchattenOrder order) noexcept {
    switch (order) {
    case SchattenOrder::trace: return "trace";
    case SchattenOrder::hilbert_schmidt: return "hilbert_schmidt";
    case SchattenOrder::operator_norm: return "operator";
    }
    return "trace";
}

SchattenOrder schatten_order_from_string(std::string_view name) {
    if (name == "trace") return SchattenOrder::trace;
    if (name == "hilbert_schmidt") return SchattenOrder::hilbert_schmidt;
    if (name == "operator") return SchattenOrder::operator_norm;
    throw ValidationError("unknown Schatten order '" + std::string(name) + "'");
}

void require_square(const Matrix& a, std::string_view what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        std::ostringstream msg;
        msg << what << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
        throw DimensionError(msg.str());
    }
}

void require_same_size(const Matrix& a, const Matrix& b, std::string_view what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream msg;
        msg << what << ": size mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
            << "x" << b.cols();
        throw DimensionError(msg.str());
    }
}

void require_finite(const Matrix& a, std::string_view what) {
    if (!a.allFinite()) throw ValidationError(std::string(what) + ": matrix has non-finite entries");
}

Complex trace(const Matrix& a) {
    require_square(a, "trace");
    return a.trace();
}

Complex pairing(const Matrix& c, const Matrix& t) {
    require_square(c, "pairing");
    require_same_size(c, t, "pairing");
    // tr(CT) without forming the product.
    return (c.array() * t.transpose().array()).sum();
}

RealVector singular_values(const Matrix& a) {
    if (a.size() == 0) return RealVector();
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues();
}

double schatten_norm(const Matrix& a, SchattenOrder order) {
    if (order == SchattenOrder::hilbert_schmidt) return a.norm();
    const RealVector s = singular_values(a);
    if (s.size() == 0) return 0.0;
    return order == SchattenOrder::trace ? s.sum() : s(0);
}

std::size_t numerical_rank(const Matrix& a, double tol) {
    if (!(tol > 0.0)) throw ValidationError("numerical_rank: tol must be positive");
    const RealVector s = singular_values(a);
    if (s.size() == 0 || s(0) == 0.0) return 0;
    const double cut = tol * s(0);
    return static_cast<std::size_t>((s.array() > cut).count());
}

Matrix dagger(const Matrix& a, DaggerMode mode) {
    switch (mode) {
    case DaggerMode::identity: return a;
    case DaggerMode::transpose: return a.transpose();
    case DaggerMode::adjoint: return a.adjoint();
    case DaggerMode::conjugate: return a.conjugate();
    }
    return a;
}

Matrix matrix_unit(std::size_t n, std::size_t i, std::size_t j) {
    if (i >= n || j >= n) throw DimensionError("matrix_unit: index out of range");
    Matrix e = Matrix::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}

Matrix dyad(const Vector& x, const Vector& y) { return x * y.adjoint(); }

Complex inner(const Vector& a, const Vector& b) { return b.dot(a); }

double gram_defect(std::span<const Vector> vectors) {
    double worst = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = 0; j < vectors.size(); ++j) {
            const Complex g = vectors[i].dot(vectors[j]);
            const Complex target = i == j ? Complex(1.0) : Complex(0.0);
            worst = std::max(worst, std::abs(g - target));
        }
    }
    return worst;
}

Matrix extend_to_unitary(std::span<const Vector> vectors, double tol) {
    if (vectors.empty()) throw ValidationError("extend_to_unitary: need at least one vector");
    const auto n = static_cast<std::size_t>(vectors.front().size());
    if (vectors.size() > n) throw DimensionError("extend_to_unitary: more vectors than dimension");
    for (const auto& v : vectors) {
        if (static_cast<std::size_t>(v.size()) != n)
            throw DimensionError("extend_to_unitary: vectors of unequal length");
        if (!v.allFinite()) throw ValidationError("extend_to_unitary: non-finite vector");
    }
    const double defect = gram_defect(vectors);
    if (defect > tol) {
        std::ostringstream msg;
        msg << "extend_to_unitary: vectors are not orthonormal (worst Gram defect " << defect << ")";
        throw ValidationError(msg.str());
    }

    Matrix u(n, n);
    std::size_t filled = 0;
    auto orthogonalize = [&](Vector v) {
        // Two Gram-Schmidt passes keep the loss of orthogonality at rounding level.
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t c = 0; c < filled; ++c) v -= u.col(c).dot(v) * u.col(c);
        }
        return v;
    };
    for (const auto& v : vectors) {
        Vector w = orthogonalize(v);
        u.col(filled++) = w / w.norm();
    }
    std::vector<bool> used(n, false);
    while (filled < n) {
        // The standard basis vector with the largest residual is the best-conditioned choice.
        std::size_t best = n;
        double best_norm = -1.0;
        Vector best_vec;
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            Vector w = orthogonalize(Vector::Unit(n, j));
            const double nrm = w.norm();
            if (nrm > best_norm) {
                best_norm = nrm;
                best = j;
                best_vec = std::move(w);
            }
        }
        used[best] = true;
        u.col(filled++) = best_vec / best_norm;
    }
    return u;
}

Matrix fix_first_entry_phase(const Matrix& u, double threshold) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            if (std::abs(u(i, j)) > threshold) return u * std::conj(phase_of(u(i, j)));
        }
    }
    return u;
}

Complex phase_of(Complex z) noexcept {
    const double r = std::abs(z);
    return r == 0.0 ? Complex(1.0) : z / r;
}

double Rng::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::gaussian() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

Complex Rng::complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re, im) * std::sqrt(0.5);
}

Complex Rng::unit_phase() { return std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi)); }

Vector Rng::gaussian_vector(std::size_t n) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v(i) = complex_gaussian();
    return v;
}

Matrix Rng::gaussian_matrix(std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    // Column-major fill order is part of the determinism contract.
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = complex_gaussian();
    return m;
}

Vector Rng::unit_vector(std::size_t n) {
    if (n == 0) throw DimensionError("unit_vector: n must be positive");
    for (;;) {
        Vector v = gaussian_vector(n);
        const double nrm = v.norm();
        if (nrm > 1e-12) return v / nrm;
    }
}

Vector Rng::unit_vector_orthogonal_to(const Vector& x) {
    if (x.size() < 2) throw DimensionError("unit_vector_orthogonal_to: need n >= 2");
    for (;;) {
        Vector v = gaussian_vector(static_cast<std::size_t>(x.size()));
        v -= x.dot(v) * x;
        v -= x.dot(v) * x;
        const double nrm = v.norm();
        if (nrm > 1e-6) return v / nrm;
    }
}

Matrix Rng::unitary(std::size_t n) {
    if (n == 0) throw DimensionError("unitary: n must be positive");
    const Matrix g = gaussian_matrix(n, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix& r = qr.matrixQR();
    for (std::size_t j = 0; j < n; ++j) q.col(j) *= phase_of(r(j, j));
    return q;
}

Matrix Rng::rank_k(std::size_t n, std::size_t k) {
    if (k > n) throw DimensionError("rank_k: k exceeds n");
    if (k == 0) return Matrix::Zero(n, n);
    const Matrix left = gaussian_matrix(n, k);
    const Matrix right = gaussian_matrix(n, k);
    return left * right.adjoint();
}

Matrix Rng::dense(std::size_t n) { return gaussian_matrix(n, n); }

std::string_view to_string(SampleKind kind) noexcept {
    switch (kind) {
    case SampleKind::unit_vector: return "unit_vector";
    case SampleKind::unitary: return "unitary";
    case SampleKind::rank_k: return "rank_k";
    case SampleKind::dense: return "dense";
    }
    return "dense";
}

SampleKind sample_kind_from_string(std::string_view name) {
    if (name == "unit_vector") return SampleKind::unit_vector;
    if (name == "unitary") return SampleKind::unitary;
    if (name == "rank_k") return SampleKind::rank_k;
    if (name == "dense") return SampleKind::dense;
    throw ValidationError("unknown sample kind '" + std::string(name) + "'");
}

Matrix sample(SampleKind kind, std::size_t n, std::uint64_t seed, std::size_t k) {
    if (n == 0) throw DimensionError("sample: n must be positive");
    Rng rng(seed);
    switch (kind) {
    case SampleKind::unit_vector: return rng.unit_vector(n);
    case SampleKind::unitary: return rng.unitary(n);
    case SampleKind::rank_k: return rng.rank_k(n, k);
    case SampleKind::dense: return rng.dense(n);
    }
    return rng.dense(n);
}

}  // namespace qnr
