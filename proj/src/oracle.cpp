#include "qnr/oracle.hpp"

#include "qnr/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace qnr::oracle {

void GridSpec::validate() const {
    if (density < 8) throw ValidationError("GridSpec: density must be >= 8");
}

namespace {

struct M2 {
    Complex a, b, c, d;  // [[a, b], [c, d]]
};

M2 to_m2(const Matrix& m, const char* what) {
    if (m.rows() != 2 || m.cols() != 2) throw DimensionError(std::string(what) + ": expected a 2 x 2 matrix");
    require_finite(m, what);
    return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
}

double spectral_norm(const M2& m) {
    // Largest singular value from the 2 x 2 Gram matrix.
    const double aa = std::norm(m.a) + std::norm(m.c);
    const double dd = std::norm(m.b) + std::norm(m.d);
    const Complex off = std::conj(m.a) * m.b + std::conj(m.c) * m.d;
    const double half = 0.5 * (aa + dd);
    const double disc = std::sqrt(std::max(0.0, 0.25 * (aa - dd) * (aa - dd) + std::norm(off)));
    return std::sqrt(half + disc);
}

double trace_norm(const M2& m) {
    const double aa = std::norm(m.a) + std::norm(m.c);
    const double dd = std::norm(m.b) + std::norm(m.d);
    const double det = std::abs(m.a * m.d - m.b * m.c);
    // s1 + s2 = sqrt(s1^2 + s2^2 + 2 s1 s2).
    return std::sqrt(aa + dd + 2.0 * det);
}

template <class Eval>
double grid_max(std::size_t slabs, Eval&& eval_slab) {
    std::vector<double> best(slabs, 0.0);
    parallel::for_each_index(slabs, [&](std::size_t k) { best[k] = eval_slab(k); });
    return *std::max_element(best.begin(), best.end());
}

}  // namespace

OracleValue brute_q_radius_2x2(const Matrix& a, const QParameter& q, const GridSpec& grid) {
    grid.validate();
    const M2 m = to_m2(a, "brute_q_radius_2x2");
    const std::size_t d = grid.density;
    const double qq = q.q();
    const double pp = q.p();
    const double h_a = (std::numbers::pi / 2.0) / static_cast<double>(d);
    const double h_phi = 2.0 * std::numbers::pi / static_cast<double>(d);

    OracleValue out;
    out.value = grid_max(d + 1, [&](std::size_t k) {
        const double ca = std::cos(h_a * static_cast<double>(k));
        const double sa = std::sin(h_a * static_cast<double>(k));
        double best = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const Complex e = std::polar(1.0, h_phi * static_cast<double>(j));
            const Complex x1 = ca;
            const Complex x2 = e * sa;
            // x_perp = (-conj(x2), conj(x1)).
            const Complex p1 = -std::conj(x2);
            const Complex p2 = std::conj(x1);
            const Complex ax1 = m.a * x1 + m.b * x2;
            const Complex ax2 = m.c * x1 + m.d * x2;
            const Complex along = std::conj(x1) * ax1 + std::conj(x2) * ax2;
            const Complex across = std::conj(p1) * ax1 + std::conj(p2) * ax2;
            best = std::max(best, qq * std::abs(along) + pp * std::abs(across));
        }
        return best;
    });
    out.error_bound = 4.0 * spectral_norm(m) * (h_a + h_phi) / 2.0;
    return out;
}

OracleValue brute_c_radius_2x2(const Matrix& a, const Matrix& c, const GridSpec& grid) {
    grid.validate();
    const M2 am = to_m2(a, "brute_c_radius_2x2");
    const M2 cm = to_m2(c, "brute_c_radius_2x2");
    const std::size_t d = grid.density;
    const double h_t = (std::numbers::pi / 2.0) / static_cast<double>(d);
    const double h_p = 2.0 * std::numbers::pi / static_cast<double>(d);

    std::vector<Complex> phases(d);
    for (std::size_t j = 0; j < d; ++j) phases[j] = std::polar(1.0, h_p * static_cast<double>(j));

    OracleValue out;
    out.value = grid_max(d + 1, [&](std::size_t k) {
        const double ct = std::cos(h_t * static_cast<double>(k));
        const double st = std::sin(h_t * static_cast<double>(k));
        double best = 0.0;
        for (std::size_t jb = 0; jb < d; ++jb) {
            for (std::size_t jg = 0; jg < d; ++jg) {
                const Complex u11 = phases[jb] * ct;
                const Complex u12 = phases[jg] * st;
                const Complex u21 = -std::conj(phases[jg]) * st;
                const Complex u22 = std::conj(phases[jb]) * ct;
                // B = A U
                const Complex b11 = am.a * u11 + am.b * u21;
                const Complex b12 = am.a * u12 + am.b * u22;
                const Complex b21 = am.c * u11 + am.d * u21;
                const Complex b22 = am.c * u12 + am.d * u22;
                // M = U^* B
                const Complex m11 = std::conj(u11) * b11 + std::conj(u21) * b21;
                const Complex m12 = std::conj(u11) * b12 + std::conj(u21) * b22;
                const Complex m21 = std::conj(u12) * b11 + std::conj(u22) * b21;
                const Complex m22 = std::conj(u12) * b12 + std::conj(u22) * b22;
                const Complex tr = cm.a * m11 + cm.b * m21 + cm.c * m12 + cm.d * m22;
                best = std::max(best, std::abs(tr));
            }
        }
        return best;
    });
    out.error_bound = 2.0 * spectral_norm(am) * trace_norm(cm) * (h_t + 2.0 * h_p) / 2.0;
    return out;
}

}  // namespace qnr::oracle
