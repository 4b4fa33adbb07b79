#include "qnr/json_io.hpp"

#include <cmath>
#include <fstream>

namespace qnr {

Json to_json(const Matrix& m) {
    Json data = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(complex_to_json(m(i, j)));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (j.is_number()) {
        const double re = j.get<double>();
        if (!std::isfinite(re)) throw ValidationError("matrix JSON: non-finite scalar");
        return {re, 0.0};
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ValidationError("matrix JSON: scalar must be [re, im]");
    const double re = j[0].get<double>();
    const double im = j[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
        throw ValidationError("matrix JSON: non-finite entry");
    return {re, im};
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw ValidationError("matrix JSON: expected object with rows, cols, data");
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
        throw ValidationError("matrix JSON: rows and cols must be integers");
    const auto rows = j["rows"].get<long long>();
    const auto cols = j["cols"].get<long long>();
    if (rows <= 0 || cols <= 0) throw ValidationError("matrix JSON: rows and cols must be positive");
    const Json& data = j["data"];
    if (!data.is_array() || static_cast<long long>(data.size()) != rows * cols)
        throw ValidationError("matrix JSON: data length must equal rows*cols");
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (long long r = 0; r < rows; ++r)
        for (long long c = 0; c < cols; ++c) m(r, c) = complex_from_json(data[k++]);
    return m;
}

Vector vector_from_json(const Json& j) {
    const Matrix m = matrix_from_json(j);
    if (m.cols() == 1) return m.col(0);
    if (m.rows() == 1) return m.row(0).transpose();
    throw ValidationError("matrix JSON: expected a vector (n x 1 or 1 x n)");
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError("'" + path.string() + "': " + e.what());
    }
}

Matrix read_matrix_file(const std::filesystem::path& path) {
    return matrix_from_json(read_json_file(path));
}

}  // namespace qnr
