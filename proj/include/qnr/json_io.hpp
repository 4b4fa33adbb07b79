#ifndef QNR_JSON_IO_HPP
#define QNR_JSON_IO_HPP

// Matrix JSON format used across the library and CLI:
//   {"rows": n, "cols": m, "data": [[re, im], ...]}   (row-major)
// Vectors are written as n x 1 matrices and scalars as [re, im].

#include "qnr/linalg.hpp"

#include <json.hpp>

#include <filesystem>

namespace qnr {

using Json = nlohmann::json;

Json to_json(const Matrix& m);
Json complex_to_json(Complex z);

/// Rejects malformed documents and non-finite entries.
Matrix matrix_from_json(const Json& j);
Complex complex_from_json(const Json& j);
/// Accepts either an n x 1 or a 1 x n matrix document.
Vector vector_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
Matrix read_matrix_file(const std::filesystem::path& path);

}  // namespace qnr

#endif  // QNR_JSON_IO_HPP
