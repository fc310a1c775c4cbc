#pragma once

// Matrix files: JSON {"dim": n, "entries": [[re, im], ...]} (row-major) and
// Matrix Market complex general, coordinate or array.

#include <filesystem>
#include <istream>
#include <optional>
#include <string>

#include "opclass/linalg.hpp"

namespace opclass {

enum class MatrixFormat { Json, MatrixMarket };

/// .mtx / .mm -> MatrixMarket, anything else -> Json.
MatrixFormat format_from_path(const std::filesystem::path& path);
MatrixFormat parse_format(const std::string& name);   // "json" | "matrix-market" | "mtx"

Matrix parse_json_matrix(const std::string& text);
Matrix parse_matrix_market(std::istream& in);

std::string to_json_matrix(const Matrix& t);
std::string to_matrix_market(const Matrix& t);

Matrix read_matrix(const std::filesystem::path& path, std::optional<MatrixFormat> format = {});
void write_matrix(const std::filesystem::path& path, const Matrix& t, std::optional<MatrixFormat> format = {});

/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace opclass
