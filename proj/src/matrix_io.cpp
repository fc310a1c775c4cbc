#include "opclass/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "opclass/error.hpp"

namespace opclass {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

}  // namespace

MatrixFormat format_from_path(const std::filesystem::path& path) {
  const auto ext = lower(path.extension().string());
  return (ext == ".mtx" || ext == ".mm") ? MatrixFormat::MatrixMarket : MatrixFormat::Json;
}

MatrixFormat parse_format(const std::string& name) {
  const auto n = lower(name);
  if (n == "json") return MatrixFormat::Json;
  if (n == "matrix-market" || n == "mtx" || n == "mm") return MatrixFormat::MatrixMarket;
  throw Error(ErrorCode::InvalidArgument, "unknown matrix format '" + name + "'");
}

Matrix parse_json_matrix(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) parse_fail("expected {\"dim\", \"entries\"}");
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) parse_fail("dim must be a positive integer");
  const auto n = Index(j["dim"].get<long long>());
  const auto& e = j["entries"];
  if (!e.is_array()) parse_fail("entries must be an array");
  if (Index(e.size()) != n * n)
    parse_fail("expected " + std::to_string(n * n) + " entries for dim " + std::to_string(n) + ", got " +
               std::to_string(e.size()) + " (matrix must be square)");
  Matrix t(n, n);
  for (Index i = 0; i < n * n; ++i) {
    const auto& p = e[std::size_t(i)];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      parse_fail("entry " + std::to_string(i) + " is not a [re, im] pair");
    t(i / n, i % n) = Complex(p[0].get<double>(), p[1].get<double>());
  }
  return t;
}

Matrix parse_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) parse_fail("empty Matrix Market file");
  std::istringstream header(lower(line));
  std::string banner, object, layout, field, symmetry;
  header >> banner >> object >> layout >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix") parse_fail("missing %%MatrixMarket matrix banner");
  if (layout != "coordinate" && layout != "array") parse_fail("unsupported layout '" + layout + "'");
  if (field != "complex") parse_fail("only complex fields are supported");
  if (symmetry != "general") parse_fail("only general symmetry is supported");

  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] != '%') break;
  }
  std::istringstream size_line(line);
  long long rows = 0, cols = 0, nnz = 0;
  if (!(size_line >> rows >> cols)) parse_fail("bad size line");
  if (layout == "coordinate" && !(size_line >> nnz)) parse_fail("coordinate size line needs an entry count");
  if (rows != cols) parse_fail("matrix is " + std::to_string(rows) + "x" + std::to_string(cols) + ", not square");
  if (rows < 1) parse_fail("dimension must be positive");

  Matrix t = Matrix::Zero(rows, cols);
  if (layout == "array") {
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) {
        double re, im;
        if (!(in >> re >> im)) parse_fail("truncated array data");
        t(i, j) = Complex(re, im);
      }
  } else {
    for (long long e = 0; e < nnz; ++e) {
      long long i, j;
      double re, im;
      if (!(in >> i >> j >> re >> im)) parse_fail("truncated coordinate data");
      if (i < 1 || i > rows || j < 1 || j > cols) parse_fail("coordinate entry out of range");
      t(i - 1, j - 1) += Complex(re, im);
    }
  }
  return t;
}

std::string to_json_matrix(const Matrix& t) {
  std::ostringstream os;
  os << "{\"dim\": " << t.rows() << ", \"entries\": [";
  for (Index i = 0; i < t.rows(); ++i)
    for (Index j = 0; j < t.cols(); ++j)
      os << ((i || j) ? ", " : "") << '[' << fmt17(t(i, j).real()) << ", " << fmt17(t(i, j).imag()) << ']';
  os << "]}\n";
  return os.str();
}

std::string to_matrix_market(const Matrix& t) {
  std::ostringstream os;
  os << "%%MatrixMarket matrix array complex general\n" << t.rows() << ' ' << t.cols() << '\n';
  for (Index j = 0; j < t.cols(); ++j)
    for (Index i = 0; i < t.rows(); ++i) os << fmt17(t(i, j).real()) << ' ' << fmt17(t(i, j).imag()) << '\n';
  return os.str();
}

Matrix read_matrix(const std::filesystem::path& path, std::optional<MatrixFormat> format) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open '" + path.string() + "'");
  if (format.value_or(format_from_path(path)) == MatrixFormat::MatrixMarket) return parse_matrix_market(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_matrix(buf.str());
}

void write_matrix(const std::filesystem::path& path, const Matrix& t, std::optional<MatrixFormat> format) {
  const bool mm = format.value_or(format_from_path(path)) == MatrixFormat::MatrixMarket;
  write_file_atomic(path, mm ? to_matrix_market(t) : to_json_matrix(t));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + tmp.string() + "'");
    out << contents;
    if (!out.flush()) throw Error(ErrorCode::InvalidArgument, "write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace opclass
