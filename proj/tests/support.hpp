#pragma once

#include <initializer_list>
#include <optional>

#include "opclass/error.hpp"
#include "opclass/linalg.hpp"

namespace testing_support {

using opclass::Complex;
using opclass::Index;
using opclass::Matrix;
using opclass::Vector;

inline Matrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  Matrix m(Index(rows.size()), Index(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (const auto& x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

inline Matrix diag(std::initializer_list<Complex> d) {
  Matrix m = Matrix::Zero(Index(d.size()), Index(d.size()));
  Index i = 0;
  for (const auto& x : d) m(i, i) = x, ++i;
  return m;
}

inline Matrix j2() { return mat({{0, 1}, {0, 0}}); }

inline Vector basis_vector(Index n, Index i) {
  Vector e = Vector::Zero(n);
  e(i) = 1;
  return e;
}

inline double dist(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

// Code of the opclass::Error thrown by f, or nullopt if f returns normally.
template <class F>
std::optional<opclass::ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const opclass::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testing_support
