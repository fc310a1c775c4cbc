#include "opclass/generators.hpp"

#include <cmath>
#include <numbers>

#include "opclass/decomposition.hpp"
#include "opclass/rng.hpp"

namespace opclass {

namespace {

// Independent child streams of one generator call.
enum Stream : std::uint64_t { kUnitary = 1, kSpectrum = 2, kBlocks = 3, kNilpotent = 4, kOuter = 5, kInner = 6 };

Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t key) {
  CounterRng rng(key);
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  return g;
}

void require_dim(Index dim, const char* what) {
  if (dim < 1) throw Error(ErrorCode::InvalidSpec, std::string(what) + ": dim must be >= 1");
}

}  // namespace

Matrix random_ginibre(Index dim, std::uint64_t seed) {
  require_dim(dim, "ginibre");
  return gaussian_matrix(dim, dim, seed) / std::sqrt(double(dim));
}

Matrix random_unitary(Index dim, std::uint64_t seed) {
  require_dim(dim, "random_unitary");
  const Matrix g = gaussian_matrix(dim, dim, derive_seed(seed, kUnitary));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    const double ad = std::abs(d);
    q.col(i) *= ad > 0 ? d / ad : Complex(1.0);
  }
  return q;
}

std::vector<Complex> annulus_eigenvalues(Index dim, std::uint64_t seed, double r_lo, double r_hi) {
  CounterRng rng(seed);
  std::vector<Complex> out(dim);
  for (auto& z : out) {
    // uniform in area: r^2 uniform on [r_lo^2, r_hi^2]
    const double r = std::sqrt(rng.uniform(r_lo * r_lo, r_hi * r_hi));
    z = std::polar(r, 2.0 * std::numbers::pi * rng.uniform());
  }
  return out;
}

Matrix random_normal(Index dim, std::uint64_t seed, const std::optional<std::vector<Complex>>& eigenvalues) {
  require_dim(dim, "random_normal");
  std::vector<Complex> w;
  if (eigenvalues) {
    if (Index(eigenvalues->size()) != dim) throw Error(ErrorCode::InvalidSpec, "eigenvalue list length != dim");
    w = *eigenvalues;
  } else {
    w = annulus_eigenvalues(dim, derive_seed(seed, kSpectrum), 0.0, 1.0);
  }
  const Matrix u = random_unitary(dim, seed);
  const Vector d = Eigen::Map<const Vector>(w.data(), dim);
  return u * d.asDiagonal() * u.adjoint();
}

Matrix jordan_block(Index n) {
  Matrix j = Matrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) j(i, i + 1) = 1.0;
  return j;
}

Matrix jordan_nilpotent(Index dim, int index, std::uint64_t seed) {
  if (index < 2 || index > dim) throw Error(ErrorCode::InvalidIndex, "need 2 <= index <= dim");
  CounterRng rng(derive_seed(seed, kBlocks));
  Matrix j = jordan_block(index);
  Index remaining = dim - index;
  while (remaining > 0) {
    const Index size = rng.uniform_int(1, std::min<Index>(index, remaining));
    j = direct_sum(j, jordan_block(size));
    remaining -= size;
  }
  const Matrix u = random_unitary(dim, derive_seed(seed, kOuter));
  return u * j * u.adjoint();
}

Matrix normaloid_counterexample(Index dim_m, Index dim_n, std::uint64_t seed) {
  if (dim_m < 1 || dim_n < 2) throw Error(ErrorCode::InvalidSpec, "counterexample needs dim_m >= 1, dim_n >= 2");
  const Matrix m =
      random_normal(dim_m, derive_seed(seed, kInner), annulus_eigenvalues(dim_m, derive_seed(seed, kSpectrum), 0.5, 1.0));
  Matrix nil = jordan_nilpotent(dim_n, 2, derive_seed(seed, kNilpotent));
  nil *= (0.5 * operator_norm(m)) / operator_norm(nil);
  return direct_sum(m, nil);
}

Matrix root_of_scalar_instance(Index dim, int n, Complex lambda, std::uint64_t seed) {
  require_dim(dim, "root_of_scalar_instance");
  if (n < 1) throw Error(ErrorCode::InvalidSpec, "root_of_scalar_instance needs n >= 1");
  const Complex root = std::pow(lambda, 1.0 / n);
  Vector d(dim);
  for (Index i = 0; i < dim; ++i) d(i) = root * std::polar(1.0, 2.0 * std::numbers::pi * double(i % n) / n);
  const Matrix v = random_unitary(dim, seed);
  return v * d.asDiagonal() * v.adjoint();
}

Matrix k_quasi_member(Index dim_normal, Index dim_nil, int k, std::uint64_t seed) {
  if (dim_normal < 0 || dim_nil < 0 || dim_normal + dim_nil < 1 || k < 0)
    throw Error(ErrorCode::InvalidSpec, "k_quasi_member: bad dimensions or k");
  Matrix normal(0, 0), nil(0, 0);
  if (dim_normal > 0)
    normal = random_normal(dim_normal, derive_seed(seed, kInner),
                           annulus_eigenvalues(dim_normal, derive_seed(seed, kSpectrum), 0.5, 1.0));
  if (dim_nil > 0) {
    const Index max_index = std::min<Index>(k + 1, dim_nil);
    if (max_index < 2) {
      nil = Matrix::Zero(dim_nil, dim_nil);
    } else {
      CounterRng rng(derive_seed(seed, kBlocks));
      nil = jordan_nilpotent(dim_nil, int(rng.uniform_int(2, max_index)), derive_seed(seed, kNilpotent));
    }
  }
  const Matrix t = direct_sum(normal, nil);
  const Matrix u = random_unitary(t.rows(), derive_seed(seed, kOuter));
  return u * t * u.adjoint();
}

RRBlocks rr_blocks(Index dim_a, Index dim_b, std::uint64_t seed, bool zero_b) {
  if (dim_a < 0 || dim_b < 0 || dim_a + dim_b < 1) throw Error(ErrorCode::InvalidSpec, "rr_instance: bad dimensions");
  RRBlocks out{Matrix(0, 0), Matrix(0, 0), Matrix(0, 0)};
  if (dim_a > 0)
    out.a = random_normal(dim_a, derive_seed(seed, kInner),
                          annulus_eigenvalues(dim_a, derive_seed(seed, kSpectrum), 0.5, 1.0));
  if (dim_b > 0) {
    const Matrix w = random_unitary(dim_b, derive_seed(seed, kOuter));
    const auto beta = annulus_eigenvalues(dim_b, derive_seed(seed, kNilpotent), 0.5, 1.0);
    CounterRng rng(derive_seed(seed, kBlocks));
    Vector b(dim_b), c(dim_b);
    for (Index i = 0; i < dim_b; ++i) {
      b(i) = zero_b ? Complex(0.0) : beta[i];
      c(i) = rng.uniform(0.5, 1.5);
    }
    out.b = w * b.asDiagonal() * w.adjoint();
    out.c = w * c.asDiagonal() * w.adjoint();
    out.c = (out.c + out.c.adjoint()) * 0.5;
    if (zero_b) out.b.setZero();
  }
  return out;
}

Matrix rr_instance(Index dim_a, Index dim_b, std::uint64_t seed, bool zero_b) {
  const auto blocks = rr_blocks(dim_a, dim_b, seed, zero_b);
  return rr_assemble(blocks.a, blocks.b, blocks.c);
}

int nil_index(const Matrix& t, const Tolerances& tol) {
  const double norm = operator_norm(t);
  Matrix p = Matrix::Identity(t.rows(), t.cols());
  for (int n = 1; n <= t.rows(); ++n) {
    p = p * t;
    if (p.norm() <= tol.eq * std::max(1.0, std::pow(norm, n))) return n;
  }
  return 0;
}

// ---------------------------------------------------------------------------

double GenSpec::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

Matrix generate(const GenSpec& spec) {
  const auto& kind = spec.kind;
  const auto as_index = [&](const char* key, double fallback) { return Index(std::llround(spec.param(key, fallback))); };
  if (kind == "ginibre") return random_ginibre(spec.dim, spec.seed);
  if (kind == "unitary") return random_unitary(spec.dim, spec.seed);
  if (kind == "normal") {
    if (spec.eigenvalues.empty()) return random_normal(spec.dim, spec.seed);
    return random_normal(spec.dim, spec.seed, spec.eigenvalues);
  }
  if (kind == "jordan") return jordan_nilpotent(spec.dim, int(as_index("index", double(spec.dim))), spec.seed);
  if (kind == "counterexample") return normaloid_counterexample(as_index("dim_m", 1), as_index("dim_n", 2), spec.seed);
  if (kind == "scalar-root") return root_of_scalar_instance(spec.dim, int(as_index("n", 2)), spec.lambda, spec.seed);
  if (kind == "k-quasi")
    return k_quasi_member(as_index("dim_normal", 1), as_index("dim_nil", 2), int(as_index("k", 1)), spec.seed);
  if (kind == "rr") return rr_instance(as_index("dim_a", 1), as_index("dim_b", 1), spec.seed, spec.param("zero_b", 0) != 0);
  throw Error(ErrorCode::InvalidSpec, "unknown generator kind '" + kind + "'");
}

Certification certify(const GenSpec& spec, const Matrix& t, const MembershipOptions& opts) {
  Certification c;
  const auto expect = [&](const std::string& claim, MembershipVerdict v, Status want) {
    if (v.status != want) c.certified = false;
    c.verdicts[claim] = std::move(v);
  };
  const auto& kind = spec.kind;
  const Tolerances& tol = opts.tol;
  if (kind == "unitary") {
    c.values["unitarity_residual"] = (t.adjoint() * t - Matrix::Identity(t.rows(), t.cols())).norm();
    if (c.values["unitarity_residual"] > tol.recon) c.certified = false;
    expect("normal", is_normal(t, tol), Status::Member);
  } else if (kind == "normal") {
    expect("normal", is_normal(t, tol), Status::Member);
  } else if (kind == "jordan") {
    const int index = int(std::llround(spec.param("index", double(spec.dim))));
    const int found = nil_index(t, tol);
    c.values["nil_index"] = found;
    if (found != index) c.certified = false;
    expect("k_quasi_paranormal(index-1)", is_k_quasi_paranormal(t, index - 1, opts), Status::Member);
    expect("normaloid", is_normaloid(t, tol), Status::NonMember);
  } else if (kind == "counterexample") {
    expect("normaloid", is_normaloid(t, tol), Status::Member);
    expect("square_normal", is_normal(Matrix(t * t), tol), Status::Member);
    expect("normal", is_normal(t, tol), Status::NonMember);
    expect("paranormal", is_paranormal(t, opts), Status::NonMember);
    expect("k_quasi_paranormal(1)", is_k_quasi_paranormal(t, 1, opts), Status::Member);
  } else if (kind == "scalar-root") {
    const int n = int(std::llround(spec.param("n", 2)));
    const Matrix residual = matrix_power(t, n) - spec.lambda * Matrix::Identity(t.rows(), t.cols());
    c.values["power_residual"] = residual.norm();
    if (c.values["power_residual"] > tol.decision * std::max(1.0, std::abs(spec.lambda))) c.certified = false;
    expect("normal", is_normal(t, tol), Status::Member);
  } else if (kind == "k-quasi") {
    const int k = int(std::llround(spec.param("k", 1)));
    expect("k_quasi_paranormal(k)", is_k_quasi_paranormal(t, k, opts), Status::Member);
  } else if (kind == "rr") {
    expect("rr_check", rr_check(t, tol), Status::Member);
  }
  return c;
}

}  // namespace opclass
