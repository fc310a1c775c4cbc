#include "opclass/decomposition.hpp"

#include <bit>
#include <cstring>
#include <sstream>

namespace opclass {

std::string to_string(BlockLabel label) {
  switch (label) {
    case BlockLabel::NormalPart: return "NormalPart";
    case BlockLabel::PurePart: return "PurePart";
    case BlockLabel::NilpotentPart: return "NilpotentPart";
  }
  return "?";
}

Matrix Decomposition::block_diagonal() const {
  Matrix out(0, 0);
  for (const auto& b : blocks) out = direct_sum(out, b);
  return out;
}

Matrix Decomposition::block(BlockLabel label) const {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (labels[i] == label) return blocks[i];
  return Matrix(0, 0);
}

Index Decomposition::dim(BlockLabel label) const {
  Index total = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (labels[i] == label) total += block_dims[i];
  return total;
}

std::uint64_t matrix_hash(const Matrix& t) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(double(t.rows()));
  for (Index j = 0; j < t.cols(); ++j)
    for (Index i = 0; i < t.rows(); ++i) {
      mix(t(i, j).real());
      mix(t(i, j).imag());
    }
  return h;
}

namespace {

Matrix hstack(std::initializer_list<const Matrix*> parts, Index rows) {
  Index cols = 0;
  for (const auto* p : parts) cols += p->cols();
  Matrix out(rows, cols);
  Index at = 0;
  for (const auto* p : parts) {
    if (p->cols()) out.middleCols(at, p->cols()) = *p;
    at += p->cols();
  }
  return out;
}

void push_block(Decomposition& d, const Matrix& basis, const Matrix& t, BlockLabel label) {
  if (basis.cols() == 0) return;
  d.blocks.push_back(basis.adjoint() * t * basis);
  d.block_dims.push_back(basis.cols());
  d.labels.push_back(label);
}

void finish(Decomposition& d, const Matrix& t) {
  d.source_hash = matrix_hash(t);
  d.residuals.reassembly = (d.reassemble() - t).norm();
  const Matrix normal = d.block(BlockLabel::NormalPart);
  d.residuals.normality = normal.size() ? self_commutator(normal).norm() : 0.0;
  const Matrix nil = d.block(BlockLabel::NilpotentPart);
  d.residuals.nilpotency = (nil.size() && d.nil_index_bound > 0) ? matrix_power(nil, d.nil_index_bound).norm() : 0.0;
}

}  // namespace

Decomposition normal_pure_split(const Matrix& t, const Tolerances& tol) {
  require_operator(t);
  const Index n = t.rows();
  const double norm = operator_norm(t);
  const Matrix t_star = t.adjoint();

  Subspace<double> v = kernel(self_commutator(t), tol, norm * norm);
  for (Index step = 0; step <= n && v.dim() > 0; ++step) {
    auto w = subspace_intersect(v, preimage_in(t, v, tol), tol);
    w = subspace_intersect(w, preimage_in(t_star, v, tol), tol);
    if (w.dim() == v.dim()) break;
    v = w;
  }
  const auto complement = orthogonal_complement(v, tol);

  Decomposition d;
  d.change_of_basis = hstack({&v.basis, &complement.basis}, n);
  push_block(d, v.basis, t, BlockLabel::NormalPart);
  push_block(d, complement.basis, t, BlockLabel::PurePart);
  finish(d, t);
  return d;
}

Decomposition root_decompose(const Matrix& t, int n, int k, const MembershipOptions& opts) {
  require_operator(t);
  const Tolerances& tol = opts.tol;
  if (n < 1 || k < 1) throw Error(ErrorCode::InvalidArgument, "root_decompose needs n >= 1 and k >= 1");

  const auto kq = is_k_quasi_paranormal(t, k, opts);
  if (kq.status != Status::Member)
    throw Error(ErrorCode::HypothesisViolated,
                "T is not " + std::to_string(k) + "-quasi-paranormal (" + to_string(kq.status) + ")");
  const Matrix tn = matrix_power(t, n);
  const auto tn_normal = is_normal(tn, tol);
  if (tn_normal.status != Status::Member)
    throw Error(ErrorCode::HypothesisViolated, "T^" + std::to_string(n) + " is not normal");

  // Null eigenspace of the normal matrix T^n. The cut is relative to ||T||^n
  // (T^n may vanish up to roundoff) and must fall in a clear gap.
  const double norm = operator_norm(t);
  const auto sv = singular_values(tn);
  const double reference = std::max(sv(0), std::pow(norm, n));
  if (reference > 0) {
    for (Index i = 0; i < sv.size(); ++i) {
      const double rel = sv(i) / reference;
      if (rel >= tol.rank / 10 && rel <= tol.rank * 10) {
        std::ostringstream os;
        os << "singular value " << rel << " of T^n (relative) sits at the rank cutoff";
        throw Error(ErrorCode::RankAmbiguous, os.str());
      }
    }
  }
  const auto null_space = kernel(tn, tol, reference);
  const Matrix p = null_space.projector();
  if ((p * t - t * p).norm() > tol.eq * std::max(1.0, norm))
    throw Error(ErrorCode::NonCommutingProjection, "null projection of T^n does not commute with T");

  const auto range = orthogonal_complement(null_space, tol);
  Matrix normal_in_null(t.rows(), 0), pure_in_null(t.rows(), 0);
  if (null_space.dim() > 0) {
    // the null block may itself carry a normal (zero) summand; move it to T'
    const auto inner = normal_pure_split(compress(t, null_space), tol);
    const Index dn = inner.dim(BlockLabel::NormalPart);
    normal_in_null = null_space.basis * inner.change_of_basis.leftCols(dn);
    pure_in_null = null_space.basis * inner.change_of_basis.rightCols(null_space.dim() - dn);
  }
  const Matrix normal_basis = hstack({&range.basis, &normal_in_null}, t.rows());

  Decomposition d;
  d.change_of_basis = hstack({&normal_basis, &pure_in_null}, t.rows());
  d.nil_index_bound = std::min(n, k + 1);
  push_block(d, normal_basis, t, BlockLabel::NormalPart);
  push_block(d, pure_in_null, t, BlockLabel::NilpotentPart);
  finish(d, t);

  const Matrix normal = d.block(BlockLabel::NormalPart);
  if (normal.size() && is_normal(normal, tol).status != Status::Member)
    throw Error(ErrorCode::PostconditionFailed, "normal summand fails the normality test");
  if (d.residuals.nilpotency > tol.eq * std::max(1.0, std::pow(norm, d.nil_index_bound)))
    throw Error(ErrorCode::PostconditionFailed, "nilpotent summand exceeds its index bound");
  return d;
}

Nilpotent2Form nilpotent2_canonical(const Matrix& t, const Tolerances& tol) {
  require_operator(t);
  const Index n = t.rows();
  const double norm = operator_norm(t);
  if (norm == 0) throw Error(ErrorCode::ZeroOperator, "T = 0 has no [[0, C], [0, 0]] form");
  if ((t * t).norm() > tol.eq * std::max(1.0, norm * norm))
    throw Error(ErrorCode::NotNilpotentIndex2, "T^2 != 0");

  const auto ker = kernel(t, tol, norm);
  const auto coker = orthogonal_complement(ker, tol);                        // ker(T)^perp
  const auto range = orthogonal_complement(kernel(Matrix(t.adjoint()), tol, norm), tol);
  const Index r = coker.dim();
  if (range.dim() != r) throw Error(ErrorCode::PostconditionFailed, "rank of T and T* disagree");
  const auto zero_part = subspace_intersect(ker, orthogonal_complement(range, tol), tol);
  if (zero_part.dim() != n - 2 * r) throw Error(ErrorCode::PostconditionFailed, "range(T) is not inside ker(T)");

  // X = V |X|; rotating the range basis by V leaves C = |X| in the corner
  const Matrix x = range.basis.adjoint() * t * coker.basis;
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix polar_u = svd.matrixU() * svd.matrixV().adjoint();
  Matrix c = svd.matrixV() * svd.singularValues().cast<Complex>().asDiagonal() * svd.matrixV().adjoint();
  c = (c + c.adjoint()) * 0.5;
  const auto& s = svd.singularValues();
  if (!(s(r - 1) > tol.rank * s(0))) throw Error(ErrorCode::PostconditionFailed, "C is not injective");

  const Matrix rotated_range = range.basis * polar_u;
  const Matrix nil_basis = hstack({&rotated_range, &coker.basis}, n);

  Nilpotent2Form out;
  Decomposition& d = out.decomposition;
  d.change_of_basis = hstack({&nil_basis, &zero_part.basis}, n);
  d.nil_index_bound = 2;
  Matrix nil_block = Matrix::Zero(2 * r, 2 * r);
  nil_block.topRightCorner(r, r) = c;
  d.blocks.push_back(nil_block);
  d.block_dims.push_back(2 * r);
  d.labels.push_back(BlockLabel::NilpotentPart);
  if (zero_part.dim() > 0) {
    d.blocks.push_back(Matrix::Zero(zero_part.dim(), zero_part.dim()));
    d.block_dims.push_back(zero_part.dim());
    d.labels.push_back(BlockLabel::NormalPart);
  }
  finish(d, t);
  out.form = {Matrix::Zero(zero_part.dim(), zero_part.dim()), Matrix::Zero(r, r), c};
  return out;
}

Matrix rr_assemble(const Matrix& a, const Matrix& b, const Matrix& c, const Tolerances& tol) {
  std::vector<std::string> problems;
  if (a.rows() != a.cols()) problems.push_back("A is not square");
  if (b.rows() != b.cols() || c.rows() != c.cols() || b.rows() != c.rows())
    problems.push_back("B and C must be square of equal size");
  if (a.rows() + b.rows() == 0) problems.push_back("all blocks are empty");
  if (!problems.empty()) throw Error(ErrorCode::InvalidRRForm, problems.front());

  if (a.size() && is_normal(a, tol).status != Status::Member) problems.push_back("A is not normal");
  if (b.size()) {
    if (is_normal(b, tol).status != Status::Member) problems.push_back("B is not normal");
    const double cn = c.norm();
    if ((c - c.adjoint()).norm() > tol.eq * std::max(1.0, cn)) {
      problems.push_back("C is not Hermitian");
    } else {
      if (psd_defect(c, tol) < -tol.psd * std::max(1.0, operator_norm(c))) problems.push_back("C is not positive");
      const auto s = singular_values(c);
      if (!(s(s.size() - 1) > tol.rank * s(0))) problems.push_back("C is not injective");
    }
    if ((b * c - c * b).norm() > tol.eq * std::max(1.0, operator_norm(b) * operator_norm(c)))
      problems.push_back("B and C do not commute");
  }
  if (!problems.empty()) {
    std::string all;
    for (const auto& p : problems) all += (all.empty() ? "" : "; ") + p;
    throw Error(ErrorCode::InvalidRRForm, all);
  }

  const Index m = b.rows();
  Matrix corner = Matrix::Zero(2 * m, 2 * m);
  if (m) {
    corner.topLeftCorner(m, m) = b;
    corner.topRightCorner(m, m) = c;
    corner.bottomRightCorner(m, m) = -b;
  }
  Matrix t = direct_sum(a, corner);
  if (is_normal(Matrix(t * t), tol).status != Status::Member)
    throw Error(ErrorCode::PostconditionFailed, "assembled matrix has a non-normal square");
  return t;
}

MembershipVerdict rr_check(const Matrix& t, const Tolerances& tol) {
  require_operator(t);
  return is_normal(Matrix(t * t), tol);
}

}  // namespace opclass
