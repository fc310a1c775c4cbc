#include "opclass/membership.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "opclass/rng.hpp"

namespace opclass {

namespace {

double scale_for(double norm, double degree) { return std::max(1.0, std::pow(norm, degree)); }

std::string format_param(double p) {
  std::ostringstream os;
  os << p;
  return os.str();
}

// Member iff ||D||_F <= tol.eq * scale. The witness is the top right
// singular vector of D; NonMember requires ||D x|| to clear tol.decision.
MembershipVerdict equality_verdict(const Matrix& d, double scale, const Tolerances& tol) {
  MembershipVerdict v;
  v.oracle = Oracle::Algebraic;
  v.scale = scale;
  v.defect = -d.norm();
  if (d.norm() <= tol.eq * scale) {
    v.status = Status::Member;
    return v;
  }
  Eigen::JacobiSVD<Matrix> svd(d, Eigen::ComputeFullV);
  v.witness.vector = Vector(svd.matrixV().col(0));
  const double recomputed = (d * *v.witness.vector).norm();
  v.status = recomputed >= tol.decision * scale ? Status::NonMember : Status::Inconclusive;
  return v;
}

// Member iff lambda_min(H) >= -tol.psd * scale. `recompute` evaluates the
// defining quadratic form at the witness without going through H.
template <typename Recompute>
MembershipVerdict psd_verdict(const Matrix& h, double scale, const Tolerances& tol, Recompute&& recompute) {
  MembershipVerdict v;
  v.oracle = Oracle::Algebraic;
  v.scale = scale;
  const auto eig = hermitian_eigen(h, tol);
  v.defect = eig.eigenvalues(0);
  if (v.defect >= -tol.psd * scale) {
    v.status = Status::Member;
    return v;
  }
  Vector x = eig.eigenvectors.col(0);
  v.witness.vector = x;
  v.status = recompute(x) <= -tol.decision * scale ? Status::NonMember : Status::Inconclusive;
  return v;
}

Vector apply_power(const Matrix& t, int n, Vector x) {
  for (int i = 0; i < n; ++i) x = t * x;
  return x;
}

Vector normalized(const Vector& x) { return x / x.norm(); }

double lambda_min_sym(const Matrix& p) {
  const Matrix h = (p + p.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

std::vector<Vector> warm_starts_for(const Matrix& t) {
  const Index n = t.rows();
  std::vector<Vector> starts;
  starts.reserve(2 * n);
  Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  for (Index i = 0; i < n; ++i) starts.push_back(svd.matrixV().col(i));
  for (Index i = 0; i < n; ++i) starts.push_back(svd.matrixU().col(i));
  return starts;
}

// Projected gradient descent on the unit sphere from x; returns the final
// value and leaves the minimizer in x. Gradients are central differences
// taken through normalized perturbations.
double descend(const SphereDefect& f, Vector& x, double scale, int max_iterations) {
  const Index n = x.size();
  const double h = 1e-6;
  double fx = f(x);
  double alpha = 0.5 / scale;
  int stagnant = 0;
  Vector g(n);
  for (int it = 0; it < max_iterations; ++it) {
    for (Index j = 0; j < n; ++j) {
      Vector xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      const double dre = (f(normalized(xp)) - f(normalized(xm))) / (2 * h);
      xp = x;
      xm = x;
      xp(j) += Complex(0, h);
      xm(j) -= Complex(0, h);
      const double dim = (f(normalized(xp)) - f(normalized(xm))) / (2 * h);
      g(j) = Complex(dre, dim);
    }
    g -= std::real(x.dot(g)) * x;
    const double gn2 = g.squaredNorm();
    if (std::sqrt(gn2) < 1e-12 * scale) break;

    Vector trial = normalized(x - alpha * g);
    double ft = f(trial);
    while (ft > fx - 1e-4 * alpha * gn2 && alpha > 1e-14 / scale) {
      alpha *= 0.5;
      trial = normalized(x - alpha * g);
      ft = f(trial);
    }
    // Accepted steps can overshoot across the minimizer; shrink while that helps.
    while (alpha > 1e-14 / scale) {
      const Vector shorter = normalized(x - 0.5 * alpha * g);
      const double fs = f(shorter);
      if (!(fs < ft)) break;
      alpha *= 0.5;
      trial = shorter;
      ft = fs;
    }
    if (!(ft < fx)) break;
    stagnant = (fx - ft < 1e-14 * scale) ? stagnant + 1 : 0;
    x = trial;
    fx = ft;
    if (stagnant >= 3) break;
    alpha = std::min(alpha * 2.0, 4.0 / scale);
  }
  return fx;
}

MembershipVerdict reconcile(const OraclePair& pair, const Tolerances& tol) {
  const auto& p = pair.pencil;
  const auto& s = pair.sphere;
  if (p.status == s.status) return s;
  const bool definite = p.status != Status::Inconclusive && s.status != Status::Inconclusive;
  if (definite) {
    const auto& nm = p.status == Status::NonMember ? p : s;
    const double strong = -10.0 * tol.decision * nm.scale;
    MembershipVerdict out = s;
    out.status = Status::Inconclusive;
    out.note = "pencil=" + to_string(p.status) + " sphere=" + to_string(s.status);
    if (nm.defect <= strong) {
      std::ostringstream os;
      os << "pencil " << to_string(p.status) << " (min " << p.defect << ") vs sphere " << to_string(s.status)
         << " (min " << s.defect << ")";
      throw Error(ErrorCode::OracleDisagreement, os.str());
    }
    return out;
  }
  if (p.status == Status::NonMember) return p;
  if (s.status == Status::NonMember) return s;
  MembershipVerdict out = s;
  out.status = Status::Inconclusive;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

OperatorClass OperatorClass::p_hyponormal(double p) {
  if (!(p > 0 && p <= 1)) throw Error(ErrorCode::InvalidArgument, "p-hyponormal needs 0 < p <= 1");
  return {ClassLabel::PHyponormal, 0, p};
}

OperatorClass OperatorClass::k_paranormal(int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k-paranormal needs k >= 1");
  return {ClassLabel::KParanormal, k};
}

OperatorClass OperatorClass::absolute_k_paranormal(int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "absolute-k-paranormal needs k >= 1");
  return {ClassLabel::AbsoluteKParanormal, k};
}

OperatorClass OperatorClass::k_quasi_paranormal(int k) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "k-quasi-paranormal needs k >= 0");
  if (k == 0) return paranormal();
  return {ClassLabel::KQuasiParanormal, k};
}

std::string OperatorClass::name() const {
  switch (label) {
    case ClassLabel::Normal: return "Normal";
    case ClassLabel::Quasinormal: return "Quasinormal";
    case ClassLabel::Hyponormal: return "Hyponormal";
    case ClassLabel::PHyponormal: return "PHyponormal(" + format_param(p) + ")";
    case ClassLabel::ClassA: return "ClassA";
    case ClassLabel::Paranormal: return "Paranormal";
    case ClassLabel::KParanormal: return "KParanormal(" + std::to_string(k) + ")";
    case ClassLabel::AbsoluteKParanormal: return "AbsoluteKParanormal(" + std::to_string(k) + ")";
    case ClassLabel::KQuasiParanormal: return "KQuasiParanormal(" + std::to_string(k) + ")";
    case ClassLabel::Normaloid: return "Normaloid";
  }
  return "?";
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Member: return "Member";
    case Status::NonMember: return "NonMember";
    case Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(Oracle o) {
  switch (o) {
    case Oracle::Pencil: return "Pencil";
    case Oracle::Sphere: return "Sphere";
    case Oracle::Algebraic: return "Algebraic";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Pencils

Matrix PencilSpec::evaluate(double lambda) const {
  Matrix p = Matrix::Zero(terms.front().matrix.rows(), terms.front().matrix.cols());
  for (const auto& term : terms) p += (term.coefficient * std::pow(lambda, term.exponent)) * term.matrix;
  return p;
}

void PencilSpec::validate(const Tolerances& tol) const {
  if (terms.empty()) throw Error(ErrorCode::InvalidPencil, "pencil has no terms");
  const Index n = terms.front().matrix.rows();
  for (const auto& term : terms) {
    if (term.matrix.rows() != n || term.matrix.cols() != n)
      throw Error(ErrorCode::InvalidPencil, "pencil terms have inconsistent dimensions");
    if ((term.matrix - term.matrix.adjoint()).norm() > tol.eq * std::max(1.0, term.matrix.norm()))
      throw Error(ErrorCode::InvalidPencil, "pencil term is not Hermitian");
    if (!std::isfinite(term.coefficient) || !std::isfinite(term.exponent))
      throw Error(ErrorCode::InvalidPencil, "non-finite pencil coefficient");
  }
  if (!(lambda_lo > 0 && lambda_max > lambda_lo)) throw Error(ErrorCode::InvalidPencil, "need 0 < lambda_lo < lambda_max");
  if (grid_points < 3) throw Error(ErrorCode::InvalidPencil, "need at least 3 grid points");
  if (!(scale > 0)) throw Error(ErrorCode::InvalidPencil, "scale must be positive");
}

namespace {

PencilSpec window_for(const Matrix& t, double degree) {
  PencilSpec spec;
  const double norm = operator_norm(t);
  const double s = std::max(1.0, norm * norm);
  spec.lambda_lo = 1e-6 * s;
  spec.lambda_max = 4.0 * s;
  spec.scale = scale_for(norm, degree);
  return spec;
}

Matrix gram(const Matrix& a) { return a.adjoint() * a; }

}  // namespace

PencilSpec k_quasi_paranormal_pencil(const Matrix& t, int k) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 0");
  const Matrix tk = matrix_power(t, k);
  const Matrix tk1 = tk * t;
  const Matrix tk2 = tk1 * t;
  PencilSpec spec = window_for(t, 2.0 * k + 4);
  spec.terms = {{gram(tk2), 1.0, 0.0}, {gram(tk1), -2.0, 1.0}, {gram(tk), 1.0, 2.0}};
  return spec;
}

PencilSpec k_paranormal_pencil(const Matrix& t, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  const Index n = t.rows();
  PencilSpec spec = window_for(t, 2.0 * k + 2);
  spec.terms = {{gram(matrix_power(t, k + 1)), 1.0, 0.0},
                {gram(t), -double(k + 1), double(k)},
                {Matrix::Identity(n, n), double(k), double(k + 1)}};
  return spec;
}

PencilSpec absolute_k_paranormal_pencil(const Matrix& t, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  const Index n = t.rows();
  const Matrix tt = gram(t);
  PencilSpec spec = window_for(t, 2.0 * k + 2);
  spec.terms = {{t.adjoint() * matrix_power(tt, k) * t, 1.0, 0.0},
                {tt, -double(k + 1), double(k)},
                {Matrix::Identity(n, n), double(k), double(k + 1)}};
  return spec;
}

MembershipVerdict pencil_check(const PencilSpec& pencil, const Tolerances& tol) {
  pencil.validate(tol);
  const auto f = [&](double lambda) { return lambda_min_sym(pencil.evaluate(lambda)); };

  const int m = pencil.grid_points;
  const double ratio = pencil.lambda_max / pencil.lambda_lo;
  std::vector<double> grid(m), values(m);
  for (int i = 0; i < m; ++i) {
    grid[i] = pencil.lambda_lo * std::pow(ratio, double(i) / (m - 1));
    values[i] = f(grid[i]);
  }
  const int best = int(std::min_element(values.begin(), values.end()) - values.begin());
  double lo = grid[std::max(best - 1, 0)];
  double hi = grid[std::min(best + 1, m - 1)];
  double best_lambda = grid[best];
  double best_value = values[best];

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > 1e-6 * pencil.lambda_max) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (lo + hi);
  for (double cand : {c, d, mid}) {
    const double v = f(cand);
    if (v < best_value) {
      best_value = v;
      best_lambda = cand;
    }
  }

  MembershipVerdict v;
  v.oracle = Oracle::Pencil;
  v.scale = pencil.scale;
  v.defect = best_value;
  v.witness.lambda = best_lambda;
  const Matrix p = pencil.evaluate(best_lambda);
  Eigen::SelfAdjointEigenSolver<Matrix> es((p + p.adjoint()) * 0.5);
  v.witness.vector = Vector(es.eigenvectors().col(0));
  if (best_value >= -tol.psd * pencil.scale) {
    v.status = Status::Member;
    return v;
  }
  // recompute the quadratic form term by term at the witness
  const Vector& x = *v.witness.vector;
  double form = 0;
  for (const auto& term : pencil.terms)
    form += term.coefficient * std::pow(best_lambda, term.exponent) * std::real(x.dot(term.matrix * x));
  v.status = form <= -tol.decision * pencil.scale ? Status::NonMember : Status::Inconclusive;
  return v;
}

// ---------------------------------------------------------------------------
// Sphere oracle

MembershipVerdict sphere_check(const SphereDefect& defect, Index dim, const SphereOptions& options,
                               const Tolerances& tol) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "sphere_check needs dim >= 1");
  if (options.restarts < 1) throw Error(ErrorCode::InvalidArgument, "sphere_check needs restarts >= 1");
  const double scale = options.scale;

  double best = std::numeric_limits<double>::infinity();
  Vector best_x;
  auto consider = [&](Vector x) {
    const double fx = descend(defect, x, scale, options.max_iterations);
    if (fx < best) {
      best = fx;
      best_x = x;
    }
  };

  for (const auto& w : options.warm_starts) {
    if (w.size() != dim) throw Error(ErrorCode::DimensionMismatch, "warm start has wrong dimension");
    if (w.norm() == 0) continue;
    consider(normalized(w));
  }
  for (Index i = 0; i < dim; ++i) consider(Vector::Unit(dim, i));
  for (int r = 0; r < options.restarts; ++r) {
    CounterRng rng(derive_seed(options.seed, std::uint64_t(r)));
    Vector x(dim);
    for (Index i = 0; i < dim; ++i) x(i) = rng.complex_normal();
    consider(normalized(x));
  }

  MembershipVerdict v;
  v.oracle = Oracle::Sphere;
  v.scale = scale;
  v.seed = options.seed;
  v.defect = defect(best_x);
  v.witness.vector = best_x;
  if (v.defect >= -0.1 * tol.decision * scale)
    v.status = Status::Member;
  else if (v.defect <= -tol.decision * scale)
    v.status = Status::NonMember;
  else
    v.status = Status::Inconclusive;
  return v;
}

double k_quasi_paranormal_defect(const Matrix& t, int k, const Vector& x) {
  const Vector tk = apply_power(t, k, x);
  const Vector tk1 = t * tk;
  const Vector tk2 = t * tk1;
  return (tk2.norm() * tk.norm() - tk1.squaredNorm()) / x.squaredNorm();
}

double k_paranormal_defect(const Matrix& t, int k, const Vector& x) {
  const double xn = x.norm();
  const Vector tx = t * x;
  const Vector tk1x = apply_power(t, k, tx);
  return (tk1x.norm() * std::pow(xn, k) - std::pow(tx.norm(), k + 1)) / std::pow(xn, k + 1);
}

double absolute_k_paranormal_defect(const Matrix& t, int k, const Vector& x) {
  const double xn = x.norm();
  const Matrix abs_k = psd_power(Matrix(t.adjoint() * t), 0.5 * k);
  const Vector tx = t * x;
  return ((abs_k * tx).norm() * std::pow(xn, k) - std::pow(tx.norm(), k + 1)) / std::pow(xn, k + 1);
}

OraclePair run_oracles(const Matrix& t, PencilFamily family, int k, const MembershipOptions& opts) {
  require_operator(t);
  const Tolerances& tol = opts.tol;
  const double norm = operator_norm(t);

  PencilSpec pencil;
  SphereDefect sphere;
  std::function<double(const Vector&)> exact;
  double degree = 0;
  switch (family) {
    case PencilFamily::KQuasiParanormal: {
      pencil = k_quasi_paranormal_pencil(t, k);
      const Matrix tk = matrix_power(t, k);
      const Matrix tk1 = tk * t;
      const Matrix tk2 = tk1 * t;
      sphere = [tk, tk1, tk2](const Vector& x) { return (tk2 * x).norm() * (tk * x).norm() - (tk1 * x).squaredNorm(); };
      exact = [&t, k](const Vector& x) { return k_quasi_paranormal_defect(t, k, x); };
      degree = 2.0 * k + 2;
      break;
    }
    case PencilFamily::KParanormal: {
      pencil = k_paranormal_pencil(t, k);
      const Matrix tk1 = matrix_power(t, k + 1);
      sphere = [t, tk1, k](const Vector& x) { return (tk1 * x).norm() - std::pow((t * x).norm(), k + 1); };
      exact = [&t, k](const Vector& x) { return k_paranormal_defect(t, k, x); };
      degree = k + 1.0;
      break;
    }
    case PencilFamily::AbsoluteKParanormal: {
      pencil = absolute_k_paranormal_pencil(t, k);
      const Matrix abs_k_t = psd_power(Matrix(t.adjoint() * t), 0.5 * k, tol) * t;
      sphere = [t, abs_k_t, k](const Vector& x) { return (abs_k_t * x).norm() - std::pow((t * x).norm(), k + 1); };
      exact = [&t, k](const Vector& x) { return absolute_k_paranormal_defect(t, k, x); };
      degree = k + 1.0;
      break;
    }
  }

  OraclePair out;
  out.pencil = pencil_check(pencil, tol);
  out.pencil.seed = opts.seed;

  SphereOptions so;
  so.restarts = opts.restarts;
  so.seed = opts.seed;
  so.scale = scale_for(norm, degree);
  so.warm_starts = warm_starts_for(t);
  out.sphere = sphere_check(sphere, t.rows(), so, tol);
  if (out.sphere.status == Status::NonMember && exact(*out.sphere.witness.vector) > -tol.decision * so.scale)
    out.sphere.status = Status::Inconclusive;
  return out;
}

// ---------------------------------------------------------------------------
// Predicates

MembershipVerdict is_normal(const Matrix& t, const Tolerances& tol) {
  require_operator(t);
  const double norm = operator_norm(t);
  return equality_verdict(self_commutator(t), scale_for(norm, 2), tol);
}

MembershipVerdict is_quasinormal(const Matrix& t, const Tolerances& tol) {
  require_operator(t);
  const double norm = operator_norm(t);
  const Matrix d = t * t.adjoint() * t - t.adjoint() * t * t;
  return equality_verdict(d, scale_for(norm, 3), tol);
}

MembershipVerdict quasinormal_embry(const Matrix& t, int kmax, const Tolerances& tol) {
  require_operator(t);
  if (kmax < 2) throw Error(ErrorCode::InvalidArgument, "quasinormal_embry needs kmax >= 2");
  const double norm = operator_norm(t);
  const Matrix tt = t.adjoint() * t;
  MembershipVerdict worst;
  double worst_ratio = -1;
  Matrix tk = t;
  Matrix ttk = tt;
  for (int k = 2; k <= kmax; ++k) {
    tk = tk * t;
    ttk = ttk * tt;
    const Matrix d = tk.adjoint() * tk - ttk;
    const double scale = scale_for(norm, 2.0 * k);
    auto v = equality_verdict(d, scale, tol);
    const double ratio = d.norm() / scale;
    // any definite violation dominates; otherwise keep the largest residual
    const bool replace = worst_ratio < 0 || (v.status == Status::NonMember && worst.status != Status::NonMember) ||
                         (v.status == worst.status && ratio > worst_ratio) ||
                         (v.status == Status::Inconclusive && worst.status == Status::Member);
    if (replace) {
      worst = v;
      worst_ratio = ratio;
    }
  }
  return worst;
}

MembershipVerdict is_hyponormal(const Matrix& t, const Tolerances& tol) {
  require_operator(t);
  const double norm = operator_norm(t);
  return psd_verdict(self_commutator(t), scale_for(norm, 2), tol, [&t](const Vector& x) {
    return (t * x).squaredNorm() - (t.adjoint() * x).squaredNorm();
  });
}

MembershipVerdict is_p_hyponormal(const Matrix& t, double p, const Tolerances& tol) {
  require_operator(t);
  if (!(p > 0 && p <= 1)) throw Error(ErrorCode::InvalidArgument, "p-hyponormal needs 0 < p <= 1");
  const double norm = operator_norm(t);
  const Matrix abs_p = psd_power(Matrix(t.adjoint() * t), p, tol);
  const Matrix abs_star_p = psd_power(Matrix(t * t.adjoint()), p, tol);
  // <(T*T)^p x, x> = || (T*T)^{p/2} x ||^2
  return psd_verdict(abs_p - abs_star_p, scale_for(norm, 2 * p), tol, [&](const Vector& x) {
    const Matrix a = psd_power(Matrix(t.adjoint() * t), p / 2, tol);
    const Matrix b = psd_power(Matrix(t * t.adjoint()), p / 2, tol);
    return (a * x).squaredNorm() - (b * x).squaredNorm();
  });
}

MembershipVerdict is_class_a(const Matrix& t, const Tolerances& tol) {
  require_operator(t);
  const double norm = operator_norm(t);
  const Matrix t2 = t * t;
  const Matrix abs_t2 = psd_power(Matrix(t2.adjoint() * t2), 0.5, tol);
  return psd_verdict(abs_t2 - t.adjoint() * t, scale_for(norm, 2), tol, [&](const Vector& x) {
    const Matrix root = psd_power(Matrix(t2.adjoint() * t2), 0.25, tol);
    return (root * x).squaredNorm() - (t * x).squaredNorm();
  });
}

MembershipVerdict is_normaloid(const Matrix& t, const Tolerances& tol) {
  require_operator(t);
  const double norm = operator_norm(t);
  const double radius = spectral_radius(t);
  MembershipVerdict v;
  v.oracle = Oracle::Algebraic;
  v.scale = std::max(1.0, norm);
  v.defect = radius - norm;
  const bool spectral_member = norm - radius <= tol.decision * v.scale;

  // ||T^n|| = ||T||^n cross-check
  bool power_member = true;
  Matrix tn = t;
  const int nmax = std::max<int>(6, int(t.rows()));
  for (int n = 2; n <= nmax && power_member; ++n) {
    tn = tn * t;
    const double expected = std::pow(norm, n);
    if (std::abs(operator_norm(tn) - expected) > tol.decision * expected) power_member = false;
  }

  if (spectral_member && power_member) {
    v.status = Status::Member;
    return v;
  }
  Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeFullV);
  v.witness.vector = Vector(svd.matrixV().col(0));
  if (!spectral_member && !power_member) {
    v.status = Status::NonMember;
  } else {
    v.status = Status::Inconclusive;
    v.note = spectral_member ? "spectral radius matches norm but a power norm does not"
                             : "power norms match but spectral radius does not";
  }
  return v;
}

MembershipVerdict is_k_quasi_paranormal(const Matrix& t, int k, const MembershipOptions& opts) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 0");
  auto v = reconcile(run_oracles(t, PencilFamily::KQuasiParanormal, k, opts), opts.tol);
  v.seed = opts.seed;
  return v;
}

MembershipVerdict is_paranormal(const Matrix& t, const MembershipOptions& opts) {
  return is_k_quasi_paranormal(t, 0, opts);
}

MembershipVerdict is_k_paranormal(const Matrix& t, int k, const MembershipOptions& opts) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  auto v = reconcile(run_oracles(t, PencilFamily::KParanormal, k, opts), opts.tol);
  v.seed = opts.seed;
  return v;
}

MembershipVerdict is_absolute_k_paranormal(const Matrix& t, int k, const MembershipOptions& opts) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  auto v = reconcile(run_oracles(t, PencilFamily::AbsoluteKParanormal, k, opts), opts.tol);
  v.seed = opts.seed;
  return v;
}

MembershipVerdict check_class(const Matrix& t, const OperatorClass& cls, const MembershipOptions& opts) {
  switch (cls.label) {
    case ClassLabel::Normal: return is_normal(t, opts.tol);
    case ClassLabel::Quasinormal: return is_quasinormal(t, opts.tol);
    case ClassLabel::Hyponormal: return is_hyponormal(t, opts.tol);
    case ClassLabel::PHyponormal: return is_p_hyponormal(t, cls.p, opts.tol);
    case ClassLabel::ClassA: return is_class_a(t, opts.tol);
    case ClassLabel::Paranormal: return is_paranormal(t, opts);
    case ClassLabel::KParanormal: return is_k_paranormal(t, cls.k, opts);
    case ClassLabel::AbsoluteKParanormal: return is_absolute_k_paranormal(t, cls.k, opts);
    case ClassLabel::KQuasiParanormal: return is_k_quasi_paranormal(t, cls.k, opts);
    case ClassLabel::Normaloid: return is_normaloid(t, opts.tol);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown class");
}

Classification classify_all(const Matrix& t, const std::vector<int>& k_list, const std::vector<double>& p_list,
                            const MembershipOptions& opts) {
  require_operator(t);
  std::vector<OperatorClass> classes = {OperatorClass::normal(), OperatorClass::quasinormal(),
                                        OperatorClass::hyponormal()};
  for (double p : p_list) classes.push_back(OperatorClass::p_hyponormal(p));
  classes.push_back(OperatorClass::class_a());
  classes.push_back(OperatorClass::paranormal());
  for (int k : k_list) {
    if (k >= 1) {
      classes.push_back(OperatorClass::k_paranormal(k));
      classes.push_back(OperatorClass::absolute_k_paranormal(k));
    }
    if (k >= 1) classes.push_back(OperatorClass::k_quasi_paranormal(k));
  }
  classes.push_back(OperatorClass::normaloid());

  Classification out;
  for (const auto& cls : classes) {
    if (out.verdicts.count(cls)) continue;
    try {
      out.verdicts[cls] = check_class(t, cls, opts);
    } catch (const Error& e) {
      MembershipVerdict v;
      v.status = Status::Inconclusive;
      v.seed = opts.seed;
      v.note = e.what();
      out.verdicts[cls] = v;
    }
  }
  out.chain_violations = chain_violations(out.verdicts);
  return out;
}

std::vector<std::string> chain_violations(const std::map<OperatorClass, MembershipVerdict>& verdicts) {
  std::vector<std::string> out;
  auto check = [&](const OperatorClass& narrow, const OperatorClass& wide) {
    auto a = verdicts.find(narrow);
    auto b = verdicts.find(wide);
    if (a == verdicts.end() || b == verdicts.end()) return;
    if (a->second.status == Status::Member && b->second.status == Status::NonMember)
      out.push_back(narrow.name() + " => " + wide.name());
  };
  auto check_path = [&](const std::vector<OperatorClass>& path) {
    for (std::size_t i = 0; i < path.size(); ++i)
      for (std::size_t j = i + 1; j < path.size(); ++j) check(path[i], path[j]);
  };

  std::vector<OperatorClass> p_classes, k_values, abs_values, quasi_values;
  for (const auto& [cls, v] : verdicts) {
    if (cls.label == ClassLabel::PHyponormal) p_classes.push_back(cls);
    if (cls.label == ClassLabel::KParanormal) k_values.push_back(cls);
    if (cls.label == ClassLabel::AbsoluteKParanormal) abs_values.push_back(cls);
    if (cls.label == ClassLabel::KQuasiParanormal) quasi_values.push_back(cls);
  }

  const auto head = {OperatorClass::normal(), OperatorClass::quasinormal(), OperatorClass::hyponormal()};
  const auto tail = {OperatorClass::class_a(), OperatorClass::paranormal(), OperatorClass::normaloid()};
  std::vector<OperatorClass> main(head);
  main.insert(main.end(), tail.begin(), tail.end());
  check_path(main);
  for (const auto& p : p_classes) {
    std::vector<OperatorClass> path(head);
    path.push_back(p);
    path.insert(path.end(), tail.begin(), tail.end());
    check_path(path);
  }
  for (const auto& k : k_values) check_path({OperatorClass::paranormal(), k, OperatorClass::normaloid()});
  for (const auto& k : abs_values) check_path({OperatorClass::paranormal(), k, OperatorClass::normaloid()});
  std::vector<OperatorClass> quasi = {OperatorClass::paranormal()};
  quasi.insert(quasi.end(), quasi_values.begin(), quasi_values.end());  // map order: ascending k
  check_path(quasi);
  return out;
}

}  // namespace opclass
