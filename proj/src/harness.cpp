#include "opclass/harness.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "opclass/decomposition.hpp"
#include "opclass/generators.hpp"
#include "opclass/rng.hpp"

namespace opclass {

namespace {

using Clock = std::chrono::steady_clock;

const std::vector<std::string> kSuites = {
    "stampfli", "quasinormal-root", "ando",  "k-paranormal-root",  "k-quasi-decomposition",
    "coprime",  "embry",            "fuglede-putnam", "normaloid-criterion",
};

std::uint64_t string_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string report_id(const SuiteSpec& spec) {
  std::string id = spec.theorem;
  if (spec.params.empty()) return id;
  id += '[';
  bool first = true;
  for (const auto& [key, value] : spec.params) {
    id += (first ? "" : ",") + key + "=" + std::to_string(value);
    first = false;
  }
  return id + ']';
}

int param(const SuiteSpec& spec, const std::string& key, int fallback) {
  const auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

// n cycles through {2, 3, 4} across trials unless fixed.
int power_for(const SuiteSpec& spec, int trial) { return param(spec, "n", 2 + trial % 3); }

double pow_scale(double norm, double degree) { return std::max(1.0, std::pow(norm, degree)); }

bool member(const MembershipVerdict& v) { return v.status == Status::Member; }

std::string describe(const std::string& predicate, const MembershipVerdict& v) {
  return predicate + "=" + to_string(v.status);
}

std::string ref(const std::string& kind, Index dim, std::uint64_t seed, const std::string& extra = "") {
  std::ostringstream os;
  os << kind << "(dim=" << dim;
  if (!extra.empty()) os << ", " << extra;
  os << ", seed=" << seed << ")";
  return os.str();
}

TrialOutcome skip(TrialOutcome out, std::string reason) {
  out.status = TrialStatus::Skip;
  out.reason = std::move(reason);
  return out;
}

TrialOutcome verdict_outcome(TrialOutcome out, bool ok, const std::string& detail) {
  out.status = ok ? TrialStatus::Pass : TrialStatus::Fail;
  if (!ok) out.reason = detail;
  return out;
}

MembershipOptions trial_opts(const SuiteSpec& spec, std::uint64_t seed) {
  auto opts = spec.membership;
  opts.seed = seed;
  return opts;
}

// Normal matrix whose spectrum may contain zeros and repeated values.
Matrix normal_with_kernel(Index dim, std::uint64_t seed) {
  auto w = annulus_eigenvalues(dim, derive_seed(seed, 11), 0.5, 1.0);
  CounterRng rng(derive_seed(seed, 12));
  const Index zeros = rng.uniform_int(1, dim);
  for (Index i = 0; i < zeros; ++i) w[i] = 0.0;
  return random_normal(dim, seed, w);
}

// ---------------------------------------------------------------------------
// trial bodies

TrialOutcome root_to_normal(TrialOutcome out, const Matrix& t, int n, const MembershipVerdict& hyp,
                            const std::string& hyp_name, const Tolerances& tol) {
  if (!member(hyp)) return skip(std::move(out), describe(hyp_name, hyp));
  const auto tn = is_normal(matrix_power(t, n), tol);
  if (!member(tn)) return skip(std::move(out), describe("is_normal(T^n)", tn));
  const auto normal = is_normal(t, tol);
  out.residuals["self_commutator"] = self_commutator(t).norm();
  return verdict_outcome(std::move(out), member(normal), describe("is_normal(T)", normal));
}

TrialOutcome trial_stampfli(const SuiteSpec& spec, int trial, std::uint64_t seed, Index dim) {
  const int n = power_for(spec, trial);
  const auto& tol = spec.membership.tol;
  TrialOutcome out;
  Matrix t;
  switch (trial % 4) {
    case 0: t = random_normal(dim, seed); out.instance_ref = ref("normal", dim, seed); break;
    case 1: t = normal_with_kernel(dim, seed); out.instance_ref = ref("normal-with-kernel", dim, seed); break;
    case 2: t = random_ginibre(dim, seed); out.instance_ref = ref("ginibre", dim, seed); break;
    default:
      t = jordan_nilpotent(dim, 2, seed);
      out.instance_ref = ref("jordan", dim, seed, "index=2");
  }
  const auto hypo = is_hyponormal(t, tol);
  if (member(hypo)) {
    // trace(T*T - TT*) = 0 and PSD force the self-commutator to vanish
    out.residuals["self_commutator_trace"] = std::abs(self_commutator(t).trace());
    out.counters["collapsed_to_normal"] = member(is_normal(t, tol)) ? 1 : 0;
  }
  return root_to_normal(std::move(out), t, n, hypo, "is_hyponormal", tol);
}

TrialOutcome trial_quasinormal_root(const SuiteSpec& spec, int trial, std::uint64_t seed, Index dim) {
  const int n = power_for(spec, trial);
  const auto& tol = spec.membership.tol;
  TrialOutcome out;
  Matrix t;
  switch (trial % 4) {
    case 0: t = random_normal(dim, seed); out.instance_ref = ref("normal", dim, seed); break;
    case 1: t = normal_with_kernel(dim, seed); out.instance_ref = ref("normal-with-kernel", dim, seed); break;
    case 2:
      t = jordan_nilpotent(dim, 2, seed);
      out.instance_ref = ref("jordan", dim, seed, "index=2");
      break;
    default: t = random_ginibre(dim, seed); out.instance_ref = ref("ginibre", dim, seed);
  }
  const auto quasi = is_quasinormal(t, tol);
  if (!member(quasi)) return skip(std::move(out), describe("is_quasinormal", quasi));

  const double norm = operator_norm(t);
  const auto ker_t = kernel(t, tol, norm);
  const auto ker_t_star = kernel(Matrix(t.adjoint()), tol, norm);
  const double gap = containment_gap(ker_t, ker_t_star);
  out.residuals["kernel_inclusion_gap"] = gap;
  if (gap > tol.decision)
    return verdict_outcome(std::move(out), false, "kernel(T*) not inside kernel(T) for a quasinormal T");
  out.counters["collapsed_to_normal"] = 1;
  return root_to_normal(std::move(out), t, n, quasi, "is_quasinormal", tol);
}

TrialOutcome trial_ando(const SuiteSpec& spec, int trial, std::uint64_t seed, Index dim) {
  const int n = power_for(spec, trial);
  const auto opts = trial_opts(spec, seed);
  const auto& tol = opts.tol;
  TrialOutcome out;
  if (trial % 3 == 0) {
    const Index dm = std::max<Index>(1, dim - 2);
    const Matrix t = normaloid_counterexample(dm, 2, seed);
    out.dim = t.rows();
    out.instance_ref = ref("counterexample", t.rows(), seed, "dim_m=" + std::to_string(dm) + ", dim_n=2");
    const auto normaloid = is_normaloid(t, tol);
    const auto para = is_paranormal(t, opts);
    const auto power = is_normal(matrix_power(t, n), tol);
    const auto normal = is_normal(t, tol);
    Confirmation c;
    c.trial = trial;
    c.seed = seed;
    c.instance_ref = out.instance_ref;
    c.verdicts = {{"is_normaloid", to_string(normaloid.status)},
                  {"is_paranormal", to_string(para.status)},
                  {"is_normal(T^n)", to_string(power.status)},
                  {"is_normal", to_string(normal.status)}};
    out.residuals["counterexample_self_commutator"] = self_commutator(t).norm();
    out.residuals["power_self_commutator"] = self_commutator(matrix_power(t, n)).norm();
    const bool ok = member(normaloid) && para.status == Status::NonMember && member(power) &&
                    normal.status == Status::NonMember;
    if (ok) {
      out.confirmation = c;
      out.counters["counterexample_confirmed"] = 1;
    }
    return verdict_outcome(std::move(out), ok, "counterexample verdicts do not show non-extension");
  }
  Matrix t;
  if (trial % 3 == 1) {
    t = random_normal(dim, seed);
    out.instance_ref = ref("normal", dim, seed);
  } else {
    t = random_ginibre(dim, seed);
    out.instance_ref = ref("ginibre", dim, seed);
  }
  return root_to_normal(std::move(out), t, n, is_paranormal(t, opts), "is_paranormal", tol);
}

TrialOutcome trial_k_paranormal_root(const SuiteSpec& spec, int trial, std::uint64_t seed, Index dim) {
  const int n = param(spec, "n", 2);
  const int k = param(spec, "k", 1);
  const auto opts = trial_opts(spec, seed);
  const auto& tol = opts.tol;
  TrialOutcome out;
  const int family = spec.scalar_root_only ? 0 : trial % 4;

  if (family == 0) {
    CounterRng rng(derive_seed(seed, 21));
    const Complex lambda = std::polar(rng.uniform(0.5, 2.0), 2.0 * std::numbers::pi * rng.uniform());
    const Matrix t = root_of_scalar_instance(dim, n, lambda, seed);
    std::ostringstream extra;
    extra << "n=" << n << ", lambda=" << lambda.real() << (lambda.imag() < 0 ? "" : "+") << lambda.imag() << "i";
    out.instance_ref = ref("scalar-root", dim, seed, extra.str());

    const Matrix id = Matrix::Identity(dim, dim);
    out.residuals["power_residual"] = (matrix_power(t, n) - lambda * id).norm();
    const Complex coeff = std::pow(std::abs(lambda), 2.0 / n) / lambda;
    out.residuals["identity_residual"] = (Matrix(t.adjoint()) - coeff * matrix_power(t, n - 1)).norm();
    const double scale = std::max(1.0, std::abs(lambda));
    if (out.residuals["power_residual"] > tol.decision * scale)
      return verdict_outcome(std::move(out), false, "T^n != lambda I");
    if (out.residuals["identity_residual"] > tol.decision * scale)
      return verdict_outcome(std::move(out), false, "T* != |lambda|^(2/n) lambda^-1 T^(n-1)");
    const auto kp = is_k_paranormal(t, k, opts);
    const auto normal = is_normal(t, tol);
    return verdict_outcome(std::move(out), member(kp) && member(normal),
                           describe("is_k_paranormal", kp) + ", " + describe("is_normal", normal));
  }

  Matrix t;
  if (family == 1) {
    t = random_normal(dim, seed);
    out.instance_ref = ref("normal", dim, seed);
  } else if (family == 2) {
    // lambda = 0: only T = 0 is k-paranormal among matrices with T^n = 0
    if ((trial / 4) % 2 == 0) {
      t = Matrix::Zero(dim, dim);
      out.instance_ref = ref("zero", dim, seed);
      out.counters["lambda_zero"] = 1;
    } else {
      const int index = int(std::min<Index>(n, dim));
      t = jordan_nilpotent(dim, index, seed);
      out.instance_ref = ref("jordan", dim, seed, "index=" + std::to_string(index));
      const auto kp = is_k_paranormal(t, k, opts);
      if (member(kp)) return verdict_outcome(std::move(out), false, "nonzero nilpotent reported k-paranormal");
      out.counters["nilpotent_excluded"] = 1;
      return skip(std::move(out), describe("is_k_paranormal", kp));
    }
  } else {
    t = random_ginibre(dim, seed);
    out.instance_ref = ref("ginibre", dim, seed);
  }
  auto hyp = is_k_paranormal(t, k, opts);
  std::string hyp_name = "is_k_paranormal";
  if (!member(hyp)) {
    hyp = is_absolute_k_paranormal(t, k, opts);
    hyp_name = "is_absolute_k_paranormal";
  }
  return root_to_normal(std::move(out), t, n, hyp, hyp_name, tol);
}

TrialOutcome trial_k_quasi_decomposition(const SuiteSpec& spec, int trial, std::uint64_t seed, Index dim) {
  const int n = param(spec, "n", 2);
  const int k = param(spec, "k", 1);
  const auto opts = trial_opts(spec, seed);
  const auto& tol = opts.tol;
  // nilpotent index <= min(n, k+1) keeps T^n normal
  const int k_gen = std::max(0, std::min(k, n - 1));
  CounterRng rng(derive_seed(seed, 31));
  TrialOutcome out;
  Matrix t;
  bool expect_pure_normal = false;
  switch (trial % 4) {
    case 2:
      t = k_quasi_member(dim, 0, k_gen, seed);
      out.instance_ref = ref("k-quasi", dim, seed, "dim_nil=0");
      expect_pure_normal = true;
      break;
    case 3:
      if (n == 2) {
        const Index dim_b = rng.uniform_int(1, dim / 2);
        t = rr_instance(dim - 2 * dim_b, dim_b, seed, true);
        out.instance_ref = ref("rr", dim, seed, "dim_b=" + std::to_string(dim_b) + ", zero_b=1");
      } else {
        t = k_quasi_member(0, dim, k_gen, seed);
        out.instance_ref = ref("k-quasi", dim, seed, "dim_normal=0");
      }
      break;
    default: {
      const Index dim_nil = rng.uniform_int(2, dim);
      t = k_quasi_member(dim - dim_nil, dim_nil, k_gen, seed);
      out.instance_ref = ref("k-quasi", dim, seed, "dim_nil=" + std::to_string(dim_nil));
    }
  }

  Decomposition d;
  try {
    d = root_decompose(t, n, k, opts);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::RankAmbiguous) return skip(std::move(out), "RankAmbiguous");
    return verdict_outcome(std::move(out), false, e.what());
  }
  const double norm = operator_norm(t);
  out.residuals["reassembly"] = d.residuals.reassembly;
  out.residuals["normality"] = d.residuals.normality;
  out.residuals["nilpotency"] = d.residuals.nilpotency;
  if (d.residuals.reassembly > tol.eq * pow_scale(norm, 1))
    return verdict_outcome(std::move(out), false, "reassembly residual too large");
  if (d.residuals.normality > tol.eq * pow_scale(norm, 2))
    return verdict_outcome(std::move(out), false, "normal part fails normality");
  if (d.residuals.nilpotency > tol.eq * pow_scale(norm, d.nil_index_bound))
    return verdict_outcome(std::move(out), false, "nilpotent part exceeds index min(n, k+1)");
  const Index nil_dim = d.dim(BlockLabel::NilpotentPart);
  if (expect_pure_normal && nil_dim != 0)
    return verdict_outcome(std::move(out), false, "normal instance produced a nilpotent part");

  if (n == 2 && nil_dim > 0) {
    const Matrix nil = d.block(BlockLabel::NilpotentPart);
    Nilpotent2Form f;
    try {
      f = nilpotent2_canonical(nil, tol);
    } catch (const Error& e) {
      return verdict_outcome(std::move(out), false, std::string("canonical form: ") + e.what());
    }
    const auto sv = singular_values(f.form.c);
    out.residuals["canonical_reassembly"] = f.decomposition.residuals.reassembly;
    out.residuals["c_hermitian"] = (f.form.c - f.form.c.adjoint()).norm();
    const double c_min = hermitian_eigen(f.form.c).eigenvalues.minCoeff();
    out.counters["canonical_checked"] = 1;
    if (f.decomposition.residuals.reassembly > tol.eq * pow_scale(norm, 1))
      return verdict_outcome(std::move(out), false, "canonical form does not reassemble");
    if (!(c_min > tol.rank * sv(0)))
      return verdict_outcome(std::move(out), false, "C is not positive and injective");
  }
  out.status = TrialStatus::Pass;
  return out;
}

TrialOutcome trial_coprime(const SuiteSpec& spec, int trial, std::uint64_t seed, Index dim) {
  const int m = param(spec, "m", 2);
  const int n = param(spec, "n", 3);
  const int k = param(spec, "k", 1);
  const auto opts = trial_opts(spec, seed);
  const auto& tol = opts.tol;
  TrialOutcome out;
  Matrix t;
  switch (trial % 3) {
    case 0:
      t = random_normal(dim, seed, annulus_eigenvalues(dim, derive_seed(seed, 41), 0.5, 1.0));
      out.instance_ref = ref("normal", dim, seed, "annulus=[0.5,1]");
      break;
    case 1: {
      CounterRng rng(derive_seed(seed, 42));
      const Complex lambda = std::polar(rng.uniform(0.5, 2.0), 2.0 * std::numbers::pi * rng.uniform());
      t = root_of_scalar_instance(dim, n, lambda, seed);
      out.instance_ref = ref("scalar-root", dim, seed, "n=" + std::to_string(n));
      break;
    }
    default: t = random_ginibre(dim, seed); out.instance_ref = ref("ginibre", dim, seed);
  }
  const auto sv = singular_values(t);
  if (!(sv(sv.size() - 1) > tol.rank * std::max(1.0, sv(0)))) return skip(std::move(out), "not invertible");
  const auto power_n = is_normal(matrix_power(t, n), tol);
  if (!member(power_n)) return skip(std::move(out), describe("is_normal(T^n)", power_n));
  const auto power_m = is_k_paranormal(matrix_power(t, m), k, opts);
  if (!member(power_m)) return skip(std::move(out), describe("is_k_paranormal(T^m)", power_m));
  const auto normal = is_normal(t, tol);
  out.residuals["self_commutator"] = self_commutator(t).norm();
  return verdict_outcome(std::move(out), member(normal), describe("is_normal", normal));
}

TrialOutcome trial_embry(const SuiteSpec& spec, int trial, std::uint64_t seed, Index dim) {
  const int kmax = param(spec, "kmax", 3);
  const auto opts = trial_opts(spec, seed);
  const auto& tol = opts.tol;
  TrialOutcome out;
  Matrix t;
  switch (trial % 5) {
    case 0: t = random_normal(dim, seed); out.instance_ref = ref("normal", dim, seed); break;
    case 1: t = random_ginibre(dim, seed); out.instance_ref = ref("ginibre", dim, seed); break;
    case 2: {
      const int index = int(2 + seed % std::uint64_t(dim - 1));
      t = jordan_nilpotent(dim, index, seed);
      out.instance_ref = ref("jordan", dim, seed, "index=" + std::to_string(index));
      break;
    }
    case 3: {
      const Index dm = std::max<Index>(1, dim - 2);
      t = normaloid_counterexample(dm, 2, seed);
      out.instance_ref = ref("counterexample", t.rows(), seed, "dim_m=" + std::to_string(dm));
      break;
    }
    default:
      t = k_quasi_member(dim / 2, dim - dim / 2, 1, seed);
      out.instance_ref = ref("k-quasi", dim, seed, "k=1");
  }
  out.dim = t.rows();
  const auto quasi = is_quasinormal(t, tol);
  const auto embry = quasinormal_embry(t, kmax, tol);
  out.residuals["quasinormal_defect"] = quasi.defect;
  out.residuals["embry_defect"] = embry.defect;
  if (quasi.status == Status::Inconclusive || embry.status == Status::Inconclusive) {
    if (quasi.status == embry.status) {
      out.status = TrialStatus::Pass;
      return out;
    }
    return skip(std::move(out), "inconclusive verdict");
  }
  out.counters[quasi.status == Status::Member ? "both_member" : "both_nonmember"] = quasi.status == embry.status;
  return verdict_outcome(std::move(out), quasi.status == embry.status,
                         describe("is_quasinormal", quasi) + ", " + describe("quasinormal_embry", embry));
}

TrialOutcome trial_fuglede_putnam(const SuiteSpec& spec, int trial, std::uint64_t seed, Index dim) {
  const auto& tol = spec.membership.tol;
  CounterRng rng(derive_seed(seed, 51));
  TrialOutcome out;
  Index groups = 0;
  switch (trial % 3) {
    case 0: groups = 1; break;
    case 1: groups = dim; break;
    default: groups = rng.uniform_int(1, std::max<Index>(1, dim - 1));
  }
  // contiguous eigenvalue groups; every group nonempty
  std::vector<Index> sizes(groups, 1);
  for (Index i = groups; i < dim; ++i) ++sizes[rng.uniform_int(0, groups - 1)];
  const auto distinct = annulus_eigenvalues(groups, derive_seed(seed, 52), 0.5, 1.0);
  const bool identity = trial % 3 == 0;

  Vector eig(dim);
  Matrix block_t = Matrix::Zero(dim, dim);
  Index at = 0;
  for (Index g = 0; g < groups; ++g) {
    eig.segment(at, sizes[g]).setConstant(identity ? Complex(1.0) : distinct[g]);
    block_t.block(at, at, sizes[g], sizes[g]) = random_ginibre(sizes[g], derive_seed(seed, 100 + g));
    at += sizes[g];
  }
  const Matrix u = random_unitary(dim, derive_seed(seed, 53));
  const Matrix nrm = u * eig.asDiagonal() * u.adjoint();
  const Matrix t = identity ? random_ginibre(dim, seed) : Matrix(u * block_t * u.adjoint());
  out.instance_ref = ref(identity ? "identity" : "normal-commutant", dim, seed, "groups=" + std::to_string(groups));

  const double scale = std::max(1.0, operator_norm(t) * operator_norm(nrm));
  out.residuals["commutator"] = (t * nrm - nrm * t).norm();
  out.residuals["adjoint_commutator"] = (t * nrm.adjoint() - nrm.adjoint() * t).norm();
  if (out.residuals["commutator"] > tol.eq * scale)
    return verdict_outcome(std::move(out), false, "construction does not commute with N");
  return verdict_outcome(std::move(out), out.residuals["adjoint_commutator"] <= tol.eq * scale,
                         "T does not commute with N*");
}

TrialOutcome trial_normaloid_criterion(const SuiteSpec& spec, int trial, std::uint64_t seed, Index dim) {
  const int k = param(spec, "k", 1);
  const auto opts = trial_opts(spec, seed);
  const auto& tol = opts.tol;
  TrialOutcome out;
  Matrix t;
  switch (trial % 4) {
    case 0: {
      const Index dim_nil = std::max<Index>(2, dim / 2);
      t = k_quasi_member(std::max<Index>(0, dim - dim_nil), dim_nil, k, seed);
      out.instance_ref = ref("k-quasi", t.rows(), seed, "k=" + std::to_string(k));
      break;
    }
    case 1: t = random_normal(dim, seed); out.instance_ref = ref("normal", dim, seed); break;
    case 2: {
      const Index dm = std::max<Index>(1, dim - 2);
      t = normaloid_counterexample(dm, 2, seed);
      out.instance_ref = ref("counterexample", t.rows(), seed, "dim_m=" + std::to_string(dm));
      break;
    }
    default: {
      const int index = int(std::min<Index>(k + 1, dim));
      t = jordan_nilpotent(dim, index, seed);
      out.instance_ref = ref("jordan", dim, seed, "index=" + std::to_string(index));
    }
  }
  out.dim = t.rows();
  const auto kq = is_k_quasi_paranormal(t, k, opts);
  if (!member(kq)) return skip(std::move(out), describe("is_k_quasi_paranormal", kq));

  const double norm = operator_norm(t);
  int witness = 0;
  for (int n = std::max(1, k); n <= k + 4 && !witness; ++n) {
    const double pn = operator_norm(matrix_power(t, n));
    if (!(pn > tol.rank * pow_scale(norm, n))) break;
    const double gap = std::abs(operator_norm(matrix_power(t, n + 1)) - pn * norm);
    if (gap <= tol.decision * pow_scale(norm, n + 1)) witness = n;
  }
  if (!witness) return skip(std::move(out), "no n in [k, k+4] with ||T^(n+1)|| = ||T^n|| ||T|| > 0");
  out.counters["norm_identity_n=" + std::to_string(witness)] = 1;
  const auto normaloid = is_normaloid(t, tol);
  out.residuals["normaloid_gap"] = -normaloid.defect;
  return verdict_outcome(std::move(out), member(normaloid), describe("is_normaloid", normaloid));
}

using TrialFn = TrialOutcome (*)(const SuiteSpec&, int, std::uint64_t, Index);

TrialFn trial_fn(const std::string& theorem) {
  if (theorem == "stampfli") return trial_stampfli;
  if (theorem == "quasinormal-root") return trial_quasinormal_root;
  if (theorem == "ando") return trial_ando;
  if (theorem == "k-paranormal-root") return trial_k_paranormal_root;
  if (theorem == "k-quasi-decomposition") return trial_k_quasi_decomposition;
  if (theorem == "coprime") return trial_coprime;
  if (theorem == "embry") return trial_embry;
  if (theorem == "fuglede-putnam") return trial_fuglede_putnam;
  if (theorem == "normaloid-criterion") return trial_normaloid_criterion;
  throw Error(ErrorCode::UnknownTheorem, "unknown theorem id '" + theorem + "'");
}

void validate(const SuiteSpec& spec) {
  trial_fn(spec.theorem);
  if (spec.trials < 0) throw Error(ErrorCode::InvalidArgument, "trials must be >= 0");
  if (spec.max_dim < 2) throw Error(ErrorCode::InvalidArgument, "max_dim must be >= 2");
  const auto positive = [&](const char* key) {
    const auto it = spec.params.find(key);
    if (it != spec.params.end() && it->second < 1)
      throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be >= 1");
  };
  positive("n");
  positive("k");
  if (spec.theorem == "embry" && param(spec, "kmax", 3) < 2)
    throw Error(ErrorCode::InvalidArgument, "kmax must be >= 2");
  if (spec.theorem == "coprime") {
    const int m = param(spec, "m", 2), n = param(spec, "n", 3);
    if (m < 2 || n < 2 || std::gcd(m, n) != 1)
      throw Error(ErrorCode::NonCoprime,
                  "m = " + std::to_string(m) + " and n = " + std::to_string(n) + " must be coprime and >= 2");
  }
  spec.membership.tol.validate();
}

std::vector<std::string> suite_notes(const std::string& theorem) {
  if (theorem == "stampfli")
    return {"hyponormal matrices are normal in finite dimension (the self-commutator is PSD with zero trace); "
            "the root hypothesis is never needed, collapsed_to_normal counts such instances"};
  if (theorem == "quasinormal-root")
    return {"quasinormal matrices are normal in finite dimension; the kernel inclusion ker T* in ker T is "
            "checked separately on every hypothesis instance"};
  if (theorem == "ando")
    return {"trials with index = 0 mod 3 use M (+) N with N^2 = 0: normaloid, T^n normal, not paranormal, "
            "not normal; each is recorded in confirmations"};
  return {};
}

SuiteSpec make_spec(const std::string& theorem, std::map<std::string, int> params, int trials, Index max_dim,
                    std::uint64_t seed, const MembershipOptions& opts) {
  SuiteSpec s;
  s.theorem = theorem;
  s.params = std::move(params);
  s.trials = trials;
  s.max_dim = max_dim;
  s.seed = seed;
  s.membership = opts;
  return s;
}

}  // namespace

std::vector<std::string> suite_ids() { return kSuites; }

std::uint64_t trial_seed(const SuiteSpec& spec, int trial) {
  return derive_seed(derive_seed(spec.seed, string_hash(report_id(spec))), std::uint64_t(trial));
}

TrialOutcome replay_trial(const SuiteSpec& spec, int trial, std::uint64_t seed) {
  validate(spec);
  const Index dim = 2 + Index(seed % std::uint64_t(spec.max_dim - 1));
  TrialOutcome out;
  try {
    out = trial_fn(spec.theorem)(spec, trial, seed, dim);
  } catch (const Error& e) {
    out.status = e.code() == ErrorCode::RankAmbiguous ? TrialStatus::Skip : TrialStatus::Fail;
    out.reason = e.what();
  }
  if (out.dim == 0) out.dim = dim;
  if (spec.inject_failure && out.status == TrialStatus::Pass) {
    out.status = TrialStatus::Fail;
    out.reason = "injected failure (negated assertion)";
  }
  return out;
}

TheoremReport run_spec(const SuiteSpec& spec) {
  validate(spec);
  const auto start = Clock::now();
  TheoremReport report;
  report.theorem_id = report_id(spec);
  report.params = spec.params;
  report.trials = spec.trials;
  report.tolerances = spec.membership.tol;
  report.notes = suite_notes(spec.theorem);
  for (int trial = 0; trial < spec.trials; ++trial) {
    const auto seed = trial_seed(spec, trial);
    auto out = replay_trial(spec, trial, seed);
    for (const auto& [key, count] : out.counters) report.counters[key] += count;
    switch (out.status) {
      case TrialStatus::Pass:
        ++report.passes;
        for (const auto& [key, value] : out.residuals) {
          auto& slot = report.max_residuals[key];
          slot = std::max(slot, value);
        }
        if (out.confirmation) report.confirmations.push_back(*out.confirmation);
        break;
      case TrialStatus::Skip:
        ++report.skips;
        ++report.skip_reasons[out.reason];
        break;
      case TrialStatus::Fail:
        report.failures.push_back({trial, seed, out.dim, out.residuals, out.instance_ref, out.reason});
        break;
    }
  }
  if (report.trials > 0 && report.skips * 10 > report.trials * 9)
    report.notes.push_back("skip budget exceeded: " + std::to_string(report.skips) + " of " +
                           std::to_string(report.trials) + " trials skipped");
  report.wall_time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return report;
}

TheoremReport verify_stampfli(int trials, Index max_dim, std::uint64_t seed, const MembershipOptions& opts) {
  return run_spec(make_spec("stampfli", {}, trials, max_dim, seed, opts));
}

TheoremReport verify_quasinormal_root(int trials, Index max_dim, int n, std::uint64_t seed,
                                      const MembershipOptions& opts) {
  return run_spec(make_spec("quasinormal-root", {{"n", n}}, trials, max_dim, seed, opts));
}

TheoremReport verify_ando(int trials, Index max_dim, int n, std::uint64_t seed, const MembershipOptions& opts) {
  return run_spec(make_spec("ando", {{"n", n}}, trials, max_dim, seed, opts));
}

TheoremReport verify_k_paranormal_root(int trials, Index max_dim, int n, int k, std::uint64_t seed,
                                       const MembershipOptions& opts, bool scalar_root_only) {
  auto spec = make_spec("k-paranormal-root", {{"n", n}, {"k", k}}, trials, max_dim, seed, opts);
  spec.scalar_root_only = scalar_root_only;
  return run_spec(spec);
}

TheoremReport verify_k_quasi_decomposition(int trials, Index max_dim, int n, int k, std::uint64_t seed,
                                           const MembershipOptions& opts) {
  return run_spec(make_spec("k-quasi-decomposition", {{"n", n}, {"k", k}}, trials, max_dim, seed, opts));
}

TheoremReport verify_coprime(int trials, Index max_dim, int m, int n, std::uint64_t seed,
                             const MembershipOptions& opts) {
  return run_spec(make_spec("coprime", {{"m", m}, {"n", n}}, trials, max_dim, seed, opts));
}

TheoremReport verify_embry(int trials, Index max_dim, int kmax, std::uint64_t seed, const MembershipOptions& opts) {
  return run_spec(make_spec("embry", {{"kmax", kmax}}, trials, max_dim, seed, opts));
}

TheoremReport verify_fuglede_putnam(int trials, Index max_dim, std::uint64_t seed, const MembershipOptions& opts) {
  return run_spec(make_spec("fuglede-putnam", {}, trials, max_dim, seed, opts));
}

TheoremReport verify_normaloid_criterion(int trials, Index max_dim, int k, std::uint64_t seed,
                                         const MembershipOptions& opts) {
  return run_spec(make_spec("normaloid-criterion", {{"k", k}}, trials, max_dim, seed, opts));
}

std::vector<SuiteSpec> default_specs(const std::string& theorem, const SuiteConfig& config) {
  std::vector<std::map<std::string, int>> sets;
  if (theorem == "k-paranormal-root") {
    for (int n : {2, 3, 4})
      for (int k : {1, 2}) sets.push_back({{"n", n}, {"k", k}});
  } else if (theorem == "k-quasi-decomposition") {
    sets = {{{"n", 2}, {"k", 1}}, {{"n", 3}, {"k", 1}}, {{"n", 3}, {"k", 2}}};
  } else if (theorem == "coprime") {
    sets = {{{"m", 2}, {"n", 3}}, {{"m", 3}, {"n", 2}}};
  } else if (theorem == "embry") {
    sets = {{{"kmax", 3}}};
  } else if (theorem == "normaloid-criterion") {
    sets = {{{"k", 1}}, {{"k", 2}}};
  } else {
    trial_fn(theorem);
    sets = {{}};
  }
  std::vector<SuiteSpec> specs;
  for (auto& params : sets) {
    auto s = make_spec(theorem, std::move(params), config.trials, config.max_dim, config.seed, config.membership);
    s.inject_failure = config.inject_failure;
    specs.push_back(std::move(s));
  }
  return specs;
}

std::vector<TheoremReport> run_suite(const SuiteConfig& config) {
  std::vector<std::string> ids;
  for (const auto& id : config.suites) {
    if (id == "all")
      ids.insert(ids.end(), kSuites.begin(), kSuites.end());
    else
      ids.push_back(id);
  }
  std::vector<SuiteSpec> specs;
  for (const auto& id : ids)
    for (auto& s : default_specs(id, config)) specs.push_back(std::move(s));
  std::vector<TheoremReport> reports;
  for (const auto& s : specs) reports.push_back(run_spec(s));
  return reports;
}

int total_failures(const std::vector<TheoremReport>& reports) {
  int total = 0;
  for (const auto& r : reports) total += int(r.failures.size());
  return total;
}

SearchReport search_q2(int trials, Index max_dim, int n, std::uint64_t seed, const MembershipOptions& opts) {
  if (max_dim < 2) throw Error(ErrorCode::InvalidArgument, "max_dim must be >= 2");
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "n must be >= 2");
  const auto start = Clock::now();
  SearchReport report;
  report.trials = trials;
  report.n = n;
  report.tolerances = opts.tol;
  const auto base = derive_seed(seed, string_hash("search-q2"));
  for (int trial = 0; trial < trials; ++trial) {
    const auto s = derive_seed(base, std::uint64_t(trial));
    const Index dim = 2 + Index(s % std::uint64_t(max_dim - 1));
    Matrix t;
    switch (trial % 3) {
      case 0: t = random_ginibre(dim, s); break;
      case 1: t = k_quasi_member(dim / 2, dim - dim / 2, 1, s); break;
      default: t = normaloid_counterexample(std::max<Index>(1, dim - 2), 2, s);
    }
    auto o = opts;
    o.seed = s;
    const auto para = is_paranormal(t, o);
    const auto power = is_quasinormal(matrix_power(t, n), o.tol);
    if (para.status == Status::Inconclusive || power.status == Status::Inconclusive) {
      ++report.inconclusive;
      continue;
    }
    if (!member(para) || !member(power)) continue;
    ++report.hypothesis_met;
    if (is_quasinormal(t, o.tol).status == Status::NonMember) report.candidates.push_back(s);
  }
  report.wall_time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return report;
}

}  // namespace opclass
