#pragma once

// Membership of a square complex matrix in the operator classes between
// "normal" and "normaloid". Inequality-defined classes that quantify over all
// vectors are decided twice: once through a Hermitian pencil that must be PSD
// for every positive parameter, once by minimizing the defining defect over
// the unit sphere. The two routes share no code beyond linalg.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opclass/linalg.hpp"

namespace opclass {

enum class ClassLabel {
  Normal,
  Quasinormal,
  Hyponormal,
  PHyponormal,
  ClassA,
  Paranormal,
  KParanormal,
  AbsoluteKParanormal,
  KQuasiParanormal,
  Normaloid,
};

struct OperatorClass {
  ClassLabel label = ClassLabel::Normal;
  int k = 0;       // KParanormal, AbsoluteKParanormal (k >= 1), KQuasiParanormal (k >= 0)
  double p = 1.0;  // PHyponormal, 0 < p <= 1

  static OperatorClass normal() { return {ClassLabel::Normal}; }
  static OperatorClass quasinormal() { return {ClassLabel::Quasinormal}; }
  static OperatorClass hyponormal() { return {ClassLabel::Hyponormal}; }
  static OperatorClass p_hyponormal(double p);
  static OperatorClass class_a() { return {ClassLabel::ClassA}; }
  static OperatorClass paranormal() { return {ClassLabel::Paranormal}; }
  static OperatorClass k_paranormal(int k);
  static OperatorClass absolute_k_paranormal(int k);
  /// k = 0 yields Paranormal.
  static OperatorClass k_quasi_paranormal(int k);
  static OperatorClass normaloid() { return {ClassLabel::Normaloid}; }

  std::string name() const;

  friend bool operator==(const OperatorClass&, const OperatorClass&) = default;
  friend bool operator<(const OperatorClass& a, const OperatorClass& b) {
    if (a.label != b.label) return a.label < b.label;
    if (a.k != b.k) return a.k < b.k;
    return a.p < b.p;
  }
};

enum class Status { Member, NonMember, Inconclusive };
enum class Oracle { Pencil, Sphere, Algebraic };

std::string to_string(Status s);
std::string to_string(Oracle o);

struct Witness {
  std::optional<Vector> vector;
  std::optional<double> lambda;
};

struct MembershipVerdict {
  Status status = Status::Inconclusive;
  double defect = 0;   // signed; negative means the defining relation is violated
  double scale = 1;    // the max(1, ||T||^d) the thresholds were multiplied by
  Witness witness;
  Oracle oracle = Oracle::Algebraic;
  std::uint64_t seed = 0;
  std::string note;    // error detail when a check was aborted
};

/// P(lambda) = sum_j coefficient_j * lambda^exponent_j * matrix_j, lambda in
/// [lambda_lo, lambda_max].
struct PencilTerm {
  Matrix matrix;
  double coefficient = 1;
  double exponent = 0;
};

struct PencilSpec {
  std::vector<PencilTerm> terms;
  double lambda_lo = 1e-6;
  double lambda_max = 4;
  double scale = 1;
  int grid_points = 257;

  Matrix evaluate(double lambda) const;
  void validate(const Tolerances& tol) const;
};

/// Pencils whose positivity for every lambda > 0 characterizes a class. The
/// parameter window is [1e-6 s, 4 s] with s = max(1, ||T||^2).
PencilSpec k_quasi_paranormal_pencil(const Matrix& t, int k);
PencilSpec k_paranormal_pencil(const Matrix& t, int k);
PencilSpec absolute_k_paranormal_pencil(const Matrix& t, int k);

MembershipVerdict pencil_check(const PencilSpec& pencil, const Tolerances& tol = {});

/// Defect as a function of a unit vector; the class holds iff it is >= 0
/// everywhere on the sphere.
using SphereDefect = std::function<double(const Vector&)>;

struct SphereOptions {
  int restarts = 6;
  std::uint64_t seed = 0;
  double scale = 1;
  std::vector<Vector> warm_starts;
  int max_iterations = 150;
};

MembershipVerdict sphere_check(const SphereDefect& defect, Index dim, const SphereOptions& options,
                               const Tolerances& tol = {});

/// Exact defining defects, evaluated from scratch for a (not necessarily
/// unit) vector and normalized by ||x|| to the homogeneous degree.
double k_quasi_paranormal_defect(const Matrix& t, int k, const Vector& x);
double k_paranormal_defect(const Matrix& t, int k, const Vector& x);
double absolute_k_paranormal_defect(const Matrix& t, int k, const Vector& x);

/// Options shared by the dual-oracle predicates.
struct MembershipOptions {
  Tolerances tol;
  std::uint64_t seed = 0;
  int restarts = 6;
};

MembershipVerdict is_normal(const Matrix& t, const Tolerances& tol = {});
MembershipVerdict is_quasinormal(const Matrix& t, const Tolerances& tol = {});
MembershipVerdict quasinormal_embry(const Matrix& t, int kmax, const Tolerances& tol = {});
MembershipVerdict is_hyponormal(const Matrix& t, const Tolerances& tol = {});
MembershipVerdict is_p_hyponormal(const Matrix& t, double p, const Tolerances& tol = {});
MembershipVerdict is_class_a(const Matrix& t, const Tolerances& tol = {});
MembershipVerdict is_normaloid(const Matrix& t, const Tolerances& tol = {});

MembershipVerdict is_k_quasi_paranormal(const Matrix& t, int k, const MembershipOptions& opts = {});
MembershipVerdict is_paranormal(const Matrix& t, const MembershipOptions& opts = {});
MembershipVerdict is_k_paranormal(const Matrix& t, int k, const MembershipOptions& opts = {});
MembershipVerdict is_absolute_k_paranormal(const Matrix& t, int k, const MembershipOptions& opts = {});

/// Pencil and sphere verdicts before reconciliation.
struct OraclePair {
  MembershipVerdict pencil;
  MembershipVerdict sphere;
};
enum class PencilFamily { KQuasiParanormal, KParanormal, AbsoluteKParanormal };
OraclePair run_oracles(const Matrix& t, PencilFamily family, int k, const MembershipOptions& opts = {});

MembershipVerdict check_class(const Matrix& t, const OperatorClass& cls, const MembershipOptions& opts = {});

struct Classification {
  std::map<OperatorClass, MembershipVerdict> verdicts;
  std::vector<std::string> chain_violations;
};

/// Every predicate for the given parameter lists (defaults k = {1,2,3},
/// p = {1/2}); errors are recorded per class as Inconclusive with a note.
Classification classify_all(const Matrix& t, const std::vector<int>& k_list = {1, 2, 3},
                            const std::vector<double>& p_list = {0.5}, const MembershipOptions& opts = {});

/// Implications among definite verdicts that must hold by the inclusion
/// chains; returns a description of every violated implication.
std::vector<std::string> chain_violations(const std::map<OperatorClass, MembershipVerdict>& verdicts);

}  // namespace opclass
