#pragma once

// Seeded constructions of structured matrices: class members,
// counterexamples and theorem-hypothesis instances. Every generator is a pure
// function of its arguments; equal inputs give bitwise-equal output.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opclass/linalg.hpp"
#include "opclass/membership.hpp"

namespace opclass {

/// Complex Ginibre matrix with entries of variance 1/dim.
Matrix random_ginibre(Index dim, std::uint64_t seed);

/// Haar unitary: QR of a complex Gaussian matrix with the phases of R's
/// diagonal moved into Q.
Matrix random_unitary(Index dim, std::uint64_t seed);

/// U diag(eigenvalues) U*; eigenvalues default to uniform in the unit disk.
Matrix random_normal(Index dim, std::uint64_t seed, const std::optional<std::vector<Complex>>& eigenvalues = {});

/// Eigenvalues uniform in the annulus r_lo <= |z| <= r_hi.
std::vector<Complex> annulus_eigenvalues(Index dim, std::uint64_t seed, double r_lo, double r_hi);

/// Nilpotent Jordan block of size n (ones on the superdiagonal).
Matrix jordan_block(Index n);

/// Direct sum of nilpotent Jordan blocks with largest block `index`, other
/// block sizes drawn from the seed, conjugated by a random unitary.
Matrix jordan_nilpotent(Index dim, int index, std::uint64_t seed);

/// M (+) N with M normal, eigenvalue moduli in [1/2, 1], N^2 = 0 and
/// ||N|| = ||M|| / 2. Normaloid, T^2 normal, T not normal.
Matrix normaloid_counterexample(Index dim_m, Index dim_n, std::uint64_t seed);

/// lambda^{1/n} V diag(omega^j) V* with omega = exp(2 pi i / n), j cycling
/// through 0..n-1; satisfies T^n = lambda I.
Matrix root_of_scalar_instance(Index dim, int n, Complex lambda, std::uint64_t seed);

/// Normal part (eigenvalue moduli in [1/2, 1]) plus a nilpotent of index at
/// most k+1, conjugated by a random unitary.
Matrix k_quasi_member(Index dim_normal, Index dim_nil, int k, std::uint64_t seed);

struct RRBlocks {
  Matrix a, b, c;
};

/// Valid blocks for A (+) [[B, C], [0, -B]]: A normal (moduli in [1/2, 1]),
/// B and C simultaneously diagonal in a random basis with C > 0.
RRBlocks rr_blocks(Index dim_a, Index dim_b, std::uint64_t seed, bool zero_b = false);
Matrix rr_instance(Index dim_a, Index dim_b, std::uint64_t seed, bool zero_b = false);

/// Smallest n with ||T^n||_F <= tol.eq * max(1, ||T||^n), or 0 if none up to dim.
int nil_index(const Matrix& t, const Tolerances& tol = {});

/// Generator request as parsed from JSON or the command line.
struct GenSpec {
  std::string kind;   // ginibre, unitary, normal, jordan, counterexample, scalar-root, k-quasi, rr
  Index dim = 2;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;   // kind-specific, e.g. index, k, n, dim_m, dim_n
  std::vector<Complex> eigenvalues;       // optional for kind "normal"
  Complex lambda{1.0, 0.0};               // scalar-root

  double param(const std::string& key, double fallback) const;
};

Matrix generate(const GenSpec& spec);

/// Verdicts that back the generator's advertised class memberships, keyed by
/// a short claim name; `certified` is false when any claim fails.
struct Certification {
  std::map<std::string, MembershipVerdict> verdicts;
  std::map<std::string, double> values;
  bool certified = true;
};

Certification certify(const GenSpec& spec, const Matrix& t, const MembershipOptions& opts = {});

}  // namespace opclass
