#pragma once

// Structural decompositions: the maximal normal part of a matrix, the
// normal (+) nilpotent split of a k-quasi-paranormal root of a normal matrix,
// and the canonical [[0, C], [0, 0]] form of index-2 nilpotents.

#include <cstdint>
#include <string>
#include <vector>

#include "opclass/linalg.hpp"
#include "opclass/membership.hpp"

namespace opclass {

enum class BlockLabel { NormalPart, PurePart, NilpotentPart };
std::string to_string(BlockLabel label);

struct DecompositionResiduals {
  double reassembly = 0;   // ||Q blockdiag(blocks) Q* - T||_F
  double normality = 0;    // ||self-commutator|| of the NormalPart block
  double nilpotency = 0;   // ||B^m||_F for the NilpotentPart block and claimed index m
};

/// Q* T Q = blockdiag(blocks), Q unitary. Blocks with dimension 0 are not
/// stored; `block_dims` always matches `blocks`.
struct Decomposition {
  Matrix change_of_basis;
  std::vector<Index> block_dims;
  std::vector<Matrix> blocks;
  std::vector<BlockLabel> labels;
  DecompositionResiduals residuals;
  int nil_index_bound = 0;            // claimed bound for the NilpotentPart block, 0 if none
  std::uint64_t source_hash = 0;

  Matrix block_diagonal() const;
  Matrix reassemble() const { return change_of_basis * block_diagonal() * change_of_basis.adjoint(); }
  /// Block with the given label, or an empty matrix when absent.
  Matrix block(BlockLabel label) const;
  Index dim(BlockLabel label) const;
};

/// Radjavi-Rosenthal blocks: T = A (+) [[B, C], [0, -B]].
struct RRForm {
  Matrix a, b, c;
  Index dim() const { return a.rows() + 2 * b.rows(); }
};

struct Nilpotent2Form {
  Decomposition decomposition;   // blocks: [[0, C], [0, 0]] (NilpotentPart), then zero (NormalPart) if any
  RRForm form;                   // a = zero block, b = 0, c = C
};

/// FNV-1a over the bit patterns of the entries.
std::uint64_t matrix_hash(const Matrix& t);

/// Maximal reducing subspace on which T is normal, by the fixed point
/// V <- V cap T^{-1}V cap T*^{-1}V from the kernel of the self-commutator.
Decomposition normal_pure_split(const Matrix& t, const Tolerances& tol = {});

/// T = T' (+) T'' with T' normal and T'' pure nilpotent of index at most
/// min(n, k+1); requires T k-quasi-paranormal and T^n normal.
Decomposition root_decompose(const Matrix& t, int n, int k, const MembershipOptions& opts = {});

Nilpotent2Form nilpotent2_canonical(const Matrix& t, const Tolerances& tol = {});

/// Validates the blocks and returns A (+) [[B, C], [0, -B]].
Matrix rr_assemble(const Matrix& a, const Matrix& b, const Matrix& c, const Tolerances& tol = {});

/// Member iff T^2 is normal.
MembershipVerdict rr_check(const Matrix& t, const Tolerances& tol = {});

}  // namespace opclass
