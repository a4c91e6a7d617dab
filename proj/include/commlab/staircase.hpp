#pragma once

// Simultaneous staircase (banded) form of a finite family of operators via a
// unitary that fixes e_1.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "commlab/numkit.hpp"

namespace commlab::staircase {

struct StaircaseResult {
  ComplexMatrix unitary;                 ///< columns are the new basis, column 0 is e_1
  std::vector<ComplexMatrix> transformed;  ///< U* A_i U
  /// band_profile[i][r] is the largest 0-based column c with
  /// |transformed[i](r, c)| > tolerance, or -1 for an all-zero row.
  std::vector<std::vector<long>> band_profile;
  double tolerance = 0.0;
};

/// Row/column bound for 1-based index n: n(2N+1), or n(N+1) when self-adjoint.
std::size_t band_bound(std::size_t n, std::size_t op_count, bool selfadjoint);

/// Runs Gram-Schmidt over the stream
///   e_k, A_1 b_k, A_1* b_k, ..., A_N b_k, A_N* b_k     for k = 1, 2, ...
/// (the adjoint images are skipped when selfadjoint_hint is set) until a full
/// basis is accepted, normalizing each accepted vector so its first
/// significant coordinate is real positive. Throws DomainError for an empty
/// family, mismatched shapes, or a non-Hermitian input under
/// selfadjoint_hint.
StaircaseResult staircase_form(std::span<const ComplexMatrix> ops, bool selfadjoint_hint,
                               double tolerance = numkit::kDefaultRejectTolerance);

/// True iff every transformed operator has row n and column n confined
/// (entries above tolerance) to the first band_bound(n, N, selfadjoint)
/// indices.
bool verify_band(const StaircaseResult& result, std::size_t op_count, bool selfadjoint,
                 double tolerance);

/// Same scan applied to raw matrices (no transformation).
bool within_band(std::span<const ComplexMatrix> mats, std::size_t op_count, bool selfadjoint,
                 double tolerance);

/// ||U* D U - D||_F <= tolerance.
bool diagonal_invariance_check(const ComplexMatrix& d, const ComplexMatrix& u, double tolerance);

/// CSV "row_index,max_col,bound" for transformed operator `which`, 1-based
/// indices; max_col is 0 for an all-zero row.
std::string band_csv(const StaircaseResult& result, std::size_t which, std::size_t op_count,
                     bool selfadjoint);

}  // namespace commlab::staircase
