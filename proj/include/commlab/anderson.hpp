#pragma once

// Block tri-diagonal commutator construction whose commutator [C, Z] is a
// diagonal operator with telescoping entries (d_k - d_{k-1}) / k.
//
// Blocks are indexed from 1 as in the formulas: A_n, X_n are n x (n+1) and
// B_n, Y_n are (n+1) x n. The assembled truncation with K generator blocks
// has diagonal blocks of sizes 1, 2, ..., K+1.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "commlab/numkit.hpp"
#include "commlab/report.hpp"

namespace commlab::anderson {

/// d_n = scale * n^power * log(n+1)^log_power.
struct PowerLog {
  double scale = 1.0;
  double power = 0.0;
  double log_power = 0.0;
};

struct ExplicitValues {
  std::vector<double> values;  ///< d_1, d_2, ...
};

/// A weight sequence d_1, d_2, ... plus a materialized prefix.
class WeightSequence {
public:
  using Family = std::variant<PowerLog, ExplicitValues>;

  /// Materializes `length` terms of a closed-form family.
  static WeightSequence power_log(double scale, double power, double log_power,
                                  std::size_t length);
  /// Prefix is the list itself. With monotone set, values must be >= 0 and
  /// non-decreasing (DomainError otherwise).
  static WeightSequence explicit_values(std::vector<double> values, bool monotone = false);
  static WeightSequence constant(double value, std::size_t length);

  const Family& family() const noexcept { return family_; }
  const std::vector<double>& prefix() const noexcept { return prefix_; }
  bool monotone() const noexcept { return monotone_; }
  std::size_t size() const noexcept { return prefix_.size(); }
  /// d_n for 1 <= n <= size(). Throws DomainError outside the prefix.
  double at(std::size_t n) const;

  /// Same family with every term multiplied by t.
  WeightSequence scaled(double t) const;

  /// Parses "powerlog:C,p,q" (materializing `length` terms) or a bare list
  /// "explicit:v1,v2,...". File references are resolved by the CLI.
  static WeightSequence parse(const std::string& spec, std::size_t length);

private:
  WeightSequence(Family family, std::vector<double> prefix, bool monotone);

  Family family_;
  std::vector<double> prefix_;
  bool monotone_ = false;
};

struct GeneratorBlocks {
  ComplexMatrix a;  ///< n x (n+1)
  ComplexMatrix b;  ///< (n+1) x n
  ComplexMatrix x;  ///< n x (n+1)
  ComplexMatrix y;  ///< (n+1) x n
};

/// The unscaled blocks A_n, B_n, X_n, Y_n. Throws DomainError for n = 0.
GeneratorBlocks make_blocks(std::size_t n);

struct IdentityResidual {
  std::string name;
  double residual = 0.0;
};

struct IdentityReport {
  std::size_t n = 0;
  std::vector<IdentityResidual> rows;
  double max_residual() const;
};

/// Checks the five block identities at level n with the unscaled blocks:
///   A_1 Y_1 - X_1 B_1                 = [1]
///   B_n X_n - Y_n A_n                 = -I_{n+1} / (n+1)
///   A_{n+1} Y_{n+1} - X_{n+1} B_{n+1} = +I_{n+1} / (n+1)
///   B_{n+1} Y_n - Y_{n+1} B_n         = 0
///   A_n X_{n+1} - X_n A_{n+1}         = 0
/// Throws ConstructionError naming the first identity whose residual
/// exceeds `tolerance`.
IdentityReport identity_checks(std::size_t n, double tolerance = 1e-12);

class BlockTriDiagonalOperator {
public:
  BlockTriDiagonalOperator() = default;
  /// Validates block shapes (ShapeError on violation). diag_blocks may be
  /// empty, meaning all zero.
  BlockTriDiagonalOperator(std::vector<ComplexMatrix> diag_blocks,
                           std::vector<ComplexMatrix> super_blocks,
                           std::vector<ComplexMatrix> sub_blocks);

  std::size_t block_count() const noexcept { return super_.size(); }
  /// 1 + 2 + ... + (block_count + 1).
  std::size_t dimension() const noexcept;

  const std::vector<ComplexMatrix>& diag_blocks() const noexcept { return diag_; }
  const std::vector<ComplexMatrix>& super_blocks() const noexcept { return super_; }
  const std::vector<ComplexMatrix>& sub_blocks() const noexcept { return sub_; }

private:
  std::vector<ComplexMatrix> diag_;
  std::vector<ComplexMatrix> super_;
  std::vector<ComplexMatrix> sub_;
};

/// 0-based row offset of 1-based diagonal block k: k(k-1)/2.
std::size_t block_offset(std::size_t k);

/// Dense matrix with the blocks placed tri-diagonally, zeros elsewhere.
ComplexMatrix assemble(const BlockTriDiagonalOperator& op);

struct ModifiedPair {
  BlockTriDiagonalOperator c;
  BlockTriDiagonalOperator z;
};

/// C has super blocks sqrt(d_n) A_n and sub blocks sqrt(d_n) B_n; Z likewise
/// with X_n and Y_n. Requires weights.size() >= block_count + 1 and d_n >= 0.
ModifiedPair build_modified(const WeightSequence& weights, std::size_t block_count);

struct BlockDiagonalRow {
  std::size_t block_index = 0;   ///< 1-based
  double diagonal_value = 0.0;   ///< mean of the block's diagonal
  double expected = 0.0;         ///< telescoping value (d_k - d_{k-1}) / k
  double residual = 0.0;         ///< max deviation from expected inside the block
  bool boundary = false;         ///< one of the last two blocks
};

struct PositiveCommutatorReport {
  std::size_t block_count = 0;
  std::size_t dimension = 0;
  std::vector<BlockDiagonalRow> blocks;
  double off_tridiagonal_mass = 0.0;  ///< max |entry| outside the block bands 0, +-2
  double interior_lu_mass = 0.0;      ///< max |entry| in L and U blocks
  double boundary_residual = 0.0;     ///< worst residual over the boundary blocks
  bool interior_positive = false;     ///< all interior diagonal entries > 0
  SolveReport report;

  /// Per-entry diagonal of the interior (blocks 1 .. K-1), repeated by size.
  std::vector<double> interior_diagonal() const;
  /// CSV "block_index,diagonal_value,residual".
  std::string to_csv() const;
};

/// Builds C and Z, computes [C, Z] on the truncation and checks the
/// structure. Throws VerificationError naming the block index when an
/// interior block misses the telescoping profile beyond tolerance. The two
/// last blocks are reported, never asserted. Requires block_count >= 3.
PositiveCommutatorReport verify_positive_commutator(const WeightSequence& weights,
                                                    std::size_t block_count,
                                                    double tolerance = 1e-10);

struct AdmissibilityReport {
  std::optional<bool> admissible;  ///< analytic verdict for PowerLog families
  double tail_max_ratio = 0.0;     ///< max d_n / n over the second half of the horizon
  std::size_t horizon = 0;
};

/// Decides d_n / n -> 0 for PowerLog families (p < 1, or p = 1 and q < 0,
/// or zero scale). Explicit sequences only get the tail diagnostic.
AdmissibilityReport admissible(const WeightSequence& weights, std::size_t horizon);

enum class Parameterization { Differences, CesaroForm };

struct EigenvalueProfile {
  std::vector<double> values;
  /// For CesaroForm: whether (1/n) sum d_j -> 0, decided for PowerLog only.
  std::optional<bool> cesaro_to_zero;
};

/// Differences: (d_1, (d_2-d_1)/2 x2, (d_3-d_2)/3 x3, ...).
/// CesaroForm:  (d_1, d_2/2 x2, d_3/3 x3, ...).
/// Truncated to `terms` entries; DomainError if the prefix is too short.
EigenvalueProfile eigenvalue_profile(const WeightSequence& weights, Parameterization param,
                                     std::size_t terms);

}  // namespace commlab::anderson
