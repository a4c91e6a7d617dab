#pragma once

// Self-commutator equations [Y*, Y] = T for the full matrix algebra
// (type A) and for the symplectic algebra defined by an anti-conjugation
// (type C).

#include <cstddef>
#include <vector>

#include "commlab/numkit.hpp"
#include "commlab/report.hpp"

namespace commlab::selfcomm {

/// Conjugate-linear isometry J v = K conj(v) with J^2 = -1, stored through
/// the unitary K (K conj(K) = -I).
///
/// The standard pairing on C^{2m} orders the basis as
/// (b_1, ..., b_m, b_{-1}, ..., b_{-m}) and sets J b_n = -b_{-n},
/// J b_{-n} = b_n.
class AntiConjugation {
public:
  /// Standard pairing on C^{2m}. Throws DomainError for m = 0.
  static AntiConjugation standard(std::size_t m);
  /// Wraps an arbitrary K; throws DomainError unless K is unitary and
  /// K conj(K) = -I to 1e-10.
  static AntiConjugation from_matrix(ComplexMatrix k);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(k_.rows()); }
  std::size_t pairs() const noexcept { return dimension() / 2; }
  const ComplexMatrix& matrix() const noexcept { return k_; }

  ComplexVector apply(const ComplexVector& v) const;
  ComplexVector apply_inverse(const ComplexVector& v) const;
  /// J X J^{-1} as a complex-linear matrix: -K conj(X) conj(K).
  ComplexMatrix conjugate(const ComplexMatrix& x) const;
  /// The anti-conjugation V J V* for unitary V (matrix V K V^T).
  AntiConjugation transformed(const ComplexMatrix& v) const;
  /// J as a real-linear map on R^{2d}, coordinates (Re v, Im v).
  Eigen::MatrixXd real_matrix() const;

private:
  explicit AntiConjugation(ComplexMatrix k) : k_(std::move(k)) {}
  ComplexMatrix k_;
};

AntiConjugation make_anticonjugation(std::size_t m);

/// Conjugation J v = K conj(v) with J^2 = +1. The standard one is
/// entrywise conjugation (K = I).
struct Conjugation {
  ComplexMatrix k;
  static Conjugation standard(std::size_t n);
};

/// ||X + J X* J^{-1}||_F <= tolerance. ShapeError on dimension mismatch.
bool in_sp(const ComplexMatrix& x, const AntiConjugation& j, double tolerance);
/// ||X + J X* J^{-1}||_F.
double sp_defect(const ComplexMatrix& x, const AntiConjugation& j);
/// (X - J X* J^{-1}) / 2, the averaging projection onto sp.
ComplexMatrix project_sp(const ComplexMatrix& x, const AntiConjugation& j);

/// Type (B) membership, ||X + J X* J^{-1}||_F <= tolerance. No solver exists.
bool in_o(const ComplexMatrix& x, const Conjugation& j, double tolerance);

// --- type A ------------------------------------------------------------------

/// Sorts c descending and returns its running sums. DomainError unless
/// |sum c| <= 1e-9.
std::vector<double> partial_sums_sorted(std::vector<double> c);

struct TypeASolution {
  /// For each eigenvalue position (descending), the coordinate where its
  /// eigenvector has the largest modulus (lowest index on ties). For a
  /// diagonal T with distinct entries this is the sorting permutation.
  std::vector<std::size_t> permutation;
  std::vector<double> eigenvalues;    ///< c_1 >= ... >= c_d
  std::vector<double> partial_sums;   ///< a_j = c_1 + ... + c_j
  ComplexMatrix eigenbasis;           ///< V with T = V diag(c) V*
  ComplexMatrix shift;                ///< weighted shift in the eigenbasis
  ComplexMatrix solution;             ///< Y = V shift V*
  double residual = 0.0;              ///< ||[Y*,Y] - T||_F
};

/// Solves [Y*, Y] = T for Hermitian trace-zero T with the weighted shift
/// Y = sum_j sqrt(a_j) e_{j+1} e_j^* in the eigenbasis. DomainError for
/// non-Hermitian input or nonzero trace; ConsistencyError when the residual
/// exceeds 1e-9 (1 + ||T||_F).
TypeASolution solve_type_A(const ComplexMatrix& t);

struct Rearrangement {
  std::vector<std::size_t> order;
  std::vector<double> prefix_sums;
  double defect = 0.0;  ///< final sum
};

/// Greedy reordering keeping running sums nonnegative: take the most
/// negative unused term when it fits, otherwise the largest unused
/// nonnegative term. Leftover negatives follow in descending order.
Rearrangement rearrange_type_A(const std::vector<double>& lambda);

// --- type C ------------------------------------------------------------------

struct SpectralPairing {
  std::vector<double> lambdas;  ///< m values >= 0, positives descending then zeros
  /// Columns (b_1..b_m, b_{-1}..b_{-m}) with T b_n = lambda_n b_n and
  /// b_{-n} = -J b_n.
  ComplexMatrix basis;
  std::size_t kernel_dimension = 0;
  double pairing_defect = 0.0;  ///< max | lambda_k - |mu_k| | over matched +-pairs
};

/// Eigen-decomposes Hermitian T in sp and pairs the spectrum. Eigenvalues
/// with |lambda| <= 1e-9 ||T||_F count as zero. DomainError when T is not
/// Hermitian, not in sp, or the +- pairing fails (1e-8 (1 + ||T||_F)).
SpectralPairing spectral_pairing(const ComplexMatrix& t, const AntiConjugation& j);

struct TypeCSolution {
  ComplexMatrix solution;
  SpectralPairing pairing;
  double residual = 0.0;   ///< ||[Y*,Y] - T||_F
  double sp_defect = 0.0;  ///< ||Y + J Y* J^{-1}||_F
  SolveReport report;
};

/// Y = sum_n sqrt(lambda_n) E_{-n,n} in the paired basis, mapped back to the
/// input coordinates. The report asserts sp membership and the residual at
/// 1e-8 scale.
TypeCSolution solve_type_C(const ComplexMatrix& t, const AntiConjugation& j);

struct TypeCSplit {
  ComplexMatrix x;
  ComplexMatrix y;
  double residual = 0.0;  ///< ||[X*,X] + i[Y*,Y] - T||_F
  SolveReport report;
};

/// T = [X*,X] + i[Y*,Y] with X, Y in sp, for any T in sp.
TypeCSplit split_type_C(const ComplexMatrix& t, const AntiConjugation& j);

}  // namespace commlab::selfcomm
