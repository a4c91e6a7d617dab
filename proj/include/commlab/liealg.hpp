#pragma once

// Finite-dimensional Lie algebra tools: root data of sl(r+1, C), the
// Killing form computed from ad-matrices, a semisimplicity test and the
// root-space self-commutator solver.

#include <cstddef>
#include <vector>

#include "commlab/numkit.hpp"
#include "commlab/report.hpp"
#include "commlab/selfcomm.hpp"

namespace commlab::liealg {

/// Matrix units and Cartan generators of sl(r+1, C). Indices are 1-based.
class SlRootData {
public:
  /// Builds the data and, with verify set, checks the structure relations
  /// exactly (O(n^7); skip it in hot loops). Throws ConstructionError on
  /// failure and DomainError for r = 0.
  explicit SlRootData(std::size_t rank, bool verify = true);

  /// E_jk E_kl = E_jl, E_jk E_ql = 0 (k != q), [E_jk, E_kj] = E_jj - E_kk.
  void verify_structure() const;

  std::size_t rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return rank_ + 1; }

  /// E_{jk}.
  ComplexMatrix unit(std::size_t j, std::size_t k) const;
  /// H_j = E_{jj} - E_{j+1,j+1}, 1 <= j <= r.
  ComplexMatrix cartan(std::size_t j) const;
  /// Root vector of alpha_{j,j+1}: E_{j,j+1}.
  ComplexMatrix simple_root_vector(std::size_t j) const;
  /// Root vector of -alpha_{j,j+1}: E_{j+1,j}.
  ComplexMatrix negative_root_vector(std::size_t j) const;
  /// Defining matrix E_{jj} - E_{kk} of the root alpha_{jk}.
  ComplexMatrix root_matrix(std::size_t j, std::size_t k) const;
  /// alpha_{jk}(h) = Tr((E_jj - E_kk) h).
  Complex root_value(std::size_t j, std::size_t k, const ComplexMatrix& h) const;

  /// E_{jk} (j != k, row-major order) followed by H_1..H_r.
  std::vector<ComplexMatrix> basis() const;

private:
  std::size_t rank_;
};

/// Coordinates of matrices in a fixed basis via least squares.
class BasisExpansion {
public:
  explicit BasisExpansion(const std::vector<ComplexMatrix>& basis);

  std::size_t dimension() const noexcept { return count_; }
  std::size_t rank() const noexcept;
  /// Coordinates of x; `residual` receives ||x - sum c_m basis_m||_F.
  Eigen::VectorXcd coordinates(const ComplexMatrix& x, double* residual = nullptr) const;
  /// ad X in this basis: column m holds the coordinates of [X, basis_m].
  /// DomainError when X or a bracket leaves the span (residual > 1e-8 (1+norm)).
  Eigen::MatrixXcd ad(const ComplexMatrix& x) const;

private:
  std::vector<ComplexMatrix> basis_;
  Eigen::MatrixXcd columns_;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> solver_;
  std::size_t count_;
};

/// B(X, W) = Tr(ad X ad W) over the algebra spanned by algebra_basis.
Complex killing_form(const ComplexMatrix& x, const ComplexMatrix& w,
                     const std::vector<ComplexMatrix>& algebra_basis);

/// Gram matrix of the Killing form on the basis.
Eigen::MatrixXcd killing_gram(const std::vector<ComplexMatrix>& algebra_basis);

/// True iff the Killing Gram matrix has smallest singular value >= 1e-8
/// times the largest. DomainError when the basis is dependent or not closed
/// under the bracket.
bool is_semisimple(const std::vector<ComplexMatrix>& algebra_basis);

struct SlSolution {
  std::vector<double> coefficients;  ///< a_j, the H_j coefficients of diag(c)
  std::vector<double> eigenvalues;   ///< c_1 >= ... >= c_{r+1}
  ComplexMatrix eigenbasis;
  ComplexMatrix solution;            ///< Y with [Y*, Y] = A
  double residual = 0.0;
  SolveReport report;
};

/// Root-space solver on sl(r+1): diagonalize A, expand diag(c) = sum a_j H_j
/// and set Y = sum sqrt(a_j) X_{-alpha_j} in the eigenbasis. Same pipeline
/// as selfcomm::solve_type_A.
SlSolution solve_sl(const ComplexMatrix& a);

struct OberwolfachSplit {
  ComplexMatrix x1, x2, y1, y2;
  double residual = 0.0;  ///< ||[X1,X2] + [Y1,Y2] - A||_F
};

/// A = [X1, X2] + [Y1, Y2] for traceless A, from the self-commutator
/// solutions of its Hermitian and skew-Hermitian parts.
OberwolfachSplit oberwolfach_split(const ComplexMatrix& a);

}  // namespace commlab::liealg
