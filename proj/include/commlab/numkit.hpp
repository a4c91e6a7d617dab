#pragma once

// Dense complex matrix kernel shared by every other module.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace commlab {

using Complex = std::complex<double>;
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = std::vector<double>;

namespace numkit {

inline constexpr double kDefaultRejectTolerance = 1e-10;

/// Eigenpairs of a Hermitian matrix. values are non-increasing and column j
/// of vectors is the unit eigenvector for values[j].
struct EigenDecomposition {
  RealVector values;
  ComplexMatrix vectors;

  /// V diag(values) V*.
  ComplexMatrix reconstruct() const;
};

struct GramSchmidtResult {
  ComplexMatrix basis;               ///< orthonormal columns
  std::vector<std::size_t> accepted;  ///< input indices that produced a column
};

// --- construction helpers ---------------------------------------------------

ComplexMatrix identity(std::size_t n);
ComplexMatrix zeros(std::size_t rows, std::size_t cols);
ComplexMatrix diagonal(std::span<const double> values);
ComplexMatrix diagonal(std::initializer_list<double> values);
/// Matrix unit with a 1 at (row, col), 0-based.
ComplexMatrix unit(std::size_t n, std::size_t row, std::size_t col);
ComplexVector basis_vector(std::size_t n, std::size_t k);

// --- core operations --------------------------------------------------------

/// AB - BA. Throws ShapeError unless both are square of equal size.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Y*Y - YY*. Throws ShapeError if y is not square.
ComplexMatrix self_commutator(const ComplexMatrix& y);

/// Frobenius (Hilbert-Schmidt) norm.
double hs_norm(const ComplexMatrix& a);

/// Sum of singular values. Throws NumericError if the SVD does not produce
/// finite singular values.
double trace_norm(const ComplexMatrix& a);

/// Singular values, non-increasing.
RealVector singular_values(const ComplexMatrix& a);

/// ||A - A*||_F <= tol * (1 + ||A||_F).
bool is_hermitian(const ComplexMatrix& a, double tol = 1e-9);

/// Eigendecomposition of a Hermitian matrix with values sorted
/// non-increasing; equal values keep the solver's order. Throws DomainError
/// when ||A - A*||_F > 1e-9 (1 + ||A||_F) and NumericError on solver failure.
EigenDecomposition hermitian_eigen(const ComplexMatrix& a);

/// Twice-applied classical Gram-Schmidt over vectors in order. A vector is
/// rejected when its residual norm is <= tolerance * (1 + its norm).
GramSchmidtResult gram_schmidt(std::span<const ComplexVector> vectors,
                               double tolerance = kDefaultRejectTolerance);

/// ||U*U - I||_F <= tolerance. False for non-square input.
bool is_unitary(const ComplexMatrix& u, double tolerance);

/// Largest |entry| of a, 0 for empty.
double max_abs(const ComplexMatrix& a);

/// Sum of the diagonal.
Complex trace(const ComplexMatrix& a);

/// Incrementally built orthonormal set, used by gram_schmidt and by the
/// staircase generator. Each accepted column can optionally be rotated so
/// that its first coordinate of modulus above the rejection tolerance is
/// real and positive.
class OrthonormalBasis {
public:
  OrthonormalBasis(std::size_t dimension, double tolerance, bool normalize_phase = false);

  /// Orthogonalizes v against the current columns (two passes) and appends
  /// it unless rejected. Returns whether v was accepted.
  bool try_add(const ComplexVector& v);

  std::size_t size() const noexcept { return count_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(columns_.rows()); }
  bool full() const noexcept { return count_ == dimension(); }
  ComplexVector column(std::size_t k) const { return columns_.col(static_cast<Eigen::Index>(k)); }
  /// dimension x size() matrix of accepted columns.
  ComplexMatrix matrix() const;

private:
  Eigen::MatrixXcd columns_;
  std::size_t count_ = 0;
  double tolerance_;
  bool normalize_phase_;
};

// --- matrix text format -----------------------------------------------------
//
// First line "rows cols", then rows*cols lines "re im" in row-major order,
// each written with 17 significant digits so doubles round-trip exactly.

void write_matrix(std::ostream& out, const ComplexMatrix& a);
std::string format_matrix(const ComplexMatrix& a);
/// Throws ParseError carrying the offending line number.
ComplexMatrix read_matrix(std::istream& in);
ComplexMatrix parse_matrix(const std::string& text);
ComplexMatrix load_matrix(const std::string& path);

}  // namespace numkit
}  // namespace commlab
