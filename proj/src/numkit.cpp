#include "commlab/numkit.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "commlab/errors.hpp"

namespace commlab::numkit {

namespace {

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw ShapeError(std::string(what) + ": expected a square matrix, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

}  // namespace

ComplexMatrix EigenDecomposition::reconstruct() const {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) d[static_cast<Eigen::Index>(i)] = values[i];
  return vectors * d.asDiagonal() * vectors.adjoint();
}

ComplexMatrix identity(std::size_t n) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

ComplexMatrix zeros(std::size_t rows, std::size_t cols) {
  return ComplexMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

ComplexMatrix diagonal(std::span<const double> values) {
  ComplexMatrix d = zeros(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = values[i];
  }
  return d;
}

ComplexMatrix diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

ComplexMatrix unit(std::size_t n, std::size_t row, std::size_t col) {
  ComplexMatrix e = zeros(n, n);
  e(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
  return e;
}

ComplexVector basis_vector(std::size_t n, std::size_t k) {
  ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(n));
  e[static_cast<Eigen::Index>(k)] = 1.0;
  return e;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "commutator");
  require_square(b, "commutator");
  if (a.rows() != b.rows()) {
    throw ShapeError("commutator: dimension mismatch " + std::to_string(a.rows()) + " vs " +
                     std::to_string(b.rows()));
  }
  return a * b - b * a;
}

ComplexMatrix self_commutator(const ComplexMatrix& y) {
  require_square(y, "self_commutator");
  return y.adjoint() * y - y * y.adjoint();
}

double hs_norm(const ComplexMatrix& a) { return a.norm(); }

RealVector singular_values(const ComplexMatrix& a) {
  if (a.size() == 0) return {};
  if (!a.allFinite()) throw NumericError("singular_values: input has non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const Eigen::VectorXd& s = svd.singularValues();
  RealVector out(s.data(), s.data() + s.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i])) {
      throw NumericError("SVD did not converge: singular value " + std::to_string(i) +
                         " is not finite (matrix " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ")");
    }
  }
  return out;
}

double trace_norm(const ComplexMatrix& a) {
  const RealVector s = singular_values(a);
  return std::accumulate(s.begin(), s.end(), 0.0);
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).norm() <= tol * (1.0 + a.norm());
}

EigenDecomposition hermitian_eigen(const ComplexMatrix& a) {
  require_square(a, "hermitian_eigen");
  const double skew = (a - a.adjoint()).norm();
  if (skew > 1e-9 * (1.0 + a.norm())) {
    throw DomainError("hermitian_eigen: input is not Hermitian (||A - A*||_F = " +
                      std::to_string(skew) + ")");
  }
  const auto n = a.rows();
  EigenDecomposition out;
  if (n == 0) {
    out.vectors = ComplexMatrix(0, 0);
    return out;
  }
  const Eigen::MatrixXcd sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericError("hermitian_eigen: eigensolver did not converge for dimension " +
                       std::to_string(n));
  }
  const Eigen::VectorXd& vals = solver.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return vals[i] > vals[j]; });
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values[static_cast<std::size_t>(k)] = vals[src];
    out.vectors.col(k) = solver.eigenvectors().col(src);
  }
  return out;
}

OrthonormalBasis::OrthonormalBasis(std::size_t dimension, double tolerance, bool normalize_phase)
    : columns_(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dimension),
                                      static_cast<Eigen::Index>(dimension))),
      tolerance_(tolerance),
      normalize_phase_(normalize_phase) {}

bool OrthonormalBasis::try_add(const ComplexVector& v) {
  if (v.size() != columns_.rows()) {
    throw ShapeError("gram_schmidt: vector of length " + std::to_string(v.size()) +
                     " in a space of dimension " + std::to_string(columns_.rows()));
  }
  if (full()) return false;
  const double input_norm = v.norm();
  ComplexVector w = v;
  const auto q = columns_.leftCols(static_cast<Eigen::Index>(count_));
  for (int pass = 0; pass < 2; ++pass) {
    w -= q * (q.adjoint() * w);
  }
  const double residual = w.norm();
  if (residual <= tolerance_ * (1.0 + input_norm)) return false;
  w /= residual;
  if (normalize_phase_) {
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double mag = std::abs(w[i]);
      if (mag > tolerance_) {
        w *= std::conj(w[i]) / mag;
        w[i] = mag;
        break;
      }
    }
  }
  columns_.col(static_cast<Eigen::Index>(count_)) = w;
  ++count_;
  return true;
}

ComplexMatrix OrthonormalBasis::matrix() const {
  return columns_.leftCols(static_cast<Eigen::Index>(count_));
}

GramSchmidtResult gram_schmidt(std::span<const ComplexVector> vectors, double tolerance) {
  GramSchmidtResult out;
  if (vectors.empty()) {
    out.basis = ComplexMatrix(0, 0);
    return out;
  }
  const auto dim = static_cast<std::size_t>(vectors.front().size());
  OrthonormalBasis basis(dim, tolerance);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (basis.try_add(vectors[i])) out.accepted.push_back(i);
  }
  out.basis = basis.matrix();
  return out;
}

bool is_unitary(const ComplexMatrix& u, double tolerance) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm() <= tolerance;
}

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

Complex trace(const ComplexMatrix& a) { return a.diagonal().sum(); }

// --- text format -------------------------------------------------------------

void write_matrix(std::ostream& out, const ComplexMatrix& a) {
  char buf[96];
  out << a.rows() << ' ' << a.cols() << '\n';
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", a(i, j).real(), a(i, j).imag());
      out << buf;
    }
  }
}

std::string format_matrix(const ComplexMatrix& a) {
  std::ostringstream os;
  write_matrix(os, a);
  return os.str();
}

namespace {

// Splits a line into whitespace separated tokens.
std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_real(std::string_view tok, std::size_t line_no) {
  double value = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("invalid number '" + std::string(tok) + "'", line_no);
  }
  if (!std::isfinite(value)) {
    throw ParseError("non-finite entry '" + std::string(tok) + "'", line_no);
  }
  return value;
}

long parse_count(std::string_view tok, std::size_t line_no) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 0) {
    throw ParseError("invalid dimension '" + std::string(tok) + "'", line_no);
  }
  return value;
}

}  // namespace

ComplexMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!tokens(line).empty()) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError("empty matrix file: expected 'rows cols'", 1);
  auto header = tokens(line);
  if (header.size() != 2) throw ParseError("header must be 'rows cols'", line_no);
  const long rows = parse_count(header[0], line_no);
  const long cols = parse_count(header[1], line_no);
  ComplexMatrix a(rows, cols);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      if (!next_line()) {
        throw ParseError("unexpected end of file: expected " + std::to_string(rows * cols) +
                             " entries, got " + std::to_string(i * cols + j),
                         line_no + 1);
      }
      auto parts = tokens(line);
      if (parts.size() != 2) throw ParseError("entry must be 're im'", line_no);
      a(i, j) = Complex(parse_real(parts[0], line_no), parse_real(parts[1], line_no));
    }
  }
  if (next_line()) throw ParseError("trailing content after matrix entries", line_no);
  return a;
}

ComplexMatrix parse_matrix(const std::string& text) {
  std::istringstream is(text);
  return read_matrix(is);
}

ComplexMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'", 0);
  try {
    return read_matrix(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.detail(), e.line());
  }
}

}  // namespace commlab::numkit
