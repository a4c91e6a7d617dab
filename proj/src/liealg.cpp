#include "commlab/liealg.hpp"

#include <cmath>

#include "commlab/errors.hpp"

namespace commlab::liealg {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

Eigen::Map<const Eigen::VectorXcd> flat(const ComplexMatrix& m) {
  return {m.data(), m.size()};
}

}  // namespace

// --- SlRootData ----------------------------------------------------------------

SlRootData::SlRootData(std::size_t rank, bool verify) : rank_(rank) {
  if (rank == 0) throw DomainError("sl(r+1): rank must be >= 1");
  if (verify) verify_structure();
}

void SlRootData::verify_structure() const {
  const std::size_t n = size();
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t q = 1; q <= n; ++q) {
        for (std::size_t l = 1; l <= n; ++l) {
          const ComplexMatrix prod = unit(j, k) * unit(q, l);
          const ComplexMatrix expect = k == q ? unit(j, l) : numkit::zeros(n, n);
          if (prod != expect) {
            throw ConstructionError("matrix unit relation fails for E_" + std::to_string(j) +
                                    std::to_string(k) + " E_" + std::to_string(q) +
                                    std::to_string(l));
          }
        }
      }
      if (j != k && numkit::commutator(unit(j, k), unit(k, j)) != root_matrix(j, k)) {
        throw ConstructionError("[X_a, X_-a] != E_jj - E_kk for a = alpha_" + std::to_string(j) +
                                std::to_string(k));
      }
    }
  }
}

ComplexMatrix SlRootData::unit(std::size_t j, std::size_t k) const {
  return numkit::unit(size(), j - 1, k - 1);
}

ComplexMatrix SlRootData::cartan(std::size_t j) const { return root_matrix(j, j + 1); }

ComplexMatrix SlRootData::simple_root_vector(std::size_t j) const { return unit(j, j + 1); }

ComplexMatrix SlRootData::negative_root_vector(std::size_t j) const { return unit(j + 1, j); }

ComplexMatrix SlRootData::root_matrix(std::size_t j, std::size_t k) const {
  return unit(j, j) - unit(k, k);
}

Complex SlRootData::root_value(std::size_t j, std::size_t k, const ComplexMatrix& h) const {
  return numkit::trace(root_matrix(j, k) * h);
}

std::vector<ComplexMatrix> SlRootData::basis() const {
  std::vector<ComplexMatrix> out;
  const std::size_t n = size();
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t k = 1; k <= n; ++k) {
      if (j != k) out.push_back(unit(j, k));
    }
  }
  for (std::size_t j = 1; j <= rank_; ++j) out.push_back(cartan(j));
  return out;
}

// --- Killing form ------------------------------------------------------------

BasisExpansion::BasisExpansion(const std::vector<ComplexMatrix>& basis)
    : basis_(basis), count_(basis.size()) {
  if (basis.empty()) throw DomainError("algebra basis is empty");
  const Index rows = basis.front().size();
  columns_.resize(rows, idx(count_));
  for (std::size_t m = 0; m < count_; ++m) {
    if (basis[m].size() != rows || basis[m].rows() != basis[m].cols()) {
      throw ShapeError("algebra basis elements must be square of equal size");
    }
    columns_.col(idx(m)) = flat(basis[m]);
  }
  solver_.setThreshold(1e-10);
  solver_.compute(columns_);
}

std::size_t BasisExpansion::rank() const noexcept {
  return static_cast<std::size_t>(solver_.rank());
}

Eigen::VectorXcd BasisExpansion::coordinates(const ComplexMatrix& x, double* residual) const {
  if (x.size() != columns_.rows()) throw ShapeError("element has the wrong dimension");
  const Eigen::VectorXcd rhs = flat(x);
  Eigen::VectorXcd c = solver_.solve(rhs);
  if (residual) *residual = (columns_ * c - rhs).norm();
  return c;
}

Eigen::MatrixXcd BasisExpansion::ad(const ComplexMatrix& x) const {
  double res = 0.0;
  coordinates(x, &res);
  if (res > 1e-8 * (1.0 + x.norm())) {
    throw DomainError("element lies outside the span of the algebra basis (residual " +
                      std::to_string(res) + ")");
  }
  Eigen::MatrixXcd out(idx(count_), idx(count_));
  for (std::size_t m = 0; m < count_; ++m) {
    const ComplexMatrix br = numkit::commutator(x, basis_[m]);
    out.col(idx(m)) = coordinates(br, &res);
    if (res > 1e-8 * (1.0 + br.norm())) {
      throw DomainError("basis is not closed under the bracket (residual " + std::to_string(res) +
                        ")");
    }
  }
  return out;
}

Complex killing_form(const ComplexMatrix& x, const ComplexMatrix& w,
                     const std::vector<ComplexMatrix>& algebra_basis) {
  const BasisExpansion e(algebra_basis);
  return (e.ad(x) * e.ad(w)).trace();
}

Eigen::MatrixXcd killing_gram(const std::vector<ComplexMatrix>& algebra_basis) {
  const BasisExpansion e(algebra_basis);
  const std::size_t n = algebra_basis.size();
  std::vector<Eigen::MatrixXcd> ads;
  ads.reserve(n);
  for (const auto& b : algebra_basis) ads.push_back(e.ad(b));
  Eigen::MatrixXcd g(idx(n), idx(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) g(idx(i), idx(j)) = (ads[i] * ads[j]).trace();
  }
  return g;
}

bool is_semisimple(const std::vector<ComplexMatrix>& algebra_basis) {
  const BasisExpansion e(algebra_basis);
  if (e.rank() != e.dimension()) throw DomainError("algebra basis is linearly dependent");
  const Eigen::MatrixXcd g = killing_gram(algebra_basis);
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXcd>(g).singularValues();
  const double largest = s.size() ? s[0] : 0.0;
  if (!(largest > 0.0)) return false;
  return s[s.size() - 1] >= 1e-8 * largest;
}

// --- solvers -----------------------------------------------------------------

SlSolution solve_sl(const ComplexMatrix& a) {
  const auto base = selfcomm::solve_type_A(a);
  const std::size_t n = base.eigenvalues.size();
  SlSolution out;
  out.eigenvalues = base.eigenvalues;
  out.eigenbasis = base.eigenbasis;
  out.solution = base.solution;
  out.residual = base.residual;
  out.report.command = "lie solve-sl";
  if (n < 2) {
    out.report.check_at_most("residual", out.residual, 1e-9 * (1.0 + a.norm()));
    return out;
  }

  const SlRootData roots(n - 1, /*verify=*/false);
  out.coefficients.assign(base.partial_sums.begin(), base.partial_sums.end() - 1);
  // diag(c) = sum_j a_j H_j
  ComplexMatrix expansion = numkit::zeros(n, n);
  double min_coeff = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    expansion += out.coefficients[j - 1] * roots.cartan(j);
    min_coeff = std::min(min_coeff, out.coefficients[j - 1]);
  }
  const double expansion_err =
      (expansion - numkit::diagonal(std::span<const double>(out.eigenvalues))).norm();
  // Y = sum sqrt(a_j) X_{-alpha_j} in the eigenbasis
  ComplexMatrix shift = numkit::zeros(n, n);
  for (std::size_t j = 1; j < n; ++j) {
    shift += std::sqrt(std::max(0.0, out.coefficients[j - 1])) * roots.negative_root_vector(j);
  }
  const double shift_err = (shift - base.shift).norm();

  const double scale = 1.0 + a.norm();
  out.report.check_at_most("residual", out.residual, 1e-9 * scale);
  out.report.check_at_most("cartan_expansion", expansion_err, 1e-9 * scale);
  out.report.check_at_most("root_vector_form", shift_err, 1e-12 * scale);
  out.report.check_at_most("negative_coefficient", -min_coeff, 1e-12);
  return out;
}

OberwolfachSplit oberwolfach_split(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("oberwolfach_split: expected a square matrix");
  const double tr = std::abs(numkit::trace(a));
  if (tr > 1e-9 * (1.0 + a.norm())) {
    throw DomainError("oberwolfach_split: trace-zero required (|trace| = " + std::to_string(tr) +
                      ")");
  }
  const ComplexMatrix a1 = 0.5 * (a + a.adjoint());
  const ComplexMatrix a2 = (a - a.adjoint()) / Complex(0.0, 2.0);
  const ComplexMatrix w1 = solve_sl(a1).solution;
  const ComplexMatrix w2 = solve_sl(a2).solution;
  OberwolfachSplit out;
  out.x1 = w1.adjoint();
  out.x2 = w1;
  out.y1 = Complex(0.0, 1.0) * w2.adjoint();
  out.y2 = w2;
  out.residual =
      (numkit::commutator(out.x1, out.x2) + numkit::commutator(out.y1, out.y2) - a).norm();
  return out;
}

}  // namespace commlab::liealg
