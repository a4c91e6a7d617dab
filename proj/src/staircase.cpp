#include "commlab/staircase.hpp"

#include <cstdio>

#include "commlab/errors.hpp"

namespace commlab::staircase {

namespace {

using Index = Eigen::Index;

std::vector<long> row_profile(const ComplexMatrix& m, double tolerance) {
  std::vector<long> out(static_cast<std::size_t>(m.rows()), -1);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = m.cols() - 1; c >= 0; --c) {
      if (std::abs(m(r, c)) > tolerance) {
        out[static_cast<std::size_t>(r)] = static_cast<long>(c);
        break;
      }
    }
  }
  return out;
}

bool banded(const ComplexMatrix& m, std::size_t op_count, bool selfadjoint, double tolerance) {
  const Index d = m.rows();
  for (Index r = 0; r < d; ++r) {
    const auto bound = static_cast<Index>(band_bound(static_cast<std::size_t>(r) + 1, op_count,
                                                     selfadjoint));
    for (Index c = bound; c < d; ++c) {
      if (std::abs(m(r, c)) > tolerance || std::abs(m(c, r)) > tolerance) return false;
    }
  }
  return true;
}

}  // namespace

std::size_t band_bound(std::size_t n, std::size_t op_count, bool selfadjoint) {
  return n * (selfadjoint ? op_count + 1 : 2 * op_count + 1);
}

StaircaseResult staircase_form(std::span<const ComplexMatrix> ops, bool selfadjoint_hint,
                               double tolerance) {
  if (ops.empty()) throw DomainError("staircase_form: need at least one operator");
  const Index d = ops.front().rows();
  for (const auto& a : ops) {
    if (a.rows() != d || a.cols() != d) {
      throw ShapeError("staircase_form: all operators must be square of dimension " +
                       std::to_string(d));
    }
    if (selfadjoint_hint && !numkit::is_hermitian(a)) {
      throw DomainError("staircase_form: selfadjoint_hint set but an operator is not Hermitian");
    }
  }
  const auto dim = static_cast<std::size_t>(d);
  numkit::OrthonormalBasis basis(dim, tolerance, /*normalize_phase=*/true);

  for (std::size_t k = 0; k < dim && !basis.full(); ++k) {
    basis.try_add(numkit::basis_vector(dim, k));
    if (k >= basis.size()) continue;  // cannot happen: e_1..e_{k+1} are in the span
    const ComplexVector bk = basis.column(k);
    for (const auto& a : ops) {
      if (basis.full()) break;
      basis.try_add(a * bk);
      if (!selfadjoint_hint && !basis.full()) basis.try_add(a.adjoint() * bk);
    }
  }
  if (!basis.full()) {
    throw NumericError("staircase_form: generating stream did not span the space");
  }

  StaircaseResult out;
  out.tolerance = tolerance;
  out.unitary = basis.matrix();
  for (const auto& a : ops) {
    out.transformed.push_back(out.unitary.adjoint() * a * out.unitary);
    out.band_profile.push_back(row_profile(out.transformed.back(), tolerance));
  }
  return out;
}

bool verify_band(const StaircaseResult& result, std::size_t op_count, bool selfadjoint,
                 double tolerance) {
  return within_band(result.transformed, op_count, selfadjoint, tolerance);
}

bool within_band(std::span<const ComplexMatrix> mats, std::size_t op_count, bool selfadjoint,
                 double tolerance) {
  for (const auto& m : mats) {
    if (m.rows() != m.cols()) return false;
    if (!banded(m, op_count, selfadjoint, tolerance)) return false;
  }
  return true;
}

bool diagonal_invariance_check(const ComplexMatrix& d, const ComplexMatrix& u, double tolerance) {
  if (d.rows() != u.rows() || d.cols() != u.cols() || d.rows() != d.cols()) {
    throw ShapeError("diagonal_invariance_check: D and U must be square of equal size");
  }
  return (u.adjoint() * d * u - d).norm() <= tolerance;
}

std::string band_csv(const StaircaseResult& result, std::size_t which, std::size_t op_count,
                     bool selfadjoint) {
  std::string out = "row_index,max_col,bound\n";
  char buf[64];
  const auto& prof = result.band_profile.at(which);
  for (std::size_t r = 0; r < prof.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%zu,%ld,%zu\n", r + 1, prof[r] + 1,
                  band_bound(r + 1, op_count, selfadjoint));
    out += buf;
  }
  return out;
}

}  // namespace commlab::staircase
