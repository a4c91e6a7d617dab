#include "commlab/selfcomm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "commlab/errors.hpp"

namespace commlab::selfcomm {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

void require_square_of(const ComplexMatrix& x, std::size_t dim, const char* what) {
  if (x.rows() != x.cols() || static_cast<std::size_t>(x.rows()) != dim) {
    throw ShapeError(std::string(what) + ": expected a " + std::to_string(dim) + "x" +
                     std::to_string(dim) + " matrix, got " + std::to_string(x.rows()) + "x" +
                     std::to_string(x.cols()));
  }
}

void require_hermitian_traceless(const ComplexMatrix& t, const char* what) {
  if (t.rows() != t.cols()) throw ShapeError(std::string(what) + ": expected a square matrix");
  if (!numkit::is_hermitian(t, 1e-9)) {
    throw DomainError(std::string(what) + ": input is not Hermitian");
  }
  const double tr = std::abs(numkit::trace(t));
  if (tr > 1e-9 * (1.0 + t.norm())) {
    throw DomainError(std::string(what) + ": trace-zero required (|trace| = " +
                      std::to_string(tr) + ")");
  }
}

}  // namespace

// --- anti-conjugations -------------------------------------------------------

AntiConjugation AntiConjugation::standard(std::size_t m) {
  if (m == 0) throw DomainError("anti-conjugation needs m >= 1 (dimension 2m)");
  ComplexMatrix k = numkit::zeros(2 * m, 2 * m);
  for (std::size_t n = 0; n < m; ++n) {
    k(idx(m + n), idx(n)) = -1.0;  // J b_n = -b_{-n}
    k(idx(n), idx(m + n)) = 1.0;   // J b_{-n} = b_n
  }
  return AntiConjugation(std::move(k));
}

AntiConjugation AntiConjugation::from_matrix(ComplexMatrix k) {
  if (k.rows() != k.cols() || k.rows() % 2 != 0 || k.rows() == 0) {
    throw DomainError("anti-conjugation needs an even, nonzero square dimension");
  }
  if (!numkit::is_unitary(k, 1e-10)) throw DomainError("anti-conjugation matrix is not unitary");
  const ComplexMatrix sq = k * k.conjugate();
  if ((sq + ComplexMatrix::Identity(k.rows(), k.cols())).norm() > 1e-10) {
    throw DomainError("anti-conjugation must square to -1");
  }
  return AntiConjugation(std::move(k));
}

AntiConjugation make_anticonjugation(std::size_t m) { return AntiConjugation::standard(m); }

ComplexVector AntiConjugation::apply(const ComplexVector& v) const { return k_ * v.conjugate(); }

ComplexVector AntiConjugation::apply_inverse(const ComplexVector& v) const { return -apply(v); }

ComplexMatrix AntiConjugation::conjugate(const ComplexMatrix& x) const {
  return -(k_ * x.conjugate() * k_.conjugate());
}

AntiConjugation AntiConjugation::transformed(const ComplexMatrix& v) const {
  return AntiConjugation(v * k_ * v.transpose());
}

Eigen::MatrixXd AntiConjugation::real_matrix() const {
  // J (x + i y) = K (x - i y) = (Kr x + Ki y) + i (Ki x - Kr y)
  const Index d = k_.rows();
  const Eigen::MatrixXd kr = k_.real();
  const Eigen::MatrixXd ki = k_.imag();
  Eigen::MatrixXd r(2 * d, 2 * d);
  r.topLeftCorner(d, d) = kr;
  r.topRightCorner(d, d) = ki;
  r.bottomLeftCorner(d, d) = ki;
  r.bottomRightCorner(d, d) = -kr;
  return r;
}

Conjugation Conjugation::standard(std::size_t n) { return {numkit::identity(n)}; }

double sp_defect(const ComplexMatrix& x, const AntiConjugation& j) {
  require_square_of(x, j.dimension(), "in_sp");
  return (x + j.conjugate(x.adjoint())).norm();
}

bool in_sp(const ComplexMatrix& x, const AntiConjugation& j, double tolerance) {
  return sp_defect(x, j) <= tolerance;
}

ComplexMatrix project_sp(const ComplexMatrix& x, const AntiConjugation& j) {
  require_square_of(x, j.dimension(), "project_sp");
  return 0.5 * (x - j.conjugate(x.adjoint()));
}

bool in_o(const ComplexMatrix& x, const Conjugation& j, double tolerance) {
  require_square_of(x, static_cast<std::size_t>(j.k.rows()), "in_o");
  // J X* J^{-1} = K X^T K* for J v = K conj(v), J^2 = 1.
  return (x + j.k * x.transpose() * j.k.adjoint()).norm() <= tolerance;
}

// --- type A ------------------------------------------------------------------

std::vector<double> partial_sums_sorted(std::vector<double> c) {
  const double total = std::accumulate(c.begin(), c.end(), 0.0);
  if (std::abs(total) > 1e-9) {
    throw DomainError("trace-zero required: values sum to " + std::to_string(total));
  }
  std::stable_sort(c.begin(), c.end(), std::greater<>());
  std::partial_sum(c.begin(), c.end(), c.begin());
  return c;
}

TypeASolution solve_type_A(const ComplexMatrix& t) {
  require_hermitian_traceless(t, "solve_type_A");
  const auto eig = numkit::hermitian_eigen(t);
  const std::size_t d = eig.values.size();

  TypeASolution out;
  out.eigenvalues = eig.values;
  out.eigenbasis = eig.vectors;
  out.partial_sums.resize(d);
  std::partial_sum(eig.values.begin(), eig.values.end(), out.partial_sums.begin());

  out.permutation.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    Index best = 0;
    eig.vectors.col(idx(j)).cwiseAbs().maxCoeff(&best);
    out.permutation[j] = static_cast<std::size_t>(best);
  }

  out.shift = numkit::zeros(d, d);
  for (std::size_t j = 0; j + 1 < d; ++j) {
    out.shift(idx(j + 1), idx(j)) = std::sqrt(std::max(0.0, out.partial_sums[j]));
  }
  out.solution = eig.vectors * out.shift * eig.vectors.adjoint();
  out.residual = (numkit::self_commutator(out.solution) - t).norm();
  if (!(out.residual <= 1e-9 * (1.0 + t.norm()))) {
    throw ConsistencyError("solve_type_A: residual " + std::to_string(out.residual) +
                           " exceeds tolerance");
  }
  return out;
}

Rearrangement rearrange_type_A(const std::vector<double>& lambda) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < lambda.size(); ++i) (lambda[i] < 0.0 ? neg : pos).push_back(i);
  // positives largest first; negatives most negative first
  std::stable_sort(pos.begin(), pos.end(),
                   [&](std::size_t a, std::size_t b) { return lambda[a] > lambda[b]; });
  std::stable_sort(neg.begin(), neg.end(),
                   [&](std::size_t a, std::size_t b) { return lambda[a] < lambda[b]; });

  Rearrangement out;
  double s = 0.0;
  std::size_t p = 0, q = 0;
  auto take = [&](std::size_t i) {
    s += lambda[i];
    out.order.push_back(i);
    out.prefix_sums.push_back(s);
  };
  while (p < pos.size() || q < neg.size()) {
    if (q < neg.size() && s + lambda[neg[q]] >= 0.0) {
      take(neg[q++]);
    } else if (p < pos.size()) {
      take(pos[p++]);
    } else {
      // positives exhausted: remaining negatives in descending order
      for (std::size_t r = neg.size(); r > q; --r) take(neg[r - 1]);
      q = neg.size();
    }
  }
  out.defect = s;
  return out;
}

// --- type C ------------------------------------------------------------------

SpectralPairing spectral_pairing(const ComplexMatrix& t, const AntiConjugation& j) {
  require_square_of(t, j.dimension(), "spectral_pairing");
  const double scale = 1.0 + t.norm();
  if (!numkit::is_hermitian(t, 1e-9)) throw DomainError("spectral_pairing: T is not Hermitian");
  if (!in_sp(t, j, 1e-9 * scale)) throw DomainError("spectral_pairing: not in sp up to tolerance");

  const auto eig = numkit::hermitian_eigen(t);
  const std::size_t d = eig.values.size();
  const std::size_t m = d / 2;
  const double zero = 1e-9 * t.norm();

  std::vector<std::size_t> positive, negative, kernel;
  for (std::size_t k = 0; k < d; ++k) {
    const double v = eig.values[k];
    if (v > zero) {
      positive.push_back(k);
    } else if (v < -zero) {
      negative.push_back(k);
    } else {
      kernel.push_back(k);
    }
  }
  if (positive.size() != negative.size() || kernel.size() % 2 != 0) {
    throw DomainError("not in sp up to tolerance: " + std::to_string(positive.size()) +
                      " positive vs " + std::to_string(negative.size()) +
                      " negative eigenvalues, kernel dimension " + std::to_string(kernel.size()));
  }

  SpectralPairing out;
  out.kernel_dimension = kernel.size();
  // values descend, so positive[i] pairs with negative read from the end
  for (std::size_t i = 0; i < positive.size(); ++i) {
    const double plus = eig.values[positive[i]];
    const double minus = eig.values[negative[negative.size() - 1 - i]];
    out.pairing_defect = std::max(out.pairing_defect, std::abs(plus + minus));
  }
  if (!(out.pairing_defect <= 1e-8 * scale)) {
    throw DomainError("not in sp up to tolerance: +- pairing defect " +
                      std::to_string(out.pairing_defect));
  }

  out.basis = numkit::zeros(d, d);
  std::size_t n = 0;
  auto place = [&](const ComplexVector& b, double lambda) {
    out.basis.col(idx(n)) = b;
    out.basis.col(idx(m + n)) = -j.apply(b);
    out.lambdas.push_back(lambda);
    ++n;
  };
  for (std::size_t k : positive) place(eig.vectors.col(idx(k)), eig.values[k]);

  // Pair the kernel as {v, J v}: pick the kernel direction with the largest
  // component outside the span chosen so far.
  std::vector<ComplexVector> chosen;
  for (std::size_t step = 0; step < kernel.size() / 2; ++step) {
    ComplexVector best;
    double best_norm = -1.0;
    for (std::size_t k : kernel) {
      ComplexVector w = eig.vectors.col(idx(k));
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& c : chosen) w -= c * c.dot(w);
      }
      const double nw = w.norm();
      if (nw > best_norm) {
        best_norm = nw;
        best = w;
      }
    }
    if (best_norm <= 1e-8) throw NumericError("spectral_pairing: kernel pairing lost rank");
    best /= best_norm;
    chosen.push_back(best);
    chosen.push_back(j.apply(best));
    place(best, 0.0);
  }
  return out;
}

TypeCSolution solve_type_C(const ComplexMatrix& t, const AntiConjugation& j) {
  TypeCSolution out;
  out.pairing = spectral_pairing(t, j);
  const std::size_t d = j.dimension();
  const std::size_t m = d / 2;
  ComplexMatrix shift = numkit::zeros(d, d);
  for (std::size_t n = 0; n < m; ++n) {
    shift(idx(m + n), idx(n)) = std::sqrt(std::max(0.0, out.pairing.lambdas[n]));  // E_{-n,n}
  }
  const ComplexMatrix& b = out.pairing.basis;
  out.solution = b * shift * b.adjoint();
  out.residual = (numkit::self_commutator(out.solution) - t).norm();
  out.sp_defect = sp_defect(out.solution, j);

  const double scale = 1.0 + t.norm();
  out.report.command = "solve-selfcomm C";
  out.report.check_at_most("sp_membership", out.sp_defect, 1e-8);
  out.report.check_at_most("residual", out.residual, 1e-8 * scale);
  out.report.check_at_most("pm_pairing", out.pairing.pairing_defect, 1e-8 * scale);
  out.report.check_true("kernel_even", out.pairing.kernel_dimension % 2 == 0);
  out.report.note("hs_norm_Y", numkit::hs_norm(out.solution));
  return out;
}

TypeCSplit split_type_C(const ComplexMatrix& t, const AntiConjugation& j) {
  require_square_of(t, j.dimension(), "split_type_C");
  const double scale = 1.0 + t.norm();
  const ComplexMatrix t1 = 0.5 * (t + t.adjoint());
  const ComplexMatrix t2 = (t - t.adjoint()) / Complex(0.0, 2.0);
  if (!in_sp(t1, j, 1e-9 * scale) || !in_sp(t2, j, 1e-9 * scale)) {
    throw ConsistencyError("split_type_C: Hermitian parts left sp; input badly conditioned");
  }
  TypeCSplit out;
  const auto sx = solve_type_C(t1, j);
  const auto sy = solve_type_C(t2, j);
  out.x = sx.solution;
  out.y = sy.solution;
  out.residual =
      (numkit::self_commutator(out.x) + Complex(0.0, 1.0) * numkit::self_commutator(out.y) - t)
          .norm();
  out.report.command = "split-selfcomm C";
  out.report.check_at_most("sp_membership_X", sx.sp_defect, 1e-8);
  out.report.check_at_most("sp_membership_Y", sy.sp_defect, 1e-8);
  out.report.check_at_most("reconstruction", out.residual, 1e-8 * scale);
  return out;
}

}  // namespace commlab::selfcomm
