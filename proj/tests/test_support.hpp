#pragma once

#include <cstdint>
#include <random>

#include "commlab/numkit.hpp"
#include "commlab/selfcomm.hpp"

namespace testing {

using commlab::Complex;
using commlab::ComplexMatrix;
using commlab::ComplexVector;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline ComplexMatrix random_matrix(std::mt19937_64& g, std::size_t n, std::size_t m = 0) {
  std::normal_distribution<double> nd;
  ComplexMatrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m ? m : n));
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double re = nd(g);
    a.data()[i] = Complex(re, nd(g));
  }
  return a;
}

inline ComplexVector random_vector(std::mt19937_64& g, std::size_t n) {
  std::normal_distribution<double> nd;
  ComplexVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = nd(g);
    v[i] = Complex(re, nd(g));
  }
  return v;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& g, std::size_t n) {
  const ComplexMatrix a = random_matrix(g, n);
  return (a + a.adjoint()) / 2.0;
}

inline ComplexMatrix random_traceless_hermitian(std::mt19937_64& g, std::size_t n) {
  ComplexMatrix h = random_hermitian(g, n);
  const Complex shift = commlab::numkit::trace(h) / static_cast<double>(n);
  for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, i) -= shift;
  return h;
}

inline ComplexMatrix random_traceless(std::mt19937_64& g, std::size_t n) {
  ComplexMatrix a = random_matrix(g, n);
  const Complex shift = commlab::numkit::trace(a) / static_cast<double>(n);
  for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, i) -= shift;
  return a;
}

inline ComplexMatrix random_unitary(std::mt19937_64& g, std::size_t n) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Eigen::MatrixXcd(random_matrix(g, n)));
  return qr.householderQ() * Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n),
                                                       static_cast<Eigen::Index>(n));
}

/// Random Hermitian member of sp for the standard anti-conjugation on C^{2m}.
inline ComplexMatrix random_sp_hermitian(std::mt19937_64& g, std::size_t m) {
  const auto j = commlab::selfcomm::make_anticonjugation(m);
  const ComplexMatrix p = commlab::selfcomm::project_sp(random_hermitian(g, 2 * m), j);
  return (p + p.adjoint()) / 2.0;
}

}  // namespace testing
