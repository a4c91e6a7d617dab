#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "commlab/errors.hpp"
#include "commlab/minimize.hpp"
#include "commlab/numkit.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace commlab;
using namespace commlab::numkit;

namespace {

// brute-force triple loop, independent of Eigen's product kernels
ComplexMatrix naive_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c = zeros(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(b.cols()));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

}  // namespace

TEST_CASE("commutator examples") {
  auto g = testing::rng(1);
  const ComplexMatrix b = testing::random_matrix(g, 4);
  CHECK(commutator(identity(4), b).norm() == 0.0);
  const ComplexMatrix a = testing::random_matrix(g, 4);
  CHECK(commutator(a, a).norm() < 1e-14);

  const ComplexMatrix c = commutator(minimize::optimal_a(), minimize::optimal_b());
  const ComplexMatrix expect = diagonal({-1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  CHECK(max_abs(c - expect) < 1e-15);

  CHECK_THROWS_AS(commutator(identity(2), identity(3)), ShapeError);
  CHECK_THROWS_AS(commutator(zeros(2, 3), zeros(2, 3)), ShapeError);
}

TEST_CASE("commutator matches brute-force multiplication and has zero trace") {
  auto g = testing::rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 7;
    const ComplexMatrix a = testing::random_matrix(g, n);
    const ComplexMatrix b = testing::random_matrix(g, n);
    const ComplexMatrix c = commutator(a, b);
    CHECK((c - (naive_product(a, b) - naive_product(b, a))).norm() < 1e-12);
    CHECK(std::abs(trace(c)) <= 1e-10 * (1.0 + a.norm() * b.norm()));
  }
}

TEST_CASE("self_commutator examples") {
  CHECK(self_commutator(zeros(3, 3)).norm() == 0.0);

  // subdiagonal weighted shift with weights sqrt(1/3), sqrt(2/3), 1
  ComplexMatrix y = zeros(4, 4);
  y(1, 0) = std::sqrt(1.0 / 3.0);
  y(2, 1) = std::sqrt(2.0 / 3.0);
  y(3, 2) = 1.0;
  const ComplexMatrix t = self_commutator(y);
  CHECK(max_abs(t - diagonal({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, -1.0})) < 1e-15);

  auto g = testing::rng(3);
  const ComplexMatrix r = testing::random_matrix(g, 5);
  const ComplexMatrix s = self_commutator(r);
  CHECK(std::abs(trace(s)) <= 1e-10);
  CHECK((s - s.adjoint()).norm() <= 1e-12 * (1.0 + s.norm()));
  CHECK((s - (naive_product(r.adjoint(), r) - naive_product(r, r.adjoint()))).norm() < 1e-12);
  CHECK_THROWS_AS(self_commutator(zeros(2, 3)), ShapeError);
}

TEST_CASE("hs_norm examples") {
  CHECK(hs_norm(minimize::optimal_a()) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-15));
  CHECK(hs_norm(identity(7)) == doctest::Approx(std::sqrt(7.0)));
  CHECK(hs_norm(diagonal({3.0, 4.0})) == doctest::Approx(5.0));
}

TEST_CASE("trace_norm examples") {
  CHECK(trace_norm(diagonal({-1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0})) == doctest::Approx(2.0));
  CHECK(trace_norm(zeros(5, 5)) == 0.0);
  auto g = testing::rng(4);
  ComplexVector u = testing::random_vector(g, 6);
  ComplexVector v = testing::random_vector(g, 6);
  u.normalize();
  v.normalize();
  CHECK(trace_norm(u * v.adjoint()) == doctest::Approx(1.0).epsilon(1e-12));

  ComplexMatrix bad = identity(3);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(trace_norm(bad), NumericError);
}

TEST_CASE("inequality chain: |A| |B| >= |[A,B]|_1 / 2") {
  auto g = testing::rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const ComplexMatrix a = testing::random_matrix(g, n);
    const ComplexMatrix b = testing::random_matrix(g, n);
    CHECK(hs_norm(a) * hs_norm(b) >= trace_norm(commutator(a, b)) / 2.0 - 1e-9);
  }
}

TEST_CASE("hermitian_eigen examples") {
  const auto d = hermitian_eigen(diagonal({1.0 / 3.0, -1.0, 1.0 / 3.0, 1.0 / 3.0}));
  REQUIRE(d.values.size() == 4);
  CHECK(d.values[0] == doctest::Approx(1.0 / 3.0));
  CHECK(d.values[1] == doctest::Approx(1.0 / 3.0));
  CHECK(d.values[2] == doctest::Approx(1.0 / 3.0));
  CHECK(d.values[3] == doctest::Approx(-1.0));

  ComplexMatrix x = zeros(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  const auto e = hermitian_eigen(x);
  CHECK(e.values[0] == doctest::Approx(1.0));
  CHECK(e.values[1] == doctest::Approx(-1.0));

  ComplexMatrix skew = zeros(2, 2);
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eigen(skew), DomainError);
}

TEST_CASE("hermitian_eigen invariants on random matrices up to dimension 64") {
  auto g = testing::rng(6);
  for (std::size_t n : {1u, 2u, 3u, 8u, 17u, 32u, 64u}) {
    const ComplexMatrix a = testing::random_hermitian(g, n);
    const auto d = hermitian_eigen(a);
    for (std::size_t k = 1; k < n; ++k) CHECK(d.values[k - 1] >= d.values[k]);
    const ComplexMatrix& v = d.vectors;
    CHECK((v.adjoint() * v - identity(n)).norm() <= 1e-10 * static_cast<double>(n));
    CHECK((a * v - v * diagonal(std::span<const double>(d.values))).norm() <= 1e-9 * (1.0 + a.norm()));
    CHECK((d.reconstruct() - a).norm() <= 1e-9 * (1.0 + a.norm()));
  }
}

TEST_CASE("gram_schmidt examples") {
  const std::vector<ComplexVector> two = {basis_vector(2, 0), basis_vector(2, 1)};
  auto r = gram_schmidt(two);
  CHECK((r.basis - identity(2)).norm() == 0.0);
  CHECK(r.accepted == std::vector<std::size_t>{0, 1});

  const std::vector<ComplexVector> dep = {basis_vector(2, 0), ComplexVector(2.0 * basis_vector(2, 0)),
                                          basis_vector(2, 1)};
  r = gram_schmidt(dep);
  CHECK((r.basis - identity(2)).norm() == 0.0);
  CHECK(r.accepted == std::vector<std::size_t>{0, 2});

  const ComplexMatrix a = minimize::optimal_a();
  const ComplexVector e1 = basis_vector(4, 0);
  const std::vector<ComplexVector> stream = {e1, a * e1, a.adjoint() * e1, basis_vector(4, 1),
                                             basis_vector(4, 2), basis_vector(4, 3)};
  r = gram_schmidt(stream);
  CHECK(r.basis.cols() == 4);
  CHECK(is_unitary(r.basis, 1e-10));
  CHECK((r.basis.col(0) - e1).norm() == 0.0);
}

TEST_CASE("gram_schmidt orthonormality property") {
  auto g = testing::rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + trial % 10;
    std::vector<ComplexVector> vs;
    for (std::size_t k = 0; k < n + 3; ++k) vs.push_back(testing::random_vector(g, n));
    vs.push_back(vs[0] + vs[1]);  // dependent
    const auto r = gram_schmidt(vs);
    const double cols = static_cast<double>(r.basis.cols());
    CHECK(r.basis.cols() == static_cast<Eigen::Index>(n));
    CHECK((r.basis.adjoint() * r.basis - identity(n)).norm() <= 1e-10 * cols);
    CHECK(is_unitary(r.basis, 1e-10));
  }
}

TEST_CASE("is_unitary examples") {
  CHECK(is_unitary(identity(3), 1e-12));
  CHECK_FALSE(is_unitary(ComplexMatrix(2.0 * identity(3)), 1e-12));
  CHECK_FALSE(is_unitary(zeros(2, 3), 1e-12));
}

TEST_CASE("matrix text format round-trips bitwise") {
  auto g = testing::rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix a = testing::random_matrix(g, 1 + trial % 5, 1 + trial % 3);
    a(0, 0) = Complex(1e-300, -3.0e300);
    const ComplexMatrix b = parse_matrix(format_matrix(a));
    REQUIRE(b.rows() == a.rows());
    REQUIRE(b.cols() == a.cols());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      CHECK(b.data()[i].real() == a.data()[i].real());
      CHECK(b.data()[i].imag() == a.data()[i].imag());
    }
  }
  const std::string text = format_matrix(diagonal({1.0, 2.0}));
  CHECK(text.substr(0, 4) == "2 2\n");
}

TEST_CASE("matrix parser reports line numbers") {
  try {
    parse_matrix("2 1\n1 0\nx 0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_matrix("1 1\n1 0\n2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix("1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix("1 1\nnan 0\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix(""), ParseError);
}
