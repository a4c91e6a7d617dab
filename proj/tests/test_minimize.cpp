#include <cmath>
#include <vector>

#include "commlab/errors.hpp"
#include "commlab/minimize.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace commlab;
using namespace commlab::minimize;

namespace {

double penalty_value(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& t,
                     double mu) {
  return penalty_gradient(a, b, t, mu).value;
}

// Central differences in every real coordinate; returns the relative error.
double gradient_error(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& t,
                      double mu) {
  const auto pv = penalty_gradient(a, b, t, mu);
  const double h = 1e-6;
  double err = 0.0, scale = 0.0;
  auto probe = [&](const ComplexMatrix& base, bool is_a, const ComplexMatrix& grad) {
    for (Eigen::Index i = 0; i < base.size(); ++i) {
      for (int part = 0; part < 2; ++part) {
        const Complex step = part == 0 ? Complex(h, 0.0) : Complex(0.0, h);
        ComplexMatrix plus = base, minus = base;
        plus.data()[i] += step;
        minus.data()[i] -= step;
        const double fp = is_a ? penalty_value(plus, b, t, mu) : penalty_value(a, plus, t, mu);
        const double fm = is_a ? penalty_value(minus, b, t, mu) : penalty_value(a, minus, t, mu);
        const double fd = (fp - fm) / (2.0 * h);
        const double an = part == 0 ? grad.data()[i].real() : grad.data()[i].imag();
        err = std::max(err, std::abs(fd - an));
        scale = std::max(scale, std::abs(an));
      }
    }
  };
  probe(a, true, pv.grad_a);
  probe(b, false, pv.grad_b);
  return err / std::max(1.0, scale);
}

}  // namespace

TEST_CASE("lower_bound_certificate examples") {
  CHECK(lower_bound_certificate(numkit::diagonal({-1.0, 1.0 / 3, 1.0 / 3, 1.0 / 3})) ==
        doctest::Approx(1.0));
  CHECK(lower_bound_certificate(numkit::zeros(3, 3)) == 0.0);
  CHECK(lower_bound_certificate(numkit::diagonal({-1.0, 0.5, 0.5})) == doctest::Approx(1.0));
}

TEST_CASE("penalty_gradient examples") {
  const auto z = penalty_gradient(numkit::zeros(3, 3), numkit::zeros(3, 3), numkit::zeros(3, 3), 5.0);
  CHECK(z.value == 0.0);
  CHECK(z.grad_a.norm() == 0.0);
  CHECK(z.grad_b.norm() == 0.0);

  const ComplexMatrix a = optimal_a(), b = optimal_b();
  const ComplexMatrix t = numkit::diagonal({-1.0, 1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto opt = penalty_gradient(a, b, t, 1e12);
  CHECK((opt.grad_a - 2.0 * a).norm() <= 1e-15 * 1e12);
  CHECK(opt.value == doctest::Approx(8.0 / 3.0));
}

TEST_CASE("penalty_gradient matches central differences") {
  auto g = testing::rng(51);
  std::uniform_real_distribution<double> mu_dist(0.1, 10.0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 4;
    const ComplexMatrix a = testing::random_matrix(g, n);
    const ComplexMatrix b = testing::random_matrix(g, n);
    const ComplexMatrix tm = testing::random_traceless(g, n);
    CHECK(gradient_error(a, b, tm, mu_dist(g)) <= 1e-5);
  }
}

TEST_CASE("diagonal_equations examples") {
  const auto d = diagonal_equations(optimal_a(), optimal_b());
  const std::vector<double> expect = {-1.0, 1.0 / 3, 1.0 / 3, 1.0 / 3};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(d[i].real() == doctest::Approx(expect[i]));
    CHECK(d[i].imag() == 0.0);
  }
  auto g = testing::rng(52);
  const ComplexMatrix a = testing::random_matrix(g, 4);
  for (const auto& v : diagonal_equations(a, a)) CHECK(std::abs(v) <= 1e-15);
  const ComplexMatrix b = testing::random_matrix(g, 4);
  const auto r = diagonal_equations(a, b);
  const ComplexMatrix c = numkit::commutator(a, b);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(std::abs(r[std::size_t(i)] - c(i, i)) <= 1e-12);
  CHECK_THROWS_AS(diagonal_equations(numkit::identity(2), numkit::identity(3)), ShapeError);
}

TEST_CASE("verify_optimal_pair") {
  const auto p = verify_optimal_pair();
  CHECK(p.report.passed());
  CHECK(p.a.squaredNorm() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(p.b.squaredNorm() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(p.report.find("commutator_error")->measured <= 1e-15);
}

TEST_CASE("minimize on the zero target returns zero matrices") {
  MinimizeConfig c;
  c.target = numkit::zeros(3, 3);
  c.restarts = 3;
  const auto r = minimize_commutator(c);
  CHECK(r.certified);
  CHECK(r.objective == 0.0);
  CHECK(r.best_a.norm() == 0.0);
}

TEST_CASE("minimize on diag(-1, 1/2, 1/2) reaches the bound, deterministically") {
  MinimizeConfig c;
  c.target = numkit::diagonal({-1.0, 0.5, 0.5});
  c.restarts = 6;
  c.seed = 3;
  const auto r = minimize_commutator(c);
  CHECK(r.certified);
  CHECK(r.feasibility <= 1e-6);
  CHECK(r.objective >= r.lower_bound - 1e-6);
  CHECK(r.objective <= 1.0 + 1e-2);
  CHECK(std::abs(r.best_a.norm() - r.best_b.norm()) <= 1e-12);
  CHECK((numkit::commutator(r.best_a, r.best_b) - c.target).norm() == doctest::Approx(r.feasibility));

  for (const auto& tr : r.trace) {
    for (std::size_t k = 1; k < tr.best_by_stage.size(); ++k) {
      CHECK(tr.best_by_stage[k] <= tr.best_by_stage[k - 1]);
    }
    if (tr.feasible) CHECK(tr.objective >= r.lower_bound - 1e-6);
  }

  const auto again = minimize_commutator(c);
  CHECK(again.objective == r.objective);
  CHECK(again.best_restart == r.best_restart);
  CHECK(again.best_a == r.best_a);

  c.parallelism = 3;
  const auto par = minimize_commutator(c);
  CHECK(par.objective == r.objective);
  CHECK(par.best_a == r.best_a);
  CHECK(par.to_csv() == r.to_csv());
}

TEST_CASE("fixed step rule also makes progress") {
  MinimizeConfig c;
  c.target = numkit::diagonal({-1.0, 1.0});
  c.restarts = 2;
  c.max_iters = 3000;
  c.step_rule = StepRule::Fixed;
  const auto r = minimize_commutator(c);
  CHECK(r.trace.size() == 2);
  for (const auto& t : r.trace) CHECK(t.iters <= 3000 + 20);
}

TEST_CASE("config validation") {
  MinimizeConfig c;
  c.target = numkit::diagonal({1.0, 1.0});
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.target = numkit::zeros(2, 3);
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.target = numkit::zeros(2, 2);
  c.restarts = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.restarts = 1;
  c.penalty_weight = 0.0;
  CHECK_THROWS_AS(minimize_commutator(c), DomainError);
}

TEST_CASE("trace CSV layout") {
  MinimizeConfig c;
  c.target = numkit::zeros(2, 2);
  c.restarts = 2;
  const auto csv = minimize_commutator(c).to_csv();
  CHECK(csv.rfind("restart,iters,feasibility,objective\n0,", 0) == 0);
}
