#include "commlab/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <future>
#include <limits>
#include <random>

#include "commlab/errors.hpp"
#include "commlab/staircase.hpp"

namespace commlab::minimize {

namespace {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;

constexpr double kFeasible = 1e-6;
constexpr double kConverged = 1e-8;
constexpr std::size_t kMemory = 12;

// Packs (A, B) as [Re A, Im A, Re B, Im B] in row-major order.
Vec pack(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Index n = a.size();
  Vec x(4 * n);
  for (Index i = 0; i < n; ++i) {
    x[i] = a.data()[i].real();
    x[n + i] = a.data()[i].imag();
    x[2 * n + i] = b.data()[i].real();
    x[3 * n + i] = b.data()[i].imag();
  }
  return x;
}

void unpack(const Vec& x, Index dim, ComplexMatrix& a, ComplexMatrix& b) {
  const Index n = dim * dim;
  a.resize(dim, dim);
  b.resize(dim, dim);
  for (Index i = 0; i < n; ++i) {
    a.data()[i] = Complex(x[i], x[n + i]);
    b.data()[i] = Complex(x[2 * n + i], x[3 * n + i]);
  }
}

struct Evaluator {
  const ComplexMatrix& target;
  Index dim;
  double mu;

  double operator()(const Vec& x, Vec& grad) const {
    ComplexMatrix a, b;
    unpack(x, dim, a, b);
    const auto pv = penalty_gradient(a, b, target, mu);
    grad = pack(pv.grad_a, pv.grad_b);
    return pv.value;
  }
};

double feasibility_of(const Vec& x, Index dim, const ComplexMatrix& target) {
  ComplexMatrix a, b;
  unpack(x, dim, a, b);
  return (a * b - b * a - target).norm();
}

double objective_of(const Vec& x, Index dim) {
  ComplexMatrix a, b;
  unpack(x, dim, a, b);
  return std::sqrt(a.norm() * b.norm());
}

/// Minimizes one penalty stage in place. Returns iterations used.
std::size_t descend(Vec& x, const Evaluator& f, const MinimizeConfig& cfg, std::size_t budget) {
  Vec g;
  double fx = f(x, g);
  std::deque<std::pair<Vec, Vec>> memory;  // (s, y) pairs
  std::size_t it = 0;
  const double scale_sq = x.squaredNorm();
  const double fixed_eta = cfg.fixed_step / (1.0 + 4.0 * f.mu * (1.0 + scale_sq));

  for (; it < budget; ++it) {
    if (g.norm() <= kConverged) break;
    Vec dir = -g;
    if (cfg.step_rule == StepRule::Backtracking && !memory.empty()) {
      // L-BFGS two-loop recursion
      std::vector<double> alpha(memory.size());
      Vec q = g;
      for (std::size_t k = memory.size(); k-- > 0;) {
        const auto& [s, y] = memory[k];
        alpha[k] = s.dot(q) / y.dot(s);
        q -= alpha[k] * y;
      }
      const auto& [s_last, y_last] = memory.back();
      q *= s_last.dot(y_last) / y_last.squaredNorm();
      for (std::size_t k = 0; k < memory.size(); ++k) {
        const auto& [s, y] = memory[k];
        const double beta = y.dot(q) / y.dot(s);
        q += (alpha[k] - beta) * s;
      }
      dir = -q;
      if (dir.dot(g) >= 0.0) {
        memory.clear();
        dir = -g;
      }
    }

    Vec x_new, g_new;
    double f_new = 0.0;
    if (cfg.step_rule == StepRule::Fixed) {
      x_new = x + fixed_eta * dir;
      f_new = f(x_new, g_new);
    } else {
      double step = memory.empty() ? std::min(1.0, 1.0 / g.norm()) : 1.0;
      const double slope = dir.dot(g);
      bool accepted = false;
      for (int halvings = 0; halvings < 60; ++halvings) {
        x_new = x + step * dir;
        f_new = f(x_new, g_new);
        if (f_new <= fx + 1e-4 * step * slope) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        if (memory.empty()) break;  // stalled along steepest descent
        memory.clear();
        continue;
      }
    }
    Vec s = x_new - x;
    Vec y = g_new - g;
    if (s.dot(y) > 1e-14 * s.norm() * y.norm()) {
      memory.emplace_back(std::move(s), std::move(y));
      if (memory.size() > kMemory) memory.pop_front();
    }
    const double decrease = fx - f_new;
    x = std::move(x_new);
    g = std::move(g_new);
    fx = f_new;
    if (decrease >= 0.0 && decrease <= 1e-16 * (1.0 + std::abs(fx)) &&
        cfg.step_rule == StepRule::Backtracking && g.norm() <= 1e-6) {
      break;
    }
  }
  return it;
}

std::mt19937_64 restart_rng(std::uint64_t seed, std::size_t restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

ComplexMatrix gaussian(std::mt19937_64& rng, Index dim, double norm) {
  std::normal_distribution<double> nd(0.0, 1.0);
  ComplexMatrix m(dim, dim);
  for (Index i = 0; i < m.size(); ++i) {
    const double re = nd(rng);
    const double im = nd(rng);
    m.data()[i] = Complex(re, im);
  }
  const double current = m.norm();
  return current > 0.0 ? ComplexMatrix(m * (norm / current)) : m;
}

struct RestartOutcome {
  RestartTrace trace;
  ComplexMatrix a;
  ComplexMatrix b;
};

void balance(ComplexMatrix& a, ComplexMatrix& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na > 0.0 && nb > 0.0) {
    const double c = std::sqrt(nb / na);
    a *= c;
    b /= c;
  }
}

RestartOutcome run_restart(const MinimizeConfig& cfg, std::size_t restart, double lower) {
  const Index dim = static_cast<Index>(cfg.dimension());
  auto rng = restart_rng(cfg.seed, restart);
  const ComplexMatrix a0 = gaussian(rng, dim, lower);
  const ComplexMatrix b0 = gaussian(rng, dim, lower);
  Vec x = pack(a0, b0);

  RestartOutcome out;
  out.trace.restart = restart;
  double best = std::numeric_limits<double>::infinity();
  double best_feas = std::numeric_limits<double>::infinity();
  Vec best_x = x;
  Vec fallback_x = x;  // least infeasible, used when nothing is feasible
  double fallback_feas = std::numeric_limits<double>::infinity();

  double mu = cfg.penalty_weight;
  std::size_t used = 0;
  while (used < cfg.max_iters) {
    const Evaluator f{cfg.target, dim, mu};
    used += descend(x, f, cfg, cfg.max_iters - used);
    ++used;
    const double feas = feasibility_of(x, dim, cfg.target);
    const double obj = objective_of(x, dim);
    if (feas <= kFeasible && obj < best) {
      best = obj;
      best_feas = feas;
      best_x = x;
    }
    if (feas < fallback_feas) {
      fallback_feas = feas;
      fallback_x = x;
    }
    out.trace.best_by_stage.push_back(best);
    out.trace.final_penalty = mu;
    Vec g;
    f(x, g);
    if (feas <= kConverged && g.norm() <= kConverged) break;
    if (feas <= kConverged) break;
    if (mu * 10.0 > cfg.max_penalty) break;
    mu *= 10.0;
  }
  out.trace.iters = used;
  const bool feasible = std::isfinite(best);
  const Vec& chosen = feasible ? best_x : fallback_x;
  unpack(chosen, dim, out.a, out.b);
  balance(out.a, out.b);
  out.trace.feasible = feasible;
  out.trace.feasibility = feasible ? best_feas : fallback_feas;
  out.trace.objective = std::sqrt(out.a.norm() * out.b.norm());
  return out;
}

}  // namespace

void MinimizeConfig::validate() const {
  if (target.rows() != target.cols() || target.rows() == 0) {
    throw DomainError("minimize: target must be a nonempty square matrix");
  }
  const double tr = std::abs(numkit::trace(target));
  if (tr > 1e-9 * (1.0 + target.norm())) {
    throw DomainError("minimize: target trace must vanish (|trace| = " + std::to_string(tr) + ")");
  }
  if (restarts == 0 || max_iters == 0) throw DomainError("minimize: restarts and max_iters must be > 0");
  if (!(penalty_weight > 0.0)) throw DomainError("minimize: penalty_weight must be > 0");
}

std::string MinimizeResult::to_csv() const {
  std::string out = "restart,iters,feasibility,objective\n";
  char buf[128];
  for (const auto& t : trace) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", t.restart, t.iters, t.feasibility,
                  t.objective);
    out += buf;
  }
  return out;
}

double lower_bound_certificate(const ComplexMatrix& target) {
  return std::sqrt(numkit::trace_norm(target) / 2.0);
}

PenaltyValue penalty_gradient(const ComplexMatrix& a, const ComplexMatrix& b,
                              const ComplexMatrix& target, double mu) {
  const ComplexMatrix r = numkit::commutator(a, b) - target;
  PenaltyValue out;
  out.value = a.squaredNorm() + b.squaredNorm() + mu * r.squaredNorm();
  out.grad_a = 2.0 * a + 2.0 * mu * (r * b.adjoint() - b.adjoint() * r);
  out.grad_b = 2.0 * b + 2.0 * mu * (a.adjoint() * r - r * a.adjoint());
  return out;
}

MinimizeResult minimize_commutator(const MinimizeConfig& config) {
  config.validate();
  MinimizeResult result;
  result.lower_bound = lower_bound_certificate(config.target);

  std::vector<RestartOutcome> outcomes(config.restarts);
  const std::size_t workers = std::max<std::size_t>(1, std::min(config.parallelism, config.restarts));
  if (workers == 1) {
    for (std::size_t r = 0; r < config.restarts; ++r) {
      outcomes[r] = run_restart(config, r, result.lower_bound);
    }
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t r = w; r < config.restarts; r += workers) {
          outcomes[r] = run_restart(config, r, result.lower_bound);
        }
      }));
    }
    for (auto& j : jobs) j.get();
  }

  // feasible runs first, lower objective wins, lowest index on near-ties
  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    const auto& cand = outcomes[r].trace;
    const auto& cur = outcomes[best].trace;
    if (cand.feasible != cur.feasible) {
      if (cand.feasible) best = r;
      continue;
    }
    if (cand.feasible) {
      if (cand.objective < cur.objective - 1e-12) best = r;
    } else if (cand.feasibility < cur.feasibility) {
      best = r;
    }
  }
  for (auto& o : outcomes) result.trace.push_back(o.trace);
  const auto& win = outcomes[best];
  result.best_a = win.a;
  result.best_b = win.b;
  result.best_restart = best;
  result.objective = win.trace.objective;
  result.feasibility = win.trace.feasibility;
  result.certified = win.trace.feasible;
  return result;
}

ComplexMatrix optimal_a() {
  const double s = 1.0 / std::sqrt(3.0);
  ComplexMatrix a = numkit::zeros(4, 4);
  a(0, 3) = -s;
  a(1, 0) = std::sqrt(2.0) * s;
  a(2, 1) = s;
  return a;
}

ComplexMatrix optimal_b() {
  const double s = 1.0 / std::sqrt(3.0);
  ComplexMatrix b = numkit::zeros(4, 4);
  b(0, 1) = std::sqrt(2.0) * s;
  b(1, 2) = s;
  b(3, 0) = s;
  return b;
}

OptimalPair verify_optimal_pair() {
  OptimalPair out;
  out.a = optimal_a();
  out.b = optimal_b();
  const ComplexMatrix target = numkit::diagonal({-1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  const double root = std::sqrt(4.0 / 3.0);
  auto& rep = out.report;
  rep.command = "verify-optimal-pair";
  rep.check_at_most("commutator_error", numkit::max_abs(numkit::commutator(out.a, out.b) - target),
                    1e-15);
  rep.check_at_most("norm_A_error", std::abs(numkit::hs_norm(out.a) - root), 1e-15);
  rep.check_at_most("norm_B_error", std::abs(numkit::hs_norm(out.b) - root), 1e-15);

  const ComplexMatrix ops[] = {out.a};
  const auto st = staircase::staircase_form(ops, false);
  const ComplexMatrix& t = st.transformed.front();
  // zero pattern: (1,4), (3,1), (4,1) in 1-based positions
  const double pattern = std::max({std::abs(t(0, 3)), std::abs(t(2, 0)), std::abs(t(3, 0))});
  rep.check_at_most("staircase_pattern", pattern, 1e-15);
  rep.check_true("staircase_fixes_e1",
                 (st.unitary.col(0) - numkit::basis_vector(4, 0)).norm() == 0.0);
  rep.check_true("diagonal_invariant", staircase::diagonal_invariance_check(target, st.unitary, 1e-15));

  if (const auto* bad = rep.first_failure()) {
    throw ConstructionError("optimal pair check '" + bad->name + "' failed (measured " +
                            std::to_string(bad->measured) + ")");
  }
  return out;
}

std::vector<Complex> diagonal_equations(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw ShapeError("diagonal_equations: A and B must be square of equal size");
  }
  const Index n = a.rows();
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    Complex s = 0.0;
    for (Index k = 0; k < n; ++k) s += a(i, k) * b(k, i) - b(i, k) * a(k, i);
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

}  // namespace commlab::minimize
