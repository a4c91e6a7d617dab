#pragma once

// Hilbert-Schmidt norm minimization over commutator representations
// [A, B] = target, by a penalty method with random restarts.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "commlab/numkit.hpp"
#include "commlab/report.hpp"

namespace commlab::minimize {

enum class StepRule { Fixed, Backtracking };

struct MinimizeConfig {
  ComplexMatrix target;             ///< square, trace ~ 0
  std::size_t restarts = 50;
  std::size_t max_iters = 20000;    ///< per restart, summed over penalty stages
  double penalty_weight = 1.0;      ///< initial mu; multiplied by 10 on each stall
  double max_penalty = 1e12;
  StepRule step_rule = StepRule::Backtracking;
  double fixed_step = 0.05;         ///< base step for StepRule::Fixed
  std::uint64_t seed = 0;
  std::size_t parallelism = 1;

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(target.rows()); }
  /// DomainError unless target is square with |trace| <= 1e-9 (1 + ||target||_F)
  /// and the counts are positive.
  void validate() const;
};

struct RestartTrace {
  std::size_t restart = 0;
  std::size_t iters = 0;
  double feasibility = 0.0;  ///< ||[A,B] - target||_F of the reported pair
  double objective = 0.0;    ///< sqrt(||A||_F ||B||_F)
  double final_penalty = 0.0;
  bool feasible = false;     ///< feasibility <= 1e-6
  /// Best feasible objective after each penalty stage (+inf before the
  /// first feasible stage).
  std::vector<double> best_by_stage;
};

struct MinimizeResult {
  ComplexMatrix best_a;
  ComplexMatrix best_b;
  double objective = 0.0;    ///< ||A||_F after rescaling to ||A||_F = ||B||_F
  double feasibility = 0.0;
  double lower_bound = 0.0;
  bool certified = false;    ///< some restart reached feasibility <= 1e-6
  std::size_t best_restart = 0;
  std::vector<RestartTrace> trace;

  /// CSV "restart,iters,feasibility,objective".
  std::string to_csv() const;
};

/// sqrt(||target||_{C1} / 2): any A, B with [A, B] = target and
/// ||A||_F = ||B||_F satisfy ||A||_F >= this value.
double lower_bound_certificate(const ComplexMatrix& target);

struct PenaltyValue {
  ComplexMatrix grad_a;
  ComplexMatrix grad_b;
  double value = 0.0;
};

/// value = ||A||^2 + ||B||^2 + mu ||R||^2 with R = [A, B] - target, and the
/// gradients gA = 2A + 2mu(R B* - B* R), gB = 2B + 2mu(A* R - R A*), where
/// Re/Im of an entry of g are the partial derivatives in Re/Im of the
/// corresponding entry.
PenaltyValue penalty_gradient(const ComplexMatrix& a, const ComplexMatrix& b,
                              const ComplexMatrix& target, double mu);

/// Multi-restart penalty descent. Never throws for an infeasible outcome;
/// check MinimizeResult::certified.
MinimizeResult minimize_commutator(const MinimizeConfig& config);

struct OptimalPair {
  ComplexMatrix a;
  ComplexMatrix b;
  SolveReport report;
};

/// The explicit 4x4 optimal pair for target diag(-1, 1/3, 1/3, 1/3).
ComplexMatrix optimal_a();
ComplexMatrix optimal_b();

/// Checks [A,B] = diag(-1,1/3,1/3,1/3) and ||A||_F = ||B||_F = sqrt(4/3) to
/// 1e-15, plus the staircase zero pattern of U* A U. Throws
/// ConstructionError when any check fails.
OptimalPair verify_optimal_pair();

/// Diagonal of [A, B] from sum_k a_ik b_ki - b_ik a_ki, entry by entry.
std::vector<Complex> diagonal_equations(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace commlab::minimize
