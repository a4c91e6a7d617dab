#pragma once

// Sequence-level classifiers: trace-class and commutator-class membership of
// diagonal operators, type (A) balance of signed lists, and the arithmetic
// mean sequence.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace commlab::idealseq {

/// d_n = scale * n^{-power} * log(n+1)^{-log_power}. Note the decaying
/// sign convention, unlike the growing weights of anderson::PowerLog.
struct PowerLog {
  double scale = 1.0;
  double power = 1.0;
  double log_power = 0.0;

  double term(std::size_t n) const;
};

struct Explicit {
  std::vector<double> values;
};

class SequenceFamily {
public:
  using Kind = std::variant<PowerLog, Explicit>;

  /// DomainError for a negative or non-finite scale.
  static SequenceFamily power_log(double scale, double power, double log_power);
  static SequenceFamily explicit_values(std::vector<double> values);
  /// "powerlog:C,p,q" or "explicit:v1,v2,...".
  static SequenceFamily parse(const std::string& text);

  const Kind& kind() const noexcept { return kind_; }
  /// First `count` terms (clipped to the list length for Explicit).
  std::vector<double> prefix(std::size_t count) const;

private:
  explicit SequenceFamily(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// Least-squares fit S_N ~ a + b * model(N) over sampled prefixes.
struct GrowthFit {
  std::string model;  ///< "log" or "log2"
  double intercept = 0.0;
  double slope = 0.0;
  double rms_residual = 0.0;
};

struct HsiiDiagnostics {
  std::size_t horizon = 0;
  double partial_sum = 0.0;          ///< sum_{n <= N} d_n
  double weighted_partial_sum = 0.0; ///< sum_{n <= N} d_n log n
  std::vector<GrowthFit> sum_fits;
  std::vector<GrowthFit> weighted_fits;
};

struct HsiiClassification {
  std::optional<bool> in_trace_class;       ///< sum d_n < inf
  std::optional<bool> in_commutator_class;  ///< sum d_n log n < inf
  HsiiDiagnostics diagnostics;
};

/// Analytic verdicts for PowerLog families by the integral test. Explicit
/// families stay indeterminate and only carry diagnostics.
HsiiClassification classify_hsii(const SequenceFamily& family, std::size_t horizon = 100000);

struct TypeAReport {
  double positive_sum = 0.0;
  double negative_sum = 0.0;
  double defect = 0.0;          ///< |sum lambda+ - sum lambda-|
  double last_magnitude = 0.0;  ///< |lambda_N|, 0 for an empty list
  bool balanced = false;        ///< defect <= tail_tolerance
};

TypeAReport is_type_A_prefix(const std::vector<double>& lambda, double tail_tolerance = 1e-12);

/// Running means of lambda after a stable re-sort by decreasing modulus.
std::vector<double> arithmetic_mean_sequence(std::vector<double> lambda);

}  // namespace commlab::idealseq
