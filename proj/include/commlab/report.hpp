#pragma once

#include <string>
#include <vector>

namespace commlab {

struct CheckRow {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Outcome of a solver or verification run: named checks plus bookkeeping.
/// The overall verdict is the conjunction of the rows.
struct SolveReport {
  std::string command;
  std::vector<CheckRow> checks;
  std::vector<std::string> artifacts;
  double wall_seconds = 0.0;

  /// Records a row that passes when measured <= tolerance.
  const CheckRow& check_at_most(std::string name, double measured, double tolerance);
  /// Records a boolean outcome; measured is 1 or 0 and tolerance is unused.
  const CheckRow& check_true(std::string name, bool ok);
  /// Records an informational row that never fails.
  const CheckRow& note(std::string name, double value);

  bool passed() const;
  /// First failing row, or nullptr.
  const CheckRow* first_failure() const;
  const CheckRow* find(const std::string& name) const;

  /// CSV with header "check_name,value,tolerance,pass".
  std::string to_csv() const;
};

}  // namespace commlab
