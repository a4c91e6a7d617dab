#pragma once

// Run orchestration behind the commlab executable: a line-oriented config
// format, dispatch to the modules, and atomic artifact output.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "commlab/report.hpp"

namespace commlab::cli {

enum class Command { AndersonVerify, Staircase, SolveSelfcomm, Lie, Minimize, Seq };

/// Parses "anderson-verify", "staircase", ... (DomainError otherwise).
Command parse_command(std::string_view name);
std::string_view command_name(Command c);

struct RunConfig {
  Command command = Command::AndersonVerify;
  std::string mode;                    ///< lie: killing | solve-sl; seq: classify | mean | type-a
  std::vector<std::string> inputs;     ///< matrix files, or one CSV for seq
  std::string output_dir = ".";
  std::string out;                     ///< primary artifact path; default inside output_dir
  std::string report;                  ///< report CSV path; default output_dir/report.csv
  std::map<std::string, double> tolerances;  ///< check name -> tolerance override
  std::uint64_t seed = 0;
  std::size_t parallelism = 1;

  std::string family;                  ///< weight or sequence family
  std::size_t block_count = 10;
  std::string type = "A";              ///< solve-selfcomm: A or C
  std::size_t n = 3;                   ///< lie killing: matrix size of sl(n)
  std::size_t restarts = 50;
  std::size_t max_iters = 20000;
  bool selfadjoint = false;

  /// DomainError for non-positive tolerances, missing inputs or a bad mode.
  void validate() const;
};

/// "key = value" lines; '#' starts a comment; blank lines are skipped.
/// Keys: command, mode, input (comma separated), output_dir, out, report,
/// seed, parallelism, family, block_count, type, n, restarts, max_iters,
/// selfadjoint, tolerance.<check_name>. Unknown or duplicate keys and
/// malformed values raise ParseError with the line number.
RunConfig parse_config(std::string_view text);

/// Applies COMMLAB_SEED when set. ParseError if it is not an integer.
void apply_environment(RunConfig& config);

/// Runs the configured command, writing artifacts atomically. The output
/// locations are checked for writability before any computation.
/// Tolerance overrides replace the tolerance of the matching report rows;
/// an override naming no row is a DomainError.
SolveReport run(const RunConfig& config);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

/// One finite value per non-blank line ('#' comments allowed).
std::vector<double> parse_value_csv(std::string_view text);

/// The text formats accepted and produced, printed by --help.
std::string_view format_grammar();

/// Process exit code for an outcome: 0 pass, 2 parse/config/domain errors,
/// 3 tolerance failures, 4 numeric non-convergence.
int exit_code_for(const SolveReport& report);
int exit_code_for(const std::exception& error);

}  // namespace commlab::cli
