// commlab: command-line front end for the commutator toolkit.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commlab/cli.hpp"
#include "commlab/errors.hpp"

using commlab::cli::Command;
using commlab::cli::RunConfig;

namespace {

struct Flags {
  std::string config_path;
  std::string output_dir;
  std::string report;
  std::string out;
  std::vector<std::string> tolerances;
  std::vector<std::string> inputs;
  std::string family;
  std::string type;
  std::uint64_t seed = 0;
  std::size_t parallelism = 1;
  std::size_t block_count = 10;
  std::size_t n = 3;
  std::size_t restarts = 50;
  std::size_t max_iters = 20000;
  bool selfadjoint = false;
};

RunConfig base_config(const Flags& f, Command command) {
  if (f.config_path.empty()) {
    RunConfig c;
    c.command = command;
    return c;
  }
  std::ifstream in(f.config_path);
  if (!in) throw commlab::DomainError("cannot open config '" + f.config_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    RunConfig c = commlab::cli::parse_config(ss.str());
    if (c.command != command) {
      throw commlab::DomainError("config command '" +
                                 std::string(commlab::cli::command_name(c.command)) +
                                 "' does not match the subcommand");
    }
    return c;
  } catch (const commlab::ParseError& e) {
    throw commlab::ParseError(f.config_path + ": " + e.detail(), e.line());
  }
}

void print_report(const commlab::SolveReport& rep) {
  for (const auto& row : rep.checks) {
    std::printf("%-28s %-24.17g %-10.3g %s\n", row.name.c_str(), row.measured, row.tolerance,
                row.pass ? "pass" : "FAIL");
  }
  for (const auto& a : rep.artifacts) std::printf("wrote %s\n", a.c_str());
  std::printf("%s: %s in %.3f s\n", rep.command.c_str(), rep.passed() ? "PASS" : "FAIL",
              rep.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"commlab: commutator and self-commutator toolkit"};
  app.footer(std::string(commlab::cli::format_grammar()));
  app.require_subcommand(1);

  Flags f;
  app.add_option("--config", f.config_path, "key = value config file; flags override it");
  auto* o_dir = app.add_option("--output-dir", f.output_dir, "directory for artifacts");
  auto* o_report = app.add_option("--report", f.report, "report CSV path");
  auto* o_tol = app.add_option("--tolerance", f.tolerances, "override as check_name=value");
  auto* o_par = app.add_option("--parallelism", f.parallelism, "worker count across restarts");

  auto* anderson = app.add_subcommand("anderson-verify", "verify the positive commutator [C, Z]");
  auto* o_family_a = anderson->add_option("--family", f.family, "powerlog:C,p,q or explicit:...");
  auto* o_blocks = anderson->add_option("--block-count", f.block_count, "generator blocks K");
  auto* o_out_a = anderson->add_option("--out", f.out, "block CSV path");

  auto* stair = app.add_subcommand("staircase", "simultaneous staircase form");
  auto* o_in_s = stair->add_option("--input", f.inputs, "operator matrix files")->expected(1, -1);
  auto* o_sa = stair->add_flag("--selfadjoint", f.selfadjoint, "operators are Hermitian");
  auto* o_out_s = stair->add_option("--out", f.out, "directory for U, T_i and band CSVs");

  auto* sc = app.add_subcommand("solve-selfcomm", "solve [Y*, Y] = T");
  auto* o_type = sc->add_option("--type", f.type, "A or C")->check(CLI::IsMember({"A", "C"}));
  auto* o_in_c = sc->add_option("--input", f.inputs, "matrix file")->expected(1);
  auto* o_out_c = sc->add_option("--out", f.out, "solution matrix path");

  auto* lie = app.add_subcommand("lie", "Lie algebra tools");
  lie->require_subcommand(1);
  auto* killing = lie->add_subcommand("killing", "Killing form of sl(n)");
  auto* o_n = killing->add_option("--n", f.n, "matrix size n of sl(n)");
  auto* o_out_k = killing->add_option("--out", f.out, "Gram matrix path");
  auto* solve_sl = lie->add_subcommand("solve-sl", "root-space solver on sl(n)");
  auto* o_in_l = solve_sl->add_option("--input", f.inputs, "matrix file")->expected(1);
  auto* o_out_l = solve_sl->add_option("--out", f.out, "solution matrix path");

  auto* mini = app.add_subcommand("minimize", "minimal-norm [A, B] = target");
  auto* o_target = mini->add_option("--target", f.inputs, "target matrix file")->expected(1);
  auto* o_restarts = mini->add_option("--restarts", f.restarts, "random restarts");
  auto* o_seed = mini->add_option("--seed", f.seed, "RNG seed (COMMLAB_SEED overrides)");
  auto* o_iters = mini->add_option("--max-iters", f.max_iters, "iterations per restart");
  auto* o_out_m = mini->add_option("--out", f.out, "per-restart trace CSV");

  auto* seq = app.add_subcommand("seq", "sequence classifiers");
  seq->require_subcommand(1);
  auto* classify = seq->add_subcommand("classify", "trace / commutator class of a family");
  auto* o_family_q = classify->add_option("--family", f.family, "powerlog:C,p,q or explicit:...");
  auto* mean = seq->add_subcommand("mean", "arithmetic mean sequence");
  auto* o_in_mean = mean->add_option("--input", f.inputs, "value CSV")->expected(1);
  auto* o_out_mean = mean->add_option("--out", f.out, "output CSV");
  auto* typea = seq->add_subcommand("type-a", "balance of positive and negative parts");
  auto* o_in_ta = typea->add_option("--input", f.inputs, "value CSV")->expected(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    Command command = Command::AndersonVerify;
    if (*stair) command = Command::Staircase;
    if (*sc) command = Command::SolveSelfcomm;
    if (*lie) command = Command::Lie;
    if (*mini) command = Command::Minimize;
    if (*seq) command = Command::Seq;
    RunConfig c = base_config(f, command);

    if (*lie) c.mode = *killing ? "killing" : "solve-sl";
    if (*seq) c.mode = *classify ? "classify" : (*mean ? "mean" : "type-a");
    if (*o_dir) c.output_dir = f.output_dir;
    if (*o_report) c.report = f.report;
    if (*o_par) c.parallelism = f.parallelism;
    for (const auto& t : f.tolerances) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw commlab::ParseError("--tolerance expects name=value", 0);
      std::size_t used = 0;
      const std::string value = t.substr(eq + 1);
      double v = 0.0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != value.size()) {
        throw commlab::ParseError("--tolerance value '" + value + "' is not a number", 0);
      }
      c.tolerances[t.substr(0, eq)] = v;
    }
    for (auto* o : {o_family_a, o_family_q}) {
      if (*o) c.family = f.family;
    }
    for (auto* o : {o_in_s, o_in_c, o_in_l, o_target, o_in_mean, o_in_ta}) {
      if (*o) c.inputs = f.inputs;
    }
    for (auto* o : {o_out_a, o_out_s, o_out_c, o_out_k, o_out_l, o_out_m, o_out_mean}) {
      if (*o) c.out = f.out;
    }
    if (*o_blocks) c.block_count = f.block_count;
    if (*o_sa) c.selfadjoint = true;
    if (*o_type) c.type = f.type;
    if (*o_n) c.n = f.n;
    if (*o_restarts) c.restarts = f.restarts;
    if (*o_seed) c.seed = f.seed;
    if (*o_iters) c.max_iters = f.max_iters;
    (void)o_tol;
    commlab::cli::apply_environment(c);

    const auto rep = commlab::cli::run(c);
    print_report(rep);
    if (const auto* bad = rep.first_failure()) {
      std::fprintf(stderr, "error: check '%s' failed: %.17g > %.3g\n", bad->name.c_str(),
                   bad->measured, bad->tolerance);
    }
    return commlab::cli::exit_code_for(rep);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return commlab::cli::exit_code_for(e);
  }
}
