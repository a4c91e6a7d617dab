#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "commlab/cli.hpp"
#include "commlab/errors.hpp"
#include "commlab/numkit.hpp"
#include "doctest.h"

using namespace commlab;
using namespace commlab::cli;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per test case, removed on scope exit.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& tag) {
    dir = fs::temp_directory_path() / ("commlab_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("parse_config defaults and basic keys") {
  const auto c = parse_config("command = minimize\nseed = 7\n");
  CHECK(c.command == Command::Minimize);
  CHECK(c.seed == 7);
  CHECK(c.output_dir == ".");
  CHECK(c.parallelism == 1);
  CHECK(c.restarts == 50);
  CHECK(c.tolerances.empty());

  const auto d = parse_config(
      "# comment line\n"
      "command = staircase   # trailing\n"
      "input = a.txt, b.txt\n"
      "selfadjoint = true\n"
      "tolerance.residual = 1e-6\n");
  CHECK(d.inputs == std::vector<std::string>{"a.txt", "b.txt"});
  CHECK(d.selfadjoint);
  CHECK(d.tolerances.at("residual") == 1e-6);
}

TEST_CASE("parse_config errors carry line numbers") {
  try {
    parse_config("command = minimize\nseed = 1\nseed = 2\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("seed") != std::string::npos);
  }
  try {
    parse_config("");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.detail() == "command required");
  }
  try {
    parse_config("command = seq\nbogus = 1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_config("command = nope\n"), ParseError);
  CHECK_THROWS_AS(parse_config("command = seq\nseed = -3\n"), ParseError);
  CHECK_THROWS_AS(parse_config("command = seq\ntolerance.defect = 0\n"), ParseError);
  CHECK_THROWS_AS(parse_config("command = seq\nselfadjoint = maybe\n"), ParseError);
  CHECK_THROWS_AS(parse_config("command = seq\nno equals sign\n"), ParseError);
}

TEST_CASE("command names round-trip") {
  for (auto c : {Command::AndersonVerify, Command::Staircase, Command::SolveSelfcomm, Command::Lie,
                 Command::Minimize, Command::Seq}) {
    CHECK(parse_command(command_name(c)) == c);
  }
  CHECK_THROWS_AS(parse_command("frobnicate"), DomainError);
}

TEST_CASE("validate rejects incomplete configurations") {
  RunConfig c;
  c.command = Command::SolveSelfcomm;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.inputs = {"t.txt"};
  c.type = "B";
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.type = "A";
  CHECK_NOTHROW(c.validate());
  c.tolerances["residual"] = -1.0;
  CHECK_THROWS_AS(c.validate(), DomainError);

  RunConfig s;
  s.command = Command::Seq;
  s.mode = "sort";
  CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("COMMLAB_SEED overrides the seed") {
  RunConfig c;
  c.seed = 1;
  ::setenv("COMMLAB_SEED", "12345", 1);
  apply_environment(c);
  CHECK(c.seed == 12345);
  ::setenv("COMMLAB_SEED", "twelve", 1);
  CHECK_THROWS_AS(apply_environment(c), ParseError);
  ::unsetenv("COMMLAB_SEED");
  c.seed = 9;
  apply_environment(c);
  CHECK(c.seed == 9);
}

TEST_CASE("write_atomic replaces content and leaves no temp file") {
  Scratch s("atomic");
  const auto p = s.path("f.txt");
  write_atomic(p, "one\n");
  write_atomic(p, "two\n");
  CHECK(slurp(p) == "two\n");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(s.dir)) {
    (void)e;
    ++files;
  }
  CHECK(files == 1);
  CHECK_THROWS_AS(write_atomic(s.path("missing/f.txt"), "x"), DomainError);
}

TEST_CASE("parse_value_csv") {
  CHECK(parse_value_csv("1\n# c\n\n-2.5\n") == std::vector<double>{1.0, -2.5});
  try {
    parse_value_csv("1\n2\nthree\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_value_csv("inf\n"), ParseError);
}

TEST_CASE("exit code mapping") {
  SolveReport ok;
  ok.check_at_most("r", 0.0, 1.0);
  CHECK(exit_code_for(ok) == 0);
  SolveReport bad;
  bad.check_at_most("r", 2.0, 1.0);
  CHECK(exit_code_for(bad) == 3);
  CHECK(exit_code_for(ParseError("x", 1)) == 2);
  CHECK(exit_code_for(DomainError("x")) == 2);
  CHECK(exit_code_for(ShapeError("x")) == 2);
  CHECK(exit_code_for(VerificationError("x")) == 3);
  CHECK(exit_code_for(ConstructionError("x")) == 3);
  CHECK(exit_code_for(NumericError("x")) == 4);
  CHECK(exit_code_for(std::runtime_error("x")) == 2);
}

TEST_CASE("solve-selfcomm type A on diag(1/3,1/3,1/3,-1)") {
  Scratch s("selfcomm");
  const ComplexMatrix t = numkit::diagonal({1.0 / 3, 1.0 / 3, 1.0 / 3, -1.0});
  save(s.path("t.txt"), numkit::format_matrix(t));
  RunConfig c;
  c.command = Command::SolveSelfcomm;
  c.inputs = {s.path("t.txt")};
  c.output_dir = s.dir.string();
  const auto rep = run(c);
  CHECK(rep.passed());
  REQUIRE(rep.find("hs_norm_Y") != nullptr);
  CHECK(std::abs(rep.find("hs_norm_Y")->measured - std::sqrt(2.0)) <= 1e-12);

  // the written solution re-parses bitwise and solves the equation
  const std::string text = slurp(s.path("Y.txt"));
  const ComplexMatrix y = numkit::parse_matrix(text);
  CHECK(numkit::format_matrix(y) == text);
  CHECK((numkit::self_commutator(y) - t).norm() <= 1e-9);
  CHECK(slurp(s.path("report.csv")).rfind("check_name,value,tolerance,pass\n", 0) == 0);

  // an absurd tolerance override flips the verdict
  c.tolerances["residual"] = 1e-300;
  const auto tight = run(c);
  CHECK_FALSE(tight.passed());
  CHECK(exit_code_for(tight) == 3);

  c.tolerances = {{"no_such_row", 1.0}};
  CHECK_THROWS_AS(run(c), DomainError);
}

TEST_CASE("solve-selfcomm type C") {
  Scratch s("typec");
  save(s.path("t.txt"), numkit::format_matrix(numkit::diagonal({1.0, -1.0})));
  RunConfig c;
  c.command = Command::SolveSelfcomm;
  c.type = "C";
  c.inputs = {s.path("t.txt")};
  c.output_dir = s.dir.string();
  CHECK(run(c).passed());
  save(s.path("odd.txt"), numkit::format_matrix(numkit::zeros(3, 3)));
  c.inputs = {s.path("odd.txt")};
  CHECK_THROWS_AS(run(c), DomainError);
}

TEST_CASE("anderson-verify with d_n = sqrt n passes") {
  Scratch s("anderson");
  RunConfig c;
  c.command = Command::AndersonVerify;
  c.family = "powerlog:1,0.5,0";
  c.block_count = 8;
  c.output_dir = s.dir.string();
  const auto rep = run(c);
  CHECK(rep.passed());
  CHECK(fs::exists(s.path("blocks.csv")));
  CHECK(fs::exists(s.path("report.csv")));

  // explicit family from a value file
  save(s.path("w.csv"), "1\n1\n1\n1\n1\n1\n1\n1\n1\n");
  c.family = "explicit:" + s.path("w.csv");
  CHECK(run(c).passed());
}

TEST_CASE("output locations are checked before computing") {
  Scratch s("outdir");
  RunConfig c;
  c.command = Command::Lie;
  c.mode = "killing";
  c.output_dir = s.path("does_not_exist");
  CHECK_THROWS_AS(run(c), DomainError);
  CHECK_FALSE(fs::exists(s.path("does_not_exist")));

  c.output_dir = s.dir.string();
  c.report = s.path("nowhere/report.csv");
  CHECK_THROWS_AS(run(c), DomainError);
  CHECK_FALSE(fs::exists(s.path("killing.txt")));

  if (::geteuid() != 0) {
    // root ignores permission bits, so this branch only runs unprivileged
    fs::create_directory(s.path("ro"));
    fs::permissions(s.path("ro"), fs::perms::owner_read | fs::perms::owner_exec);
    c.report.clear();
    c.output_dir = s.path("ro");
    CHECK_THROWS_AS(run(c), DomainError);
    fs::permissions(s.path("ro"), fs::perms::owner_all);
  }
}

TEST_CASE("lie and seq commands") {
  Scratch s("lie");
  RunConfig k;
  k.command = Command::Lie;
  k.mode = "killing";
  k.n = 3;
  k.output_dir = s.dir.string();
  CHECK(run(k).passed());
  CHECK(numkit::parse_matrix(slurp(s.path("killing.txt"))).rows() == 8);

  save(s.path("a.txt"), numkit::format_matrix(numkit::diagonal({1.0, -1.0})));
  RunConfig sl;
  sl.command = Command::Lie;
  sl.mode = "solve-sl";
  sl.inputs = {s.path("a.txt")};
  sl.output_dir = s.dir.string();
  CHECK(run(sl).passed());

  RunConfig cls;
  cls.command = Command::Seq;
  cls.mode = "classify";
  cls.family = "powerlog:1,1,2";
  cls.output_dir = s.dir.string();
  const auto r = run(cls);
  CHECK(r.find("in_trace_class")->measured == 1.0);
  CHECK(r.find("in_commutator_class")->measured == 0.0);

  save(s.path("v.csv"), "0.5\n0.25\n-0.75\n");
  RunConfig mean;
  mean.command = Command::Seq;
  mean.mode = "mean";
  mean.inputs = {s.path("v.csv")};
  mean.output_dir = s.dir.string();
  CHECK(run(mean).passed());
  const auto means = parse_value_csv(slurp(s.path("mean.csv")));
  REQUIRE(means.size() == 3);
  CHECK(means[0] == -0.75);
  CHECK(means[2] == 0.0);

  RunConfig ta = mean;
  ta.mode = "type-a";
  CHECK(run(ta).passed());
  save(s.path("u.csv"), "1\n1\n-1\n");
  ta.inputs = {s.path("u.csv")};
  CHECK_FALSE(run(ta).passed());

  save(s.path("broken.csv"), "1\nx\n");
  ta.inputs = {s.path("broken.csv")};
  CHECK_THROWS_AS(run(ta), ParseError);
}

TEST_CASE("staircase command writes per-operator artifacts") {
  Scratch s("stair");
  ComplexMatrix h = numkit::zeros(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) h(i, j) = Complex(double(i + j), double(i - j));
  }
  save(s.path("h.txt"), numkit::format_matrix(h));
  RunConfig c;
  c.command = Command::Staircase;
  c.inputs = {s.path("h.txt")};
  c.selfadjoint = true;
  c.output_dir = s.dir.string();
  CHECK(run(c).passed());
  for (const char* f : {"U.txt", "T1.txt", "band1.csv"}) CHECK(fs::exists(s.path(f)));
}

TEST_CASE("minimize through run() is reproducible") {
  Scratch s("min");
  save(s.path("t.txt"), numkit::format_matrix(numkit::diagonal({-1.0, 0.5, 0.5})));
  RunConfig c;
  c.command = Command::Minimize;
  c.inputs = {s.path("t.txt")};
  c.restarts = 4;
  c.seed = 11;
  c.output_dir = s.dir.string();
  const auto a = run(c);
  const std::string trace_a = slurp(s.path("trace.csv"));
  const std::string best_a = slurp(s.path("A.txt"));
  const auto b = run(c);
  CHECK(a.passed());
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].name == b.checks[i].name);
    CHECK(a.checks[i].measured == b.checks[i].measured);
  }
  CHECK(slurp(s.path("trace.csv")) == trace_a);
  CHECK(slurp(s.path("A.txt")) == best_a);
}
