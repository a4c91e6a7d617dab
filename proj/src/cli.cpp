#include "commlab/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

#include "commlab/anderson.hpp"
#include "commlab/errors.hpp"
#include "commlab/idealseq.hpp"
#include "commlab/liealg.hpp"
#include "commlab/minimize.hpp"
#include "commlab/numkit.hpp"
#include "commlab/selfcomm.hpp"
#include "commlab/staircase.hpp"

namespace fs = std::filesystem;

namespace commlab::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_unsigned(std::string_view v, std::size_t line, std::string_view key) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ParseError("'" + std::string(key) + "' expects a non-negative integer, got '" +
                         std::string(v) + "'",
                     line);
  }
  return out;
}

double parse_real(std::string_view v, std::size_t line, std::string_view what) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out)) {
    throw ParseError(std::string(what) + " expects a finite number, got '" + std::string(v) + "'",
                     line);
  }
  return out;
}

bool parse_bool(std::string_view v, std::size_t line, std::string_view key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("'" + std::string(key) + "' expects true or false", line);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> load_values(const std::string& path) {
  try {
    return parse_value_csv(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.detail(), e.line());
  }
}

void require_writable_dir(const fs::path& dir) {
  const fs::path d = dir.empty() ? fs::path(".") : dir;
  std::error_code ec;
  if (!fs::is_directory(d, ec)) {
    throw DomainError("output directory '" + d.string() + "' does not exist");
  }
  if (::access(d.c_str(), W_OK) != 0) {
    throw DomainError("output directory '" + d.string() + "' is not writable");
  }
}

std::string in_dir(const RunConfig& c, const std::string& explicit_path, const std::string& name) {
  return explicit_path.empty() ? (fs::path(c.output_dir) / name).string() : explicit_path;
}

std::string matrix_csv(const std::vector<double>& values) {
  std::string out;
  char buf[64];
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out += buf;
  }
  return out;
}

class Artifacts {
public:
  explicit Artifacts(SolveReport& report) : report_(report) {}
  void text(const std::string& path, const std::string& content) {
    write_atomic(path, content);
    report_.artifacts.push_back(path);
  }
  void matrix(const std::string& path, const ComplexMatrix& m) { text(path, numkit::format_matrix(m)); }

private:
  SolveReport& report_;
};

ComplexMatrix single_input(const RunConfig& c) {
  if (c.inputs.size() != 1) throw DomainError("exactly one input file is required");
  return numkit::load_matrix(c.inputs.front());
}

anderson::WeightSequence weight_family(const RunConfig& c) {
  const std::size_t length = c.block_count + 1;
  const std::string prefix = "explicit:";
  if (c.family.rfind(prefix, 0) == 0) {
    const std::string rest = c.family.substr(prefix.size());
    std::error_code ec;
    if (fs::is_regular_file(rest, ec)) {
      return anderson::WeightSequence::explicit_values(load_values(rest));
    }
  }
  return anderson::WeightSequence::parse(c.family, length);
}

void run_anderson(const RunConfig& c, SolveReport& rep, Artifacts& out) {
  const auto weights = weight_family(c);
  const double tol = c.tolerances.count("interior_residual") ? c.tolerances.at("interior_residual")
                                                             : 1e-10;
  auto pc = anderson::verify_positive_commutator(weights, c.block_count, tol);
  rep.checks = pc.report.checks;
  out.text(in_dir(c, c.out, "blocks.csv"), pc.to_csv());
}

void run_staircase(const RunConfig& c, SolveReport& rep, Artifacts& out) {
  if (c.inputs.empty()) throw DomainError("staircase needs at least one operator file");
  std::vector<ComplexMatrix> ops;
  for (const auto& p : c.inputs) ops.push_back(numkit::load_matrix(p));
  const auto st = staircase::staircase_form(ops, c.selfadjoint);
  const std::size_t dim = static_cast<std::size_t>(st.unitary.rows());
  const ComplexMatrix eye = numkit::identity(dim);
  rep.check_at_most("unitarity", (st.unitary.adjoint() * st.unitary - eye).norm(), 1e-9);
  rep.check_at_most("fixes_e1", (st.unitary.col(0) - numkit::basis_vector(dim, 0)).norm(), 1e-9);
  double recon = 0.0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    recon = std::max(recon, (st.unitary * st.transformed[i] * st.unitary.adjoint() - ops[i]).norm());
  }
  rep.check_at_most("reconstruction", recon, 1e-9 * (1.0 + dim));
  rep.check_true("band_bound", staircase::verify_band(st, ops.size(), c.selfadjoint, 1e-9));

  const fs::path base = c.out.empty() ? fs::path(c.output_dir) : fs::path(c.out);
  out.matrix((base / "U.txt").string(), st.unitary);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::string k = std::to_string(i + 1);
    out.matrix((base / ("T" + k + ".txt")).string(), st.transformed[i]);
    out.text((base / ("band" + k + ".csv")).string(),
             staircase::band_csv(st, i, ops.size(), c.selfadjoint));
  }
}

void run_selfcomm(const RunConfig& c, SolveReport& rep, Artifacts& out) {
  const ComplexMatrix t = single_input(c);
  ComplexMatrix y;
  if (c.type == "A") {
    const auto sol = selfcomm::solve_type_A(t);
    rep.check_at_most("residual", sol.residual, 1e-9 * (1.0 + t.norm()));
    rep.note("hs_norm_Y", numkit::hs_norm(sol.solution));
    y = sol.solution;
  } else {
    if (t.rows() % 2 != 0) throw DomainError("type C needs an even dimension");
    const auto j = selfcomm::make_anticonjugation(static_cast<std::size_t>(t.rows()) / 2);
    const auto sol = selfcomm::solve_type_C(t, j);
    rep.checks = sol.report.checks;
    y = sol.solution;
  }
  out.matrix(in_dir(c, c.out, "Y.txt"), y);
}

void run_lie(const RunConfig& c, SolveReport& rep, Artifacts& out) {
  if (c.mode == "killing") {
    const liealg::SlRootData roots(c.n - 1);
    const auto basis = roots.basis();
    const Eigen::MatrixXcd gram = liealg::killing_gram(basis);
    // reference value 2n Tr(XW)
    double worst = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const Complex expect =
            2.0 * static_cast<double>(c.n) * numkit::trace(basis[i] * basis[k]);
        const double err = std::abs(gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) - expect);
        worst = std::max(worst, err / (1.0 + std::abs(expect)));
      }
    }
    rep.check_at_most("killing_vs_trace_form", worst, 1e-9);
    rep.check_true("semisimple", liealg::is_semisimple(basis));
    ComplexMatrix g = gram;
    out.matrix(in_dir(c, c.out, "killing.txt"), g);
  } else {
    const ComplexMatrix a = single_input(c);
    const auto sol = liealg::solve_sl(a);
    rep.checks = sol.report.checks;
    out.matrix(in_dir(c, c.out, "Y.txt"), sol.solution);
  }
}

void run_minimize(const RunConfig& c, SolveReport& rep, Artifacts& out) {
  minimize::MinimizeConfig mc;
  mc.target = single_input(c);
  mc.restarts = c.restarts;
  mc.max_iters = c.max_iters;
  mc.seed = c.seed;
  mc.parallelism = c.parallelism;
  const auto res = minimize::minimize_commutator(mc);
  out.text(in_dir(c, c.out, "trace.csv"), res.to_csv());
  out.matrix((fs::path(c.output_dir) / "A.txt").string(), res.best_a);
  out.matrix((fs::path(c.output_dir) / "B.txt").string(), res.best_b);
  if (!res.certified) {
    throw NumericError("minimize: no restart reached feasibility 1e-6 (best " +
                       std::to_string(res.feasibility) + ")");
  }
  rep.check_at_most("feasibility", res.feasibility, 1e-6);
  rep.check_at_most("certificate_gap", res.lower_bound - res.objective, 1e-6);
  rep.note("objective", res.objective);
  rep.note("lower_bound", res.lower_bound);
  rep.note("best_restart", static_cast<double>(res.best_restart));
}

void run_seq(const RunConfig& c, SolveReport& rep, Artifacts& out) {
  if (c.mode == "classify") {
    const auto fam = idealseq::SequenceFamily::parse(c.family);
    const auto cls = idealseq::classify_hsii(fam);
    auto verdict = [](const std::optional<bool>& v) { return v ? (*v ? 1.0 : 0.0) : -1.0; };
    rep.note("in_trace_class", verdict(cls.in_trace_class));
    rep.note("in_commutator_class", verdict(cls.in_commutator_class));
    rep.note("partial_sum", cls.diagnostics.partial_sum);
    rep.note("weighted_partial_sum", cls.diagnostics.weighted_partial_sum);
    for (const auto& f : cls.diagnostics.sum_fits) rep.note("sum_slope_" + f.model, f.slope);
    for (const auto& f : cls.diagnostics.weighted_fits) {
      rep.note("weighted_slope_" + f.model, f.slope);
    }
    return;
  }
  if (c.inputs.size() != 1) throw DomainError("seq " + c.mode + " needs one CSV input");
  const auto values = load_values(c.inputs.front());
  if (c.mode == "mean") {
    out.text(in_dir(c, c.out, "mean.csv"), matrix_csv(idealseq::arithmetic_mean_sequence(values)));
    rep.note("length", static_cast<double>(values.size()));
  } else {
    const double tol = c.tolerances.count("defect") ? c.tolerances.at("defect") : 1e-12;
    const auto r = idealseq::is_type_A_prefix(values, tol);
    rep.check_at_most("defect", r.defect, tol);
    rep.note("positive_sum", r.positive_sum);
    rep.note("negative_sum", r.negative_sum);
    rep.note("last_magnitude", r.last_magnitude);
  }
}

const std::set<std::string, std::less<>> kKeys = {
    "command", "mode",  "input", "output_dir", "out",      "report",    "seed",       "parallelism",
    "family",  "block_count", "type", "n",     "restarts", "max_iters", "selfadjoint"};

}  // namespace

Command parse_command(std::string_view name) {
  if (name == "anderson-verify") return Command::AndersonVerify;
  if (name == "staircase") return Command::Staircase;
  if (name == "solve-selfcomm") return Command::SolveSelfcomm;
  if (name == "lie") return Command::Lie;
  if (name == "minimize") return Command::Minimize;
  if (name == "seq") return Command::Seq;
  throw DomainError("unknown command '" + std::string(name) + "'");
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::AndersonVerify: return "anderson-verify";
    case Command::Staircase: return "staircase";
    case Command::SolveSelfcomm: return "solve-selfcomm";
    case Command::Lie: return "lie";
    case Command::Minimize: return "minimize";
    case Command::Seq: return "seq";
  }
  return "?";
}

void RunConfig::validate() const {
  for (const auto& [name, tol] : tolerances) {
    if (!(tol > 0.0)) throw DomainError("tolerance '" + name + "' must be positive");
  }
  if (parallelism == 0) throw DomainError("parallelism must be >= 1");
  switch (command) {
    case Command::AndersonVerify:
      if (family.empty()) throw DomainError("anderson-verify needs a weight family");
      if (block_count < 3) throw DomainError("block_count must be >= 3");
      break;
    case Command::Staircase:
      if (inputs.empty()) throw DomainError("staircase needs at least one input");
      break;
    case Command::SolveSelfcomm:
      if (type != "A" && type != "C") throw DomainError("type must be A or C");
      if (inputs.size() != 1) throw DomainError("solve-selfcomm needs one input");
      break;
    case Command::Lie:
      if (mode != "killing" && mode != "solve-sl") throw DomainError("lie mode must be killing or solve-sl");
      if (mode == "killing" && n < 2) throw DomainError("lie killing needs n >= 2");
      if (mode == "solve-sl" && inputs.size() != 1) throw DomainError("lie solve-sl needs one input");
      break;
    case Command::Minimize:
      if (inputs.size() != 1) throw DomainError("minimize needs one target file");
      if (restarts == 0 || max_iters == 0) throw DomainError("restarts and max_iters must be >= 1");
      break;
    case Command::Seq:
      if (mode != "classify" && mode != "mean" && mode != "type-a") {
        throw DomainError("seq mode must be classify, mean or type-a");
      }
      if (mode == "classify" && family.empty()) throw DomainError("seq classify needs a family");
      break;
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key", line_no);
    if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no);
    const bool tol_key = key.rfind("tolerance.", 0) == 0 && key.size() > 10;
    if (!tol_key && !kKeys.count(key)) throw ParseError("unknown key '" + key + "'", line_no);
    if (!seen.insert(key).second) throw ParseError("duplicate key '" + key + "'", line_no);

    if (tol_key) {
      const double t = parse_real(value, line_no, key);
      if (!(t > 0.0)) throw ParseError("'" + key + "' must be positive", line_no);
      cfg.tolerances[key.substr(10)] = t;
    } else if (key == "command") {
      try {
        cfg.command = parse_command(value);
      } catch (const DomainError& e) {
        throw ParseError(e.what(), line_no);
      }
    } else if (key == "mode") {
      cfg.mode = value;
    } else if (key == "input") {
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = std::min(rest.find(','), rest.size());
        const auto item = trim(rest.substr(0, comma));
        if (item.empty()) throw ParseError("empty entry in input list", line_no);
        cfg.inputs.emplace_back(item);
        rest = comma < rest.size() ? rest.substr(comma + 1) : std::string_view{};
      }
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "report") {
      cfg.report = value;
    } else if (key == "seed") {
      cfg.seed = parse_unsigned<std::uint64_t>(value, line_no, key);
    } else if (key == "parallelism") {
      cfg.parallelism = parse_unsigned<std::size_t>(value, line_no, key);
    } else if (key == "family") {
      cfg.family = value;
    } else if (key == "block_count") {
      cfg.block_count = parse_unsigned<std::size_t>(value, line_no, key);
    } else if (key == "type") {
      cfg.type = value;
    } else if (key == "n") {
      cfg.n = parse_unsigned<std::size_t>(value, line_no, key);
    } else if (key == "restarts") {
      cfg.restarts = parse_unsigned<std::size_t>(value, line_no, key);
    } else if (key == "max_iters") {
      cfg.max_iters = parse_unsigned<std::size_t>(value, line_no, key);
    } else if (key == "selfadjoint") {
      cfg.selfadjoint = parse_bool(value, line_no, key);
    }
  }
  if (!seen.count("command")) throw ParseError("command required", 0);
  return cfg;
}

void apply_environment(RunConfig& config) {
  const char* env = std::getenv("COMMLAB_SEED");
  if (env == nullptr) return;
  const std::string_view v = trim(env);
  config.seed = parse_unsigned<std::uint64_t>(v, 0, "COMMLAB_SEED");
}

void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DomainError("cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw DomainError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw DomainError("cannot rename onto '" + path + "'");
  }
}

std::vector<double> parse_value_csv(std::string_view text) {
  std::vector<double> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    out.push_back(parse_real(line, line_no, "value"));
  }
  return out;
}

SolveReport run(const RunConfig& config) {
  config.validate();
  // fail before computing when any destination is unusable
  require_writable_dir(config.output_dir);
  if (!config.report.empty()) require_writable_dir(fs::path(config.report).parent_path());
  if (!config.out.empty()) {
    if (config.command == Command::Staircase) {
      require_writable_dir(config.out);
    } else {
      require_writable_dir(fs::path(config.out).parent_path());
    }
  }

  const auto start = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.command = std::string(command_name(config.command));
  if (!config.mode.empty()) rep.command += " " + config.mode;
  Artifacts out(rep);
  switch (config.command) {
    case Command::AndersonVerify: run_anderson(config, rep, out); break;
    case Command::Staircase: run_staircase(config, rep, out); break;
    case Command::SolveSelfcomm: run_selfcomm(config, rep, out); break;
    case Command::Lie: run_lie(config, rep, out); break;
    case Command::Minimize: run_minimize(config, rep, out); break;
    case Command::Seq: run_seq(config, rep, out); break;
  }

  for (const auto& [name, tol] : config.tolerances) {
    bool matched = false;
    for (auto& row : rep.checks) {
      if (row.name != name) continue;
      matched = true;
      row.tolerance = tol;
      row.pass = row.measured <= tol;
    }
    if (!matched && name != "interior_residual") {
      throw DomainError("tolerance override '" + name + "' matches no report row");
    }
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string report_path = in_dir(config, config.report, "report.csv");
  out.text(report_path, rep.to_csv());
  return rep;
}

std::string_view format_grammar() {
  return R"(Formats
  matrix file   : line 1 "rows cols"; then rows*cols lines "re im" in row-major
                  order, decimal literals (written with 17 significant digits)
  value CSV     : one finite decimal per line; blank lines and '#' comments ignored
  report CSV    : header "check_name,value,tolerance,pass"; pass is 1 or 0
  weight family : powerlog:C,p,q     d_n = C n^p log(n+1)^q    (anderson-verify)
                  explicit:v1,v2,... or explicit:<value CSV file>
  seq family    : powerlog:C,p,q     d_n = C n^-p log(n+1)^-q  (seq classify)
                  explicit:v1,v2,...
  config file   : "key = value" per line, '#' comments; keys
                  command mode input output_dir out report seed parallelism family
                  block_count type n restarts max_iters selfadjoint tolerance.<check>
                  defaults: output_dir=. seed=0 parallelism=1 block_count=10 type=A
                  n=3 restarts=50 max_iters=20000 selfadjoint=false
Environment
  COMMLAB_SEED  overrides the configured seed
Exit codes
  0 all checks pass, 2 parse/config/input error, 3 tolerance failure,
  4 numeric non-convergence
)";
}

int exit_code_for(const SolveReport& report) { return report.passed() ? 0 : 3; }

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const NumericError*>(&error)) return 4;
  if (dynamic_cast<const VerificationError*>(&error) ||
      dynamic_cast<const ConstructionError*>(&error) ||
      dynamic_cast<const ConsistencyError*>(&error)) {
    return 3;
  }
  return 2;
}

}  // namespace commlab::cli
