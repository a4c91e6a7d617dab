#include "commlab/anderson.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "commlab/errors.hpp"

namespace commlab::anderson {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

double power_log_term(const PowerLog& f, std::size_t n) {
  const double nn = static_cast<double>(n);
  return f.scale * std::pow(nn, f.power) * std::pow(std::log(nn + 1.0), f.log_power);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ParseError("invalid number '" + item + "' in weight family", 0);
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw ParseError("invalid number '" + item + "' in weight family", 0);
    out.push_back(v);
  }
  return out;
}

}  // namespace

// --- WeightSequence ----------------------------------------------------------

WeightSequence::WeightSequence(Family family, std::vector<double> prefix, bool monotone)
    : family_(std::move(family)), prefix_(std::move(prefix)), monotone_(monotone) {
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    if (!std::isfinite(prefix_[i])) {
      throw DomainError("weight d_" + std::to_string(i + 1) + " is not finite");
    }
  }
  if (monotone_) {
    for (std::size_t i = 0; i < prefix_.size(); ++i) {
      if (prefix_[i] < 0.0) {
        throw DomainError("monotone weights must be >= 0; d_" + std::to_string(i + 1) + " < 0");
      }
      if (i > 0 && prefix_[i] < prefix_[i - 1]) {
        throw DomainError("monotone weights must be non-decreasing at n = " +
                          std::to_string(i + 1));
      }
    }
  }
}

WeightSequence WeightSequence::power_log(double scale, double power, double log_power,
                                         std::size_t length) {
  PowerLog f{scale, power, log_power};
  std::vector<double> prefix(length);
  for (std::size_t n = 1; n <= length; ++n) prefix[n - 1] = power_log_term(f, n);
  return WeightSequence(f, std::move(prefix), false);
}

WeightSequence WeightSequence::explicit_values(std::vector<double> values, bool monotone) {
  auto prefix = values;
  return WeightSequence(ExplicitValues{std::move(values)}, std::move(prefix), monotone);
}

WeightSequence WeightSequence::constant(double value, std::size_t length) {
  return power_log(value, 0.0, 0.0, length);
}

double WeightSequence::at(std::size_t n) const {
  if (n == 0 || n > prefix_.size()) {
    throw DomainError("weight index " + std::to_string(n) + " outside prefix of length " +
                      std::to_string(prefix_.size()));
  }
  return prefix_[n - 1];
}

WeightSequence WeightSequence::scaled(double t) const {
  std::vector<double> prefix = prefix_;
  for (double& v : prefix) v *= t;
  if (const auto* f = std::get_if<PowerLog>(&family_)) {
    PowerLog g = *f;
    g.scale *= t;
    return WeightSequence(g, std::move(prefix), false);
  }
  return WeightSequence(ExplicitValues{prefix}, prefix, monotone_ && t >= 0.0);
}

WeightSequence WeightSequence::parse(const std::string& spec, std::size_t length) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ParseError("weight family must be 'powerlog:C,p,q' or 'explicit:...', got '" + spec +
                         "'",
                     0);
  }
  const std::string kind = spec.substr(0, colon);
  const std::vector<double> args = parse_list(spec.substr(colon + 1));
  if (kind == "powerlog") {
    if (args.size() != 3) throw ParseError("powerlog needs exactly three parameters C,p,q", 0);
    return power_log(args[0], args[1], args[2], length);
  }
  if (kind == "explicit") {
    if (args.empty()) throw ParseError("explicit weight list is empty", 0);
    return explicit_values(args);
  }
  throw ParseError("unknown weight family '" + kind + "'", 0);
}

// --- blocks ------------------------------------------------------------------

GeneratorBlocks make_blocks(std::size_t n) {
  if (n == 0) throw DomainError("make_blocks: block index must be >= 1");
  const double nn = static_cast<double>(n);
  GeneratorBlocks g;
  g.a = numkit::zeros(n, n + 1);
  g.x = numkit::zeros(n, n + 1);
  g.b = numkit::zeros(n + 1, n);
  g.y = numkit::zeros(n + 1, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double down = std::sqrt(static_cast<double>(n - i));  // sqrt n, ..., sqrt 1
    const double up = std::sqrt(static_cast<double>(i + 1));    // sqrt 1, ..., sqrt n
    g.a(idx(i), idx(i)) = down / nn;
    g.x(idx(i), idx(i + 1)) = up / nn;
    g.b(idx(i + 1), idx(i)) = -up / (nn + 1.0);
    g.y(idx(i), idx(i)) = down / (nn + 1.0);
  }
  return g;
}

double IdentityReport::max_residual() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.residual);
  return m;
}

IdentityReport identity_checks(std::size_t n, double tolerance) {
  if (n == 0) throw DomainError("identity_checks: n must be >= 1");
  const auto g1 = make_blocks(1);
  const auto gn = make_blocks(n);
  const auto gm = make_blocks(n + 1);
  const double inv = 1.0 / static_cast<double>(n + 1);
  const ComplexMatrix eye = numkit::identity(n + 1);

  IdentityReport rep;
  rep.n = n;
  auto add = [&](std::string name, const ComplexMatrix& residual) {
    rep.rows.push_back({std::move(name), numkit::max_abs(residual)});
  };
  ComplexMatrix one(1, 1);
  one(0, 0) = 1.0;
  add("A1 Y1 - X1 B1 = 1", g1.a * g1.y - g1.x * g1.b - one);
  add("Bn Xn - Yn An = -I/(n+1)", gn.b * gn.x - gn.y * gn.a + inv * eye);
  add("An+1 Yn+1 - Xn+1 Bn+1 = I/(n+1)", gm.a * gm.y - gm.x * gm.b - inv * eye);
  add("Bn+1 Yn - Yn+1 Bn = 0", gm.b * gn.y - gm.y * gn.b);
  add("An Xn+1 - Xn An+1 = 0", gn.a * gm.x - gn.x * gm.a);

  for (const auto& row : rep.rows) {
    if (!(row.residual <= tolerance)) {
      throw ConstructionError("block identity '" + row.name + "' fails at n = " +
                              std::to_string(n) + " (residual " + std::to_string(row.residual) +
                              ")");
    }
  }
  return rep;
}

// --- BlockTriDiagonalOperator ------------------------------------------------

std::size_t block_offset(std::size_t k) { return k * (k - 1) / 2; }

BlockTriDiagonalOperator::BlockTriDiagonalOperator(std::vector<ComplexMatrix> diag_blocks,
                                                   std::vector<ComplexMatrix> super_blocks,
                                                   std::vector<ComplexMatrix> sub_blocks)
    : diag_(std::move(diag_blocks)), super_(std::move(super_blocks)), sub_(std::move(sub_blocks)) {
  const std::size_t count = super_.size();
  if (sub_.size() != count) {
    throw ShapeError("block operator: " + std::to_string(count) + " super blocks but " +
                     std::to_string(sub_.size()) + " sub blocks");
  }
  for (std::size_t n = 1; n <= count; ++n) {
    const auto& up = super_[n - 1];
    const auto& lo = sub_[n - 1];
    if (up.rows() != idx(n) || up.cols() != idx(n + 1)) {
      throw ShapeError("super block " + std::to_string(n) + " must be " + std::to_string(n) +
                       "x" + std::to_string(n + 1));
    }
    if (lo.rows() != idx(n + 1) || lo.cols() != idx(n)) {
      throw ShapeError("sub block " + std::to_string(n) + " must be " + std::to_string(n + 1) +
                       "x" + std::to_string(n));
    }
  }
  if (!diag_.empty()) {
    if (diag_.size() != count + 1) {
      throw ShapeError("block operator: expected " + std::to_string(count + 1) +
                       " diagonal blocks, got " + std::to_string(diag_.size()));
    }
    for (std::size_t k = 1; k <= diag_.size(); ++k) {
      if (diag_[k - 1].rows() != idx(k) || diag_[k - 1].cols() != idx(k)) {
        throw ShapeError("diagonal block " + std::to_string(k) + " must be " +
                         std::to_string(k) + "x" + std::to_string(k));
      }
    }
  }
}

std::size_t BlockTriDiagonalOperator::dimension() const noexcept {
  const std::size_t k = block_count() + 1;
  return k * (k + 1) / 2;
}

ComplexMatrix assemble(const BlockTriDiagonalOperator& op) {
  const std::size_t dim = op.dimension();
  ComplexMatrix m = numkit::zeros(dim, dim);
  for (std::size_t k = 1; k <= op.diag_blocks().size(); ++k) {
    m.block(idx(block_offset(k)), idx(block_offset(k)), idx(k), idx(k)) = op.diag_blocks()[k - 1];
  }
  for (std::size_t n = 1; n <= op.block_count(); ++n) {
    m.block(idx(block_offset(n)), idx(block_offset(n + 1)), idx(n), idx(n + 1)) =
        op.super_blocks()[n - 1];
    m.block(idx(block_offset(n + 1)), idx(block_offset(n)), idx(n + 1), idx(n)) =
        op.sub_blocks()[n - 1];
  }
  return m;
}

ModifiedPair build_modified(const WeightSequence& weights, std::size_t block_count) {
  if (weights.size() < block_count + 1) {
    throw DomainError("build_modified: need " + std::to_string(block_count + 1) +
                      " weights, prefix has " + std::to_string(weights.size()));
  }
  std::vector<ComplexMatrix> c_up, c_lo, z_up, z_lo;
  for (std::size_t n = 1; n <= block_count; ++n) {
    const double d = weights.at(n);
    if (d < 0.0) {
      throw DomainError("build_modified: weight d_" + std::to_string(n) + " is negative");
    }
    const double s = std::sqrt(d);
    auto g = make_blocks(n);
    c_up.push_back(s * g.a);
    c_lo.push_back(s * g.b);
    z_up.push_back(s * g.x);
    z_lo.push_back(s * g.y);
  }
  return {BlockTriDiagonalOperator({}, std::move(c_up), std::move(c_lo)),
          BlockTriDiagonalOperator({}, std::move(z_up), std::move(z_lo))};
}

// --- verification ------------------------------------------------------------

std::vector<double> PositiveCommutatorReport::interior_diagonal() const {
  std::vector<double> out;
  for (const auto& b : blocks) {
    if (b.boundary) continue;
    out.insert(out.end(), b.block_index, b.diagonal_value);
  }
  return out;
}

std::string PositiveCommutatorReport::to_csv() const {
  std::string out = "block_index,diagonal_value,residual\n";
  char buf[96];
  for (const auto& b : blocks) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", b.block_index, b.diagonal_value,
                  b.residual);
    out += buf;
  }
  return out;
}

PositiveCommutatorReport verify_positive_commutator(const WeightSequence& weights,
                                                    std::size_t block_count, double tolerance) {
  if (block_count < 3) throw DomainError("verify_positive_commutator: block_count must be >= 3");
  const auto pair = build_modified(weights, block_count);
  const ComplexMatrix c = assemble(pair.c);
  const ComplexMatrix z = assemble(pair.z);
  const ComplexMatrix m = c * z - z * c;

  PositiveCommutatorReport rep;
  rep.block_count = block_count;
  rep.dimension = static_cast<std::size_t>(m.rows());
  rep.report.command = "anderson-verify";
  const std::size_t blocks = block_count + 1;
  const std::size_t interior_last = block_count - 1;  // blocks K and K+1 are boundary

  for (std::size_t i = 1; i <= blocks; ++i) {
    for (std::size_t j = 1; j <= blocks; ++j) {
      const auto sub = m.block(idx(block_offset(i)), idx(block_offset(j)), idx(i), idx(j));
      const double mass = sub.size() == 0 ? 0.0 : sub.cwiseAbs().maxCoeff();
      const std::size_t gap = i > j ? i - j : j - i;
      if (gap == 2) {
        if (i <= interior_last && j <= interior_last) {
          rep.interior_lu_mass = std::max(rep.interior_lu_mass, mass);
        } else {
          rep.boundary_residual = std::max(rep.boundary_residual, mass);
        }
      } else if (gap != 0) {
        rep.off_tridiagonal_mass = std::max(rep.off_tridiagonal_mass, mass);
      }
    }
  }

  rep.interior_positive = true;
  for (std::size_t k = 1; k <= blocks; ++k) {
    const auto blk = m.block(idx(block_offset(k)), idx(block_offset(k)), idx(k), idx(k));
    BlockDiagonalRow row;
    row.block_index = k;
    row.diagonal_value = blk.diagonal().real().mean();
    row.expected = k == 1 ? weights.at(1)
                          : (weights.at(k) - weights.at(k - 1)) / static_cast<double>(k);
    row.residual = (blk - row.expected * ComplexMatrix::Identity(idx(k), idx(k))).cwiseAbs().maxCoeff();
    row.boundary = k > interior_last;
    if (row.boundary) {
      rep.boundary_residual = std::max(rep.boundary_residual, row.residual);
    } else {
      for (Index t = 0; t < blk.rows(); ++t) {
        if (!(blk(t, t).real() > 0.0)) rep.interior_positive = false;
      }
    }
    rep.blocks.push_back(row);
  }

  rep.report.check_at_most("off_tridiagonal_mass", rep.off_tridiagonal_mass, tolerance);
  rep.report.check_at_most("interior_lu_mass", rep.interior_lu_mass, tolerance);
  double worst = 0.0;
  for (const auto& b : rep.blocks) {
    if (!b.boundary) worst = std::max(worst, b.residual);
  }
  rep.report.check_at_most("interior_diagonal_residual", worst, tolerance);
  rep.report.note("boundary_residual", rep.boundary_residual);
  rep.report.note("interior_positive", rep.interior_positive ? 1.0 : 0.0);
  rep.report.note("dimension", static_cast<double>(rep.dimension));

  if (!(rep.off_tridiagonal_mass <= tolerance)) {
    throw VerificationError("[C,Z] has off-band mass " + std::to_string(rep.off_tridiagonal_mass));
  }
  if (!(rep.interior_lu_mass <= tolerance)) {
    throw VerificationError("[C,Z] has interior L/U block mass " +
                            std::to_string(rep.interior_lu_mass));
  }
  for (const auto& b : rep.blocks) {
    if (!b.boundary && !(b.residual <= tolerance)) {
      throw VerificationError("diagonal block " + std::to_string(b.block_index) +
                              " misses the telescoping value " + std::to_string(b.expected) +
                              " by " + std::to_string(b.residual));
    }
  }
  return rep;
}

AdmissibilityReport admissible(const WeightSequence& weights, std::size_t horizon) {
  AdmissibilityReport rep;
  const auto* f = std::get_if<PowerLog>(&weights.family());
  rep.horizon = f ? horizon : std::min(horizon, weights.size());
  for (std::size_t n = std::max<std::size_t>(1, rep.horizon / 2); n <= rep.horizon; ++n) {
    const double d = f ? power_log_term(*f, n) : weights.at(n);
    rep.tail_max_ratio = std::max(rep.tail_max_ratio, d / static_cast<double>(n));
  }
  if (f) {
    rep.admissible = f->scale == 0.0 || f->power < 1.0 || (f->power == 1.0 && f->log_power < 0.0);
  }
  return rep;
}

EigenvalueProfile eigenvalue_profile(const WeightSequence& weights, Parameterization param,
                                     std::size_t terms) {
  EigenvalueProfile out;
  out.values.reserve(terms);
  std::size_t k = 1;
  while (out.values.size() < terms) {
    if (k > weights.size()) {
      throw DomainError("eigenvalue_profile: " + std::to_string(terms) +
                        " terms need more than the " + std::to_string(weights.size()) +
                        " available weights");
    }
    const double dk = weights.at(k);
    const double prev = k == 1 ? 0.0 : weights.at(k - 1);
    const double value = param == Parameterization::Differences
                             ? (dk - prev) / static_cast<double>(k)
                             : dk / static_cast<double>(k);
    for (std::size_t r = 0; r < k && out.values.size() < terms; ++r) out.values.push_back(value);
    ++k;
  }
  if (param == Parameterization::CesaroForm) {
    if (const auto* f = std::get_if<PowerLog>(&weights.family())) {
      out.cesaro_to_zero =
          f->scale == 0.0 || f->power < 0.0 || (f->power == 0.0 && f->log_power < 0.0);
    }
  }
  return out;
}

}  // namespace commlab::anderson
