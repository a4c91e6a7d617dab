#include "commlab/idealseq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "commlab/errors.hpp"

namespace commlab::idealseq {

namespace {

// Neumaier compensated summation.
class Accumulator {
public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

GrowthFit fit(const std::vector<double>& xs, const std::vector<double>& ys, std::string model) {
  GrowthFit f;
  f.model = std::move(model);
  const double n = static_cast<double>(xs.size());
  if (xs.size() < 2) return f;
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (f.intercept + f.slope * xs[i]);
    ss += r * r;
  }
  f.rms_residual = std::sqrt(ss / n);
  return f;
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
      throw ParseError("invalid number '" + item + "' in sequence family", 0);
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size() || !std::isfinite(v)) {
      throw ParseError("invalid number '" + item + "' in sequence family", 0);
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

double PowerLog::term(std::size_t n) const {
  const double x = static_cast<double>(n);
  return scale * std::pow(x, -power) * std::pow(std::log(x + 1.0), -log_power);
}

SequenceFamily SequenceFamily::power_log(double scale, double power, double log_power) {
  if (!std::isfinite(scale) || scale < 0.0) throw DomainError("powerlog scale C must be >= 0");
  if (!std::isfinite(power) || !std::isfinite(log_power)) {
    throw DomainError("powerlog exponents must be finite");
  }
  return SequenceFamily(PowerLog{scale, power, log_power});
}

SequenceFamily SequenceFamily::explicit_values(std::vector<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("explicit sequence contains a non-finite value");
  }
  return SequenceFamily(Explicit{std::move(values)});
}

SequenceFamily SequenceFamily::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ParseError("sequence family must be 'powerlog:C,p,q' or 'explicit:...', got '" + text +
                         "'",
                     0);
  }
  const std::string kind = text.substr(0, colon);
  const auto args = parse_list(text.substr(colon + 1));
  if (kind == "powerlog") {
    if (args.size() != 3) throw ParseError("powerlog needs exactly three parameters C,p,q", 0);
    return power_log(args[0], args[1], args[2]);
  }
  if (kind == "explicit") return explicit_values(args);
  throw ParseError("unknown sequence family '" + kind + "'", 0);
}

std::vector<double> SequenceFamily::prefix(std::size_t count) const {
  if (const auto* pl = std::get_if<PowerLog>(&kind_)) {
    std::vector<double> out(count);
    for (std::size_t n = 1; n <= count; ++n) out[n - 1] = pl->term(n);
    return out;
  }
  const auto& v = std::get<Explicit>(kind_).values;
  return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(count, v.size()))};
}

HsiiClassification classify_hsii(const SequenceFamily& family, std::size_t horizon) {
  HsiiClassification out;
  if (const auto* pl = std::get_if<PowerLog>(&family.kind())) {
    if (pl->scale == 0.0) {
      out.in_trace_class = true;
      out.in_commutator_class = true;
    } else {
      // integral test for n^{-p} log^{-q}: and n^{-p} log^{1-q} with the extra log n
      out.in_trace_class = pl->power > 1.0 || (pl->power == 1.0 && pl->log_power > 1.0);
      out.in_commutator_class = pl->power > 1.0 || (pl->power == 1.0 && pl->log_power > 2.0);
    }
  }

  const auto d = family.prefix(horizon);
  auto& diag = out.diagnostics;
  diag.horizon = d.size();
  Accumulator s, w;
  std::vector<double> logs, logs2, sums, wsums;
  std::size_t next_sample = 8;
  for (std::size_t n = 1; n <= d.size(); ++n) {
    s.add(d[n - 1]);
    w.add(d[n - 1] * std::log(static_cast<double>(n)));
    if (n == next_sample || n == d.size()) {
      const double l = std::log(static_cast<double>(n));
      logs.push_back(l);
      logs2.push_back(l * l);
      sums.push_back(s.value());
      wsums.push_back(w.value());
      next_sample = std::max(next_sample + 1, static_cast<std::size_t>(next_sample * 1.5));
    }
  }
  diag.partial_sum = s.value();
  diag.weighted_partial_sum = w.value();
  diag.sum_fits = {fit(logs, sums, "log"), fit(logs2, sums, "log2")};
  diag.weighted_fits = {fit(logs, wsums, "log"), fit(logs2, wsums, "log2")};
  return out;
}

TypeAReport is_type_A_prefix(const std::vector<double>& lambda, double tail_tolerance) {
  Accumulator pos, neg;
  for (double v : lambda) {
    pos.add((std::abs(v) + v) / 2.0);
    neg.add((std::abs(v) - v) / 2.0);
  }
  TypeAReport r;
  r.positive_sum = pos.value();
  r.negative_sum = neg.value();
  r.defect = std::abs(r.positive_sum - r.negative_sum);
  r.last_magnitude = lambda.empty() ? 0.0 : std::abs(lambda.back());
  r.balanced = r.defect <= tail_tolerance;
  return r;
}

std::vector<double> arithmetic_mean_sequence(std::vector<double> lambda) {
  std::stable_sort(lambda.begin(), lambda.end(),
                   [](double a, double b) { return std::abs(a) > std::abs(b); });
  std::vector<double> out(lambda.size());
  Accumulator acc;
  for (std::size_t n = 0; n < lambda.size(); ++n) {
    acc.add(lambda[n]);
    out[n] = acc.value() / static_cast<double>(n + 1);
  }
  return out;
}

}  // namespace commlab::idealseq
