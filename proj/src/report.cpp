#include "commlab/report.hpp"

#include <algorithm>
#include <cstdio>

namespace commlab {

const CheckRow& SolveReport::check_at_most(std::string name, double measured, double tolerance) {
  checks.push_back({std::move(name), measured, tolerance, measured <= tolerance});
  return checks.back();
}

const CheckRow& SolveReport::check_true(std::string name, bool ok) {
  checks.push_back({std::move(name), ok ? 1.0 : 0.0, 0.0, ok});
  return checks.back();
}

const CheckRow& SolveReport::note(std::string name, double value) {
  checks.push_back({std::move(name), value, 0.0, true});
  return checks.back();
}

bool SolveReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRow& r) { return r.pass; });
}

const CheckRow* SolveReport::first_failure() const {
  auto it = std::find_if(checks.begin(), checks.end(), [](const CheckRow& r) { return !r.pass; });
  return it == checks.end() ? nullptr : &*it;
}

const CheckRow* SolveReport::find(const std::string& name) const {
  auto it = std::find_if(checks.begin(), checks.end(),
                         [&](const CheckRow& r) { return r.name == name; });
  return it == checks.end() ? nullptr : &*it;
}

std::string SolveReport::to_csv() const {
  std::string out = "check_name,value,tolerance,pass\n";
  char buf[128];
  for (const auto& row : checks) {
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%d\n", row.measured, row.tolerance,
                  row.pass ? 1 : 0);
    out += row.name;
    out += buf;
  }
  return out;
}

}  // namespace commlab
