#include "meandiam/csv.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace meandiam {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) throw std::runtime_error("fmt_double: to_chars failed");
  return std::string(buf, res.ptr);
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

std::string csv_escape(const std::string& field) {
  bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  out += '\n';
  return out;
}

std::string estimates_csv(const std::vector<Estimate>& ests) {
  std::string out = "label,n,window_volume,value,sup_translate,stabilized\n";
  for (const Estimate& e : ests) {
    i64 n = 0, vol = 0;
    double sup = e.value;
    if (!e.tail.empty()) {
      n = e.tail.back().n;
      vol = e.tail.back().window_volume;
      sup = e.tail.back().sup_translate;
    }
    out += csv_row({e.label, std::to_string(n), std::to_string(vol), fmt_double(e.value),
                    fmt_double(sup), fmt_bool(e.stabilized)});
  }
  return out;
}

std::string verdicts_csv(const std::vector<Verdict>& vs) {
  std::string out = "check,params,outcome,lhs,rhs,tolerance\n";
  for (const Verdict& v : vs)
    out += csv_row({v.check, v.params, outcome_to_string(v.outcome), fmt_double(v.lhs),
                    fmt_double(v.rhs), fmt_double(v.tolerance)});
  return out;
}

std::string regularity_csv(const RegularityReport& rep) {
  std::string out = "fiber_y,eps,diam_estimate,density_estimate,stabilized,verdict\n";
  for (const RegularityRow& r : rep.rows)
    out += csv_row({r.fiber_y, fmt_double(r.eps), fmt_double(r.diam_estimate),
                    fmt_double(r.density_estimate), fmt_bool(r.stabilized),
                    outcome_to_string(r.verdict)});
  return out;
}

std::string suite_summary_csv(const std::vector<SuiteCheck>& checks) {
  std::string out = "system,check,verdict,scale_params\n";
  for (const SuiteCheck& c : checks)
    out += csv_row({c.system, c.check, outcome_to_string(c.verdict), c.scale_params});
  return out;
}

std::string suite_check_csv(const std::vector<SuiteCheck>& checks) {
  std::string out = "system,verdict,lhs,rhs,scale_params,notes\n";
  for (const SuiteCheck& c : checks) {
    std::string notes;
    for (size_t i = 0; i < c.notes.size(); ++i) {
      if (i) notes += "; ";
      notes += c.notes[i];
    }
    out += csv_row({c.system, outcome_to_string(c.verdict), fmt_double(c.lhs), fmt_double(c.rhs),
                    c.scale_params, notes});
  }
  return out;
}

}  // namespace meandiam
