#include "meandiam/runner.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include "meandiam/csv.hpp"
#include "meandiam/svg.hpp"

namespace meandiam {

namespace {

/// One SVG per estimate, numbered per (check, system) so reruns of the same
/// command produce the same file list.
void add_plots(CommandResult& res, const std::string& check, const std::string& system,
               const std::vector<Estimate>& ests, std::map<std::string, int>& counters) {
  for (const Estimate& e : ests) {
    int& n = counters[fs_safe(check) + "/" + fs_safe(system)];
    ++n;
    res.files.push_back({plot_filename(check, system, n), estimate_svg(e)});
  }
}

std::string estimator_tag(const EstimatorParams& ep, Mode mode, const std::string& flabel) {
  return "mode=" + mode_to_string(mode) + ";n_max=" + std::to_string(ep.n_max) + ";radius=" +
         std::to_string(mode == Mode::banach_sup ? ep.effective_radius() : 0) + ";F=" + flabel;
}

void push_report_file(CommandResult& res) {
  std::string body;
  for (const std::string& line : res.summary) body += line + "\n";
  res.files.push_back({"report.txt", body});
}

std::string outcome_mark(Outcome o) {
  return o == Outcome::holds ? "holds" : o == Outcome::fails ? "FAILS" : "inconclusive";
}

}  // namespace

CommandResult cmd_diam(const ExperimentConfig& cfg) {
  if (!cfg.system.valid()) throw ConfigError("diam: config needs a \"system\"", 1);
  if (cfg.diam_tasks.empty()) throw ConfigError("diam: config needs \"sets\"", 1);
  CommandResult res;
  std::vector<Estimate> ests;
  std::vector<Verdict> vs;
  std::map<std::string, int> counters;
  for (const FolnerSequence& F : cfg.folner) {
    for (const DiamTask& t : cfg.diam_tasks) {
      Estimate e = cfg.mode == Mode::banach_sup
                       ? mean_diameter(F, cfg.system, t.set, cfg.estimator)
                       : mean_diameter_along(F, cfg.system, t.set, cfg.estimator);
      e.label = t.label + "|" + e.label;
      Verdict v;
      v.check = "diam";
      v.params = "set=" + t.label + ";" + estimator_tag(cfg.estimator, cfg.mode, F.label);
      v.outcome = e.stabilized ? Outcome::holds : Outcome::inconclusive;
      v.lhs = e.value;
      v.rhs = e.value;
      v.tolerance = cfg.estimator.tol_abs;
      res.summary.push_back("diam " + t.label + " | " + F.label + " = " + fmt_double(e.value) +
                            (e.stabilized ? " (stabilized)" : " (not stabilized)"));
      ests.push_back(std::move(e));
      vs.push_back(std::move(v));
    }
  }
  res.files.push_back({"estimates.csv", estimates_csv(ests)});
  res.files.push_back({"verdicts.csv", verdicts_csv(vs)});
  add_plots(res, "diam", cfg.system.label(), ests, counters);
  push_report_file(res);
  return res;
}

CommandResult cmd_density(const ExperimentConfig& cfg) {
  if (cfg.density_tasks.empty()) throw ConfigError("density: config needs \"density_sets\"", 1);
  const int dim = cfg.folner.front().window(1).dim();
  CommandResult res;
  std::vector<Estimate> ests;
  std::vector<Verdict> vs;
  std::map<std::string, int> counters;
  for (const FolnerSequence& F : cfg.folner) {
    for (const DensityTask& t : cfg.density_tasks) {
      DensityReport rep = density_report(F, t.pred, dim, cfg.estimator, t.label);
      for (Estimate* e : {&rep.upper_along, &rep.lower_along, &rep.upper_banach}) {
        e->label = t.label + "|" + e->label;
        Verdict v;
        v.check = "density";
        v.params = "set=" + t.label + ";" + estimator_tag(cfg.estimator, e->mode, F.label);
        v.outcome = e->stabilized ? Outcome::holds : Outcome::inconclusive;
        v.lhs = e->value;
        v.rhs = e->value;
        v.tolerance = cfg.estimator.tol_abs;
        vs.push_back(std::move(v));
        ests.push_back(*e);
      }
      res.summary.push_back("density " + t.label + " | " + F.label +
                            ": upper=" + fmt_double(rep.upper_along.value) +
                            " lower=" + fmt_double(rep.lower_along.value) +
                            " banach_upper=" + fmt_double(rep.upper_banach.value));
    }
  }
  res.files.push_back({"estimates.csv", estimates_csv(ests)});
  res.files.push_back({"verdicts.csv", verdicts_csv(vs)});
  add_plots(res, "density", cfg.system.valid() ? cfg.system.label() : "Zd", ests, counters);
  push_report_file(res);
  return res;
}

CommandResult cmd_regularity(const ExperimentConfig& cfg) {
  if (!cfg.factor.source.valid()) throw ConfigError("regularity: config needs a \"factor\"", 1);
  const FolnerSequence& F = cfg.folner.front();
  const RegularityParams& rp = cfg.regularity;
  std::vector<Point> ys = sample_targets(cfg.factor.target, rp.fiber_samples, rp.fiber_mesh,
                                         rp.seed);
  RegularityReport rep = cfg.mode == Mode::banach_sup
                             ? diam_mean_proximal_test(cfg.factor, ys, F, rp)
                             : f_diam_mean_proximal_test(cfg.factor, ys, F, rp);

  CommandResult res;
  res.summary.push_back("regularity " + cfg.factor.label + " | " + F.label + ": " +
                        outcome_mark(rep.overall.outcome));
  for (const Verdict* v : {&rep.diam_verdict, &rep.density_verdict})
    res.summary.push_back("  " + v->check + ": " + outcome_mark(v->outcome) +
                          " (lhs=" + fmt_double(v->lhs) + " rhs=" + fmt_double(v->rhs) + ")");
  for (const std::string& n : rep.notes) res.summary.push_back("  note: " + n);

  res.files.push_back({"estimates.csv", estimates_csv(rep.fiber_estimates)});
  res.files.push_back(
      {"verdicts.csv", verdicts_csv({rep.diam_verdict, rep.density_verdict, rep.overall})});
  res.files.push_back({"regularity.csv", regularity_csv(rep)});
  std::map<std::string, int> counters;
  add_plots(res, "regularity", cfg.factor.label, rep.fiber_estimates, counters);
  push_report_file(res);
  res.exit_code = rep.overall.outcome == Outcome::fails ? 1 : 0;
  return res;
}

CommandResult cmd_dme(const ExperimentConfig& cfg) {
  if (!cfg.system.valid()) throw ConfigError("dme: config needs a \"system\"", 1);
  CommandResult res;
  std::vector<Estimate> ests;
  std::vector<Verdict> vs;
  std::map<std::string, int> counters;
  bool any_fails = false;
  const std::string check = "dme_" + to_string(cfg.dme_variant);
  for (const FolnerSequence& F : cfg.folner) {
    DmeReport rep;
    switch (cfg.dme_variant) {
      case DmeVariant::point:
        rep = cfg.mode == Mode::banach_sup
                  ? dme_point_test(cfg.system, *cfg.dme_point, F, cfg.dme)
                  : f_dme_point_test(cfg.system, *cfg.dme_point, F, cfg.dme);
        break;
      case DmeVariant::global:
        rep = cfg.mode == Mode::banach_sup ? dme_global_test(cfg.system, F, cfg.dme)
                                           : f_dme_global_test(cfg.system, F, cfg.dme);
        break;
      case DmeVariant::mean_eq:
        rep = mean_equicontinuity_test(cfg.system, F, cfg.dme);
        break;
    }
    any_fails = any_fails || rep.verdict == Outcome::fails;
    res.summary.push_back(check + " " + cfg.system.label() + " at " + rep.point + " | " +
                          F.label + ": " + outcome_mark(rep.verdict));
    for (const DmeCell& cell : rep.cells) {
      Verdict v;
      v.check = check;
      v.params = rep.params + ";eps=" + fmt_double(cell.eps) + ";delta=" +
                 fmt_double(cell.delta);
      v.outcome = cell.verdict;
      v.lhs = cell.estimate;
      v.rhs = cell.eps;
      v.tolerance = cfg.dme.estimator.tol_abs;
      vs.push_back(std::move(v));
      res.summary.push_back("  eps=" + fmt_double(cell.eps) + ": " + outcome_mark(cell.verdict) +
                            " (delta=" + fmt_double(cell.delta) +
                            " estimate=" + fmt_double(cell.estimate) + ")");
    }
    Verdict overall;
    overall.check = check + "_overall";
    overall.params = rep.params;
    overall.outcome = rep.verdict;
    vs.push_back(std::move(overall));
    for (const std::string& n : rep.notes) res.summary.push_back("  note: " + n);
    for (const Estimate& t : rep.traces) ests.push_back(t);
  }
  res.files.push_back({"estimates.csv", estimates_csv(ests)});
  res.files.push_back({"verdicts.csv", verdicts_csv(vs)});
  add_plots(res, check, cfg.system.label(), ests, counters);
  push_report_file(res);
  res.exit_code = any_fails ? 1 : 0;
  return res;
}

CommandResult cmd_suite(const ExperimentConfig& cfg) {
  if (cfg.suite_pairs.empty()) throw ConfigError("suite: config needs \"suite\" with \"pairs\"", 1);
  const FolnerSequence& F = cfg.folner.front();
  CommandResult res;
  std::vector<SuiteCheck> all_checks;
  std::map<std::string, std::vector<SuiteCheck>> by_check;
  std::vector<Estimate> ests;
  std::vector<Verdict> vs;
  std::map<std::string, int> counters;
  bool any_fails = false;

  for (const SuitePair& pair : cfg.suite_pairs) {
    SuiteReport rep = theorem_suite(pair.pi.source, pair.pi, F, pair.params);
    any_fails = any_fails || rep.overall == Outcome::fails;
    res.summary.push_back("suite " + pair.label + ": " + outcome_mark(rep.overall));
    for (const SuiteCheck& chk : rep.checks) {
      res.summary.push_back("  " + chk.check + ": " + outcome_mark(chk.verdict));
      for (const std::string& n : chk.notes) res.summary.push_back("    " + n);
      all_checks.push_back(chk);
      by_check[chk.check].push_back(chk);
      Verdict v;
      v.check = pair.label + ":" + chk.check;
      v.params = chk.scale_params;
      v.outcome = chk.verdict;
      v.lhs = chk.lhs;
      v.rhs = chk.rhs;
      vs.push_back(std::move(v));
    }
    for (const std::string& flag : rep.red_flags)
      res.summary.push_back("  RED FLAG: " + flag);
    Verdict overall;
    overall.check = pair.label + ":overall";
    overall.outcome = rep.overall;
    vs.push_back(std::move(overall));

    for (const Estimate& t : rep.traces) {
      Estimate e = t;
      e.label = pair.label + ":" + t.label;
      // Trace labels are "check:detail"; plots group by check and pair.
      std::string chk = t.label.substr(0, t.label.find(':'));
      int& n = counters[fs_safe(chk) + "/" + fs_safe(pair.label)];
      ++n;
      res.files.push_back({plot_filename(chk, pair.label, n), estimate_svg(e)});
      ests.push_back(std::move(e));
    }
  }

  res.files.push_back({"estimates.csv", estimates_csv(ests)});
  res.files.push_back({"verdicts.csv", verdicts_csv(vs)});
  res.files.push_back({"summary.csv", suite_summary_csv(all_checks)});
  for (const auto& [name, checks] : by_check)
    res.files.push_back({fs_safe(name) + ".csv", suite_check_csv(checks)});
  push_report_file(res);
  res.exit_code = any_fails ? 1 : 0;
  return res;
}

CommandResult run_command(const ExperimentConfig& cfg) {
  if (cfg.command == "diam") return cmd_diam(cfg);
  if (cfg.command == "density") return cmd_density(cfg);
  if (cfg.command == "regularity") return cmd_regularity(cfg);
  if (cfg.command == "dme") return cmd_dme(cfg);
  if (cfg.command == "suite") return cmd_suite(cfg);
  throw ConfigError("unknown or missing command \"" + cfg.command +
                        "\" (diam, density, regularity, dme, suite)",
                    1);
}

void write_outputs(const CommandResult& res, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const OutputFile& f : res.files) {
    std::ofstream out(std::filesystem::path(out_dir) / f.name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + f.name + " under " + out_dir);
    out.write(f.content.data(), std::streamsize(f.content.size()));
  }
}

void override_threads(ExperimentConfig& cfg, int threads) {
  cfg.threads = threads;
  cfg.estimator.threads = threads;
  cfg.dme.estimator.threads = threads;
  cfg.regularity.estimator.threads = threads;
  for (SuitePair& p : cfg.suite_pairs) {
    p.params.dme.estimator.threads = threads;
    p.params.regularity.estimator.threads = threads;
  }
}

void override_seed(ExperimentConfig& cfg, unsigned seed) {
  cfg.seed = seed;
  cfg.dme.seed = seed;
  cfg.regularity.seed = seed;
  for (SuitePair& p : cfg.suite_pairs) {
    p.params.dme.seed = seed;
    p.params.regularity.seed = seed;
  }
}

}  // namespace meandiam
