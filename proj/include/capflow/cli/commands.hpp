#pragma once

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "capflow/cli/config.hpp"
#include "capflow/construct.hpp"
#include "capflow/experiments.hpp"
#include "capflow/oracle.hpp"
#include "capflow/series_io.hpp"
#include "json.hpp"

namespace capflow::cli {

/// Exit statuses.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;  ///< failed run, failed verdict or I/O error
inline constexpr int exit_usage = 2;   ///< bad configuration or arguments

inline AxisymmetricProfile make_initial(const CliConfig& c) {
  const auto dims = DimensionConstants::of(c.n);
  switch (c.initial) {
    case InitialKind::Cap: return make_cap(dims, c.rho, c.flow.num_nodes);
    case InitialKind::Disk: return make_flat_disk(dims, c.flow.num_nodes);
    case InitialKind::PerturbedCap: return make_perturbed_cap(dims, c.rho, c.flattening, c.flow.num_nodes);
  }
  throw ValidationError("unknown initial kind");
}

namespace detail {

inline std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

/// Writes series and snapshots, returns the one-line summary.
inline std::string write_run(const FlowRun& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_file((dir / "series.csv").string(), series_to_csv(run.series));
  for (const auto& snap : run.snapshots)
    write_text_file((dir / snapshot_file_name(snap.t)).string(), profile_to_csv(snap.profile));

  std::string line = "stop=" + std::string(to_string(run.stop_reason)) + " t=" + fixed(run.stop_time()) +
                     " steps=" + std::to_string(run.steps);
  if (!run.series.empty()) line += " final_area=" + fixed(run.series.back().area, 8);
  if (run.predicted_T_star && !run.series.empty()) {
    const auto& dims = run.final_state->profile.dims();
    const double estimate = run.stop_time() + std::log(dims.omega_n / run.series.back().area);
    line += " predicted_T*=" + fixed(*run.predicted_T_star) + " estimated_T*=" + fixed(estimate);
  }
  if (!run.message.empty()) line += " (" + run.message + ")";
  return line;
}

inline bool run_failed(const FlowRun& run) {
  return run.stop_reason == StopReason::StepFailure ||
         (run.stop_reason == StopReason::MinHReached && run.steps == 0);
}

/// One run into `dir`; the summary goes to `out`.
inline int run_into(const CliConfig& c, const std::filesystem::path& dir, std::ostream& out,
                    std::ostream& err) {
  FlowRun run;
  try {
    run = run_flow(make_initial(c), c.flow);
  } catch (const Error& e) {
    err << "capflow: " << e.what() << "\n";
    return exit_usage;
  }
  try {
    out << write_run(run, dir) << "\n";
  } catch (const std::exception& e) {
    err << "capflow: " << e.what() << "\n";
    return exit_failed;
  }
  return run_failed(run) ? exit_failed : exit_ok;
}

}  // namespace detail

/// Executes the configured flow. Exit 0 on a completed run; nonzero on a
/// step failure or when IMCF cannot start (mean curvature below the floor).
inline int cmd_run(const CliConfig& c, std::ostream& out, std::ostream& err) {
  spdlog::info("run: n={} mode={} initial={} rho={} resolution={} -> {}", c.n, to_string(c.flow.mode),
               to_string(c.initial), c.rho, c.flow.num_nodes, c.output);
  return detail::run_into(c, c.output, out, err);
}

/// Runs the named experiment (or "all"), writes `<name>.json` per report.
/// Exit 0 iff every verdict passes.
inline int cmd_verify(const CliConfig& c, const std::string& name, std::ostream& out, std::ostream& err) {
  const auto& names = experiments::experiment_names();
  if (name != "all" && std::find(names.begin(), names.end(), name) == names.end()) {
    err << "capflow: unknown experiment '" << name
        << "' (expected inequality, monotonicity, arealaw, smoothing, cone, hdecay or all)\n";
    return exit_usage;
  }
  experiments::CampaignGrids grids;
  grids.rho = c.rho;
  grids.rho_grid = c.rho_grid;
  grids.flattening_grid = c.flattening_grid;
  grids.flattening = c.flattening;
  grids.horizon = c.horizon;
  grids.p_list = c.p_list;
  experiments::VerifyOptions opt;
  opt.flow = c.flow;
  opt.inject_defect = c.inject_defect;
  opt.artifact_dir = c.output;
  opt.decay_area_target = c.decay_area_target;

  bool all_pass = true;
  try {
    std::filesystem::create_directories(c.output);
    const auto dims = DimensionConstants::of(c.n);
    auto reports = experiments::merge_reports(experiments::run_experiment(name, dims, grids, opt));
    for (const auto& [key, r] : reports) {
      const auto path = (std::filesystem::path(c.output) / (key + ".json")).string();
      write_text_file(path, experiments::report_to_json(r));
      const auto passed = std::count_if(r.checks.begin(), r.checks.end(), [](const auto& ch) { return ch.pass; });
      out << key << ": " << (r.verdict() ? "pass" : "fail") << " (" << passed << "/" << r.checks.size()
          << " checks) " << path << "\n";
      for (const auto& ch : r.checks)
        if (!ch.pass) spdlog::info("{}: failed check '{}': {} {} {}", key, ch.label, ch.value, ch.relation, ch.threshold);
      all_pass = all_pass && r.verdict();
    }
  } catch (const ValidationError& e) {
    err << "capflow: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "capflow: " << e.what() << "\n";
    return exit_failed;
  }
  return all_pass ? exit_ok : exit_failed;
}

struct SweepEntry {
  CliConfig config;
  std::string subdir;
};

/// Cartesian product of sweep_n x sweep_rho x sweep_flattening.
inline std::vector<SweepEntry> sweep_entries(const CliConfig& c) {
  const std::vector<int> ns = c.sweep_n.empty() ? std::vector<int>{c.n} : c.sweep_n;
  const std::vector<double> rhos = c.sweep_rho.empty() ? std::vector<double>{c.rho} : c.sweep_rho;
  const std::vector<double> fls =
      c.sweep_flattening.empty() ? std::vector<double>{c.flattening} : c.sweep_flattening;
  std::vector<SweepEntry> out;
  for (int n : ns)
    for (double rho : rhos)
      for (double fl : fls) {
        SweepEntry e{c, ""};
        e.config.n = n;
        e.config.rho = rho;
        e.config.flattening = fl;
        char buf[96];
        std::snprintf(buf, sizeof buf, "n%d_rho%g_fl%g", n, rho, fl);
        e.subdir = buf;
        out.push_back(std::move(e));
      }
  std::vector<std::string> names;
  for (const auto& e : out) names.push_back(e.subdir);
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw ConfigError("sweep: repeated entry (duplicate values in a sweep list)");
  return out;
}

/// Runs every sweep entry, at most `jobs` at a time, each into its own
/// subdirectory. Summaries are printed in entry order.
inline int cmd_sweep(const CliConfig& c, int jobs, std::ostream& out, std::ostream& err) {
  std::vector<SweepEntry> entries;
  try {
    entries = sweep_entries(c);
  } catch (const Error& e) {
    err << "capflow: " << e.what() << "\n";
    return exit_usage;
  }
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, entries.size());
  spdlog::info("sweep: {} entries, {} workers -> {}", entries.size(), workers, c.output);

  std::vector<std::string> outs(entries.size()), errs(entries.size());
  std::vector<int> codes(entries.size(), exit_ok);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      std::ostringstream o, e;
      codes[i] = detail::run_into(entries[i].config, std::filesystem::path(c.output) / entries[i].subdir, o, e);
      outs[i] = o.str();
      errs[i] = e.str();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  int status = exit_ok;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    out << entries[i].subdir << ": " << outs[i];
    err << errs[i];
    if (codes[i] != exit_ok) status = exit_failed;
  }
  return status;
}

/// Closed-form values for the orthogonal cap of radius rho in dimension n.
inline nlohmann::json oracle_json(int n, double rho) {
  const auto dims = DimensionConstants::of(n);
  const auto spec = oracle::CapSpec::of(dims, rho);
  const double a = oracle::cap_area_exact(spec);
  nlohmann::json j;
  j["n"] = n;
  j["rho"] = rho;
  j["d"] = spec.d;
  j["a"] = spec.a;
  j["theta"] = spec.theta;
  j["omega_n"] = dims.omega_n;
  j["sphere_measure"] = dims.sphere_measure;
  j["cap_area"] = a;
  j["boundary_measure"] = dims.sphere_measure * std::pow(spec.a, n - 1);
  j["cone_volume"] = dims.omega_n * std::pow(spec.a, n - 1);
  j["cap_q"] = oracle::cap_q_exact(spec);
  j["disk_q"] = oracle::disk_q_value(dims);
  j["q_gap"] = oracle::cap_q_exact(spec) - oracle::disk_q_value(dims);
  j["predicted_T_star"] = oracle::predicted_existence_time(a, dims);
  return j;
}

inline int cmd_oracle(int n, double rho, std::ostream& out, std::ostream& err) {
  try {
    out << oracle_json(n, rho).dump(2) << "\n";
  } catch (const Error& e) {
    err << "capflow: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_ok;
}

}  // namespace capflow::cli
