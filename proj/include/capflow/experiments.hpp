#pragma once

// Verification campaigns. Each verifier runs its flows (or evaluates its
// profiles), applies series-level checkers and returns a report. The
// checkers are exposed separately so they can be exercised on synthetic
// series.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "capflow/construct.hpp"
#include "capflow/flow.hpp"
#include "capflow/geometry.hpp"
#include "capflow/oracle.hpp"
#include "capflow/series_io.hpp"
#include "json.hpp"

namespace capflow::experiments {

struct Check {
  std::string label;
  std::string relation;  ///< one of "<", "<=", ">", ">="
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

inline Check make_check(std::string label, double value, std::string relation, double threshold) {
  bool pass = false;
  if (relation == "<") pass = value < threshold;
  else if (relation == "<=") pass = value <= threshold;
  else if (relation == ">") pass = value > threshold;
  else if (relation == ">=") pass = value >= threshold;
  else throw ValidationError("unknown check relation '" + relation + "'");
  return {std::move(label), std::move(relation), value, threshold, pass};
}

struct ExperimentReport {
  std::string name;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<Check> checks;
  std::vector<std::string> artifacts;
  std::vector<std::string> notes;

  /// Pass iff there is at least one check and every check passes.
  bool verdict() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
  void add(Check c) { checks.push_back(std::move(c)); }
};

inline nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json j;
    j["label"] = c.label;
    j["relation"] = c.relation;
    j["value"] = c.value;
    j["threshold"] = c.threshold;
    j["pass"] = c.pass;
    checks.push_back(std::move(j));
  }
  nlohmann::json j;
  j["name"] = r.name;
  j["parameters"] = r.parameters;
  j["checks"] = std::move(checks);
  j["artifacts"] = r.artifacts;
  j["notes"] = r.notes;
  j["verdict"] = r.verdict() ? "pass" : "fail";
  return j;
}

/// Pretty-printed, keys sorted, trailing newline. Non-finite values become null.
inline std::string report_to_json(const ExperimentReport& r) { return to_json(r).dump(2) + "\n"; }

/// Reports keyed by name; a repeated name is an error.
inline std::map<std::string, ExperimentReport> merge_reports(std::vector<ExperimentReport> reports) {
  std::map<std::string, ExperimentReport> out;
  for (auto& r : reports) {
    const std::string key = r.name;
    if (!out.emplace(key, std::move(r)).second)
      throw ValidationError("duplicate report name '" + key + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Series checkers

using Series = std::span<const FlowDiagnostics>;

inline constexpr double nan = std::numeric_limits<double>::quiet_NaN();
inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Largest increase of Q between consecutive records.
inline Check check_q_monotone(Series s, double tol = 1e-6) {
  double worst = -inf;
  for (std::size_t k = 1; k < s.size(); ++k) worst = std::max(worst, s[k].q_value - s[k - 1].q_value);
  return make_check("max Q increase between records", s.size() < 2 ? nan : worst, "<=", tol);
}

/// Largest finite-difference rate d/dt log|dM| between records.
inline Check check_boundary_growth(Series s, double limit = 1.0 + 1e-3) {
  double worst = -inf;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double dt = s[k].t - s[k - 1].t;
    if (dt > 0.0)
      worst = std::max(worst, std::log(s[k].boundary_measure / s[k - 1].boundary_measure) / dt);
  }
  return make_check("max d/dt log boundary measure", s.size() < 2 ? nan : worst, "<", limit);
}

/// Rate bound dQ/dt <= (omega_n^e - |M|^e) |dM| with e = (2 - n)/n, both
/// sides at the midpoint of each record interval. The value is the largest
/// excess of the finite-difference rate over the bound relative to
/// |bound|; a zero bound (n = 2) admits no positive excess.
inline Check check_qdot_bound(Series s, const DimensionConstants& dims, double rel = 0.05) {
  const double e = dims.scaling_exponent();
  const double we = std::pow(dims.omega_n, e);
  double worst = -inf;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double dt = s[k].t - s[k - 1].t;
    if (!(dt > 0.0)) continue;
    const double qdot = (s[k].q_value - s[k - 1].q_value) / dt;
    const double area = 0.5 * (s[k].area + s[k - 1].area);
    const double bm = 0.5 * (s[k].boundary_measure + s[k - 1].boundary_measure);
    const double bound = (we - std::pow(area, e)) * bm;
    const double excess = qdot - bound;
    const double scale = std::abs(bound);
    worst = std::max(worst, scale > 0.0 ? excess / scale : (excess > 0.0 ? inf : -inf));
  }
  return make_check("max relative excess of dQ/dt over the rate bound",
                    s.size() < 2 ? nan : worst, "<=", rel);
}

/// Value of a recorded quantity at time t by linear interpolation.
inline double interpolate(Series s, double t, double FlowDiagnostics::*field) {
  if (s.empty() || t < s.front().t || t > s.back().t) return nan;
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (t <= s[k].t) {
      const double w = (t - s[k - 1].t) / (s[k].t - s[k - 1].t);
      return (1.0 - w) * s[k - 1].*field + w * s[k].*field;
    }
  }
  return s.back().*field;
}

/// Q drop over the first `fraction` of the run measured against the rate
/// bound at t = 0: value = (Q(0) - Q(tau)) / (c0 tau), tau = fraction * T,
/// c0 = (|M_0|^e - omega_n^e) |dM_0|. A degenerate c0 (n = 2) yields +inf
/// for any positive drop.
inline Check check_q_drop(Series s, const DimensionConstants& dims, double fraction = 0.25,
                          double factor = 0.5) {
  if (s.size() < 2) return make_check("first-quarter Q drop / (c0 tau)", nan, ">=", factor);
  const double e = dims.scaling_exponent();
  const double c0 =
      (std::pow(s.front().area, e) - std::pow(dims.omega_n, e)) * s.front().boundary_measure;
  const double tau = fraction * (s.back().t - s.front().t);
  const double drop = s.front().q_value - interpolate(s, s.front().t + tau, &FlowDiagnostics::q_value);
  double value = nan;
  if (c0 * tau > 0.0) value = drop / (c0 * tau);
  else if (std::isfinite(drop)) value = drop > 0.0 ? inf : -inf;
  return make_check("first-quarter Q drop / (c0 tau)", value, ">=", factor);
}

inline Check check_area_law(Series s, double tol = 1e-3) {
  const double v = s.size() < 2 ? nan : oracle::area_law_residual(s);
  return make_check("max |area / (e^t area_0) - 1|", v, "<=", tol);
}

/// |(t_stop + log(omega_n / |M_stop|)) / log(omega_n / |M_0|) - 1|.
inline Check check_existence_time(Series s, const DimensionConstants& dims, double tol = 0.02) {
  double v = nan;
  if (s.size() >= 2 && s.front().area < dims.omega_n) {
    const double predicted = std::log(dims.omega_n / s.front().area);
    const double estimate = (s.back().t - s.front().t) + std::log(dims.omega_n / s.back().area);
    v = std::abs(estimate / predicted - 1.0);
  }
  return make_check("relative existence-time mismatch", v, "<=", tol);
}

/// Smallest principal curvature over every record.
inline Check check_strict_convexity(Series s) {
  double m = inf;
  for (const auto& d : s) m = std::min(m, d.min_principal_curvature);
  return make_check("min principal curvature over all records", s.empty() ? nan : m, ">", 0.0);
}

/// Smallest principal curvature over records with t > t_0.
inline Check check_convexity_after_start(Series s) {
  double m = inf;
  for (std::size_t k = 1; k < s.size(); ++k) m = std::min(m, s[k].min_principal_curvature);
  return make_check("min principal curvature for t > 0", s.size() < 2 ? nan : m, ">", 0.0);
}

inline Check check_initial_convexity(Series s) {
  return make_check("min principal curvature at t = 0",
                    s.empty() ? nan : s.front().min_principal_curvature, ">=", -tol::num);
}

/// Largest <N, e0> over all records; the normal keeps one sign iff < 0
/// throughout (orientation convention: caps point their normal downward).
inline Check check_graph_sign(Series s) {
  double m = -inf;
  for (const auto& d : s) m = std::max(m, d.max_normal_height);
  return make_check("max <N, e0> over all records", s.empty() ? nan : m, "<", 0.0);
}

inline Check check_slope_finite(Series s) {
  double m = 0.0;
  for (const auto& d : s) m = std::max(m, d.sup_profile_slope);
  return make_check("max profile slope over all records", s.empty() ? nan : m, "<", inf);
}

/// Largest increase of area between records (MCF is area decreasing).
inline Check check_area_decreasing(Series s) {
  double worst = -inf;
  for (std::size_t k = 1; k < s.size(); ++k) worst = std::max(worst, s[k].area - s[k - 1].area);
  return make_check("max area increase between records", s.size() < 2 ? nan : worst, "<", 0.0);
}

/// final / initial of a positive quantity.
inline Check check_decay(std::string label, std::span<const double> values, double factor = 0.2) {
  double v = nan;
  if (values.size() >= 2 && values.front() != 0.0) v = values.back() / values.front();
  return make_check(std::move(label) + ": final / initial", v, "<", factor);
}

/// Largest increase over the last quarter of the values (at least two).
inline Check check_last_quarter_decreasing(std::string label, std::span<const double> values) {
  double worst = nan;
  if (values.size() >= 2) {
    const std::size_t count = std::max<std::size_t>(2, (values.size() + 3) / 4);
    worst = -inf;
    for (std::size_t k = values.size() - count + 1; k < values.size(); ++k)
      worst = std::max(worst, values[k] - values[k - 1]);
  }
  return make_check(std::move(label) + ": max increase over the last quarter of records", worst, "<",
                    0.0);
}

/// First-order continuity at t = 0: drift(t1) / drift(t2) with
/// drift(t) = |f(t) - f(0)|, compared with t1 / t2. The value is the
/// relative deviation from t1 / t2.
inline Check check_drift_ratio(std::string label, Series s, double FlowDiagnostics::*field, double t1,
                               double t2, double rel = 0.3) {
  double v = nan;
  if (!s.empty()) {
    const double f0 = s.front().*field;
    const double d1 = std::abs(interpolate(s, s.front().t + t1, field) - f0);
    const double d2 = std::abs(interpolate(s, s.front().t + t2, field) - f0);
    const double expected = t1 / t2;
    if (d2 > 0.0) v = std::abs(d1 / d2 - expected) / expected;
  }
  return make_check(std::move(label) + " drift ratio: relative deviation from t1/t2", v, "<=", rel);
}

// ---------------------------------------------------------------------------
// Verifiers

struct VerifyOptions {
  /// Base stepping controls; each verifier sets the mode and stopping rule.
  FlowConfig flow{};
  /// Corrupt the measured data with the verifier's documented counterexample.
  bool inject_defect = false;
  /// When non-empty, series CSV files are written here and listed as artifacts.
  std::string artifact_dir;
  /// IMCF area fraction for the decay and flatness runs.
  double decay_area_target = 0.999;
};

namespace detail {

inline std::string fmt_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline void attach_run(ExperimentReport& report, const FlowRun& run, const std::string& tag,
                       const VerifyOptions& opt) {
  report.parameters[tag + "stop_reason"] = to_string(run.stop_reason);
  report.parameters[tag + "stop_time"] = run.stop_time();
  report.parameters[tag + "steps"] = run.steps;
  report.parameters[tag + "records"] = run.series.size();
  if (!run.message.empty()) report.notes.push_back(tag + "stop: " + run.message);
  report.add(make_check(tag + "run ended without a step failure",
                        run.stop_reason == StopReason::StepFailure ? 1.0 : 0.0, "<=", 0.0));
  if (!opt.artifact_dir.empty()) {
    std::filesystem::create_directories(opt.artifact_dir);
    const auto path =
        (std::filesystem::path(opt.artifact_dir) / (report.name + "_" + tag + "series.csv")).string();
    write_text_file(path, series_to_csv(run.series));
    report.artifacts.push_back(path);
  }
}

/// Scales one field of the middle record.
inline std::vector<FlowDiagnostics> corrupt_middle(Series s, double FlowDiagnostics::*field,
                                                   double factor) {
  std::vector<FlowDiagnostics> out(s.begin(), s.end());
  if (out.size() >= 3) out[out.size() / 2].*field *= factor;
  return out;
}

inline FlowConfig imcf_config(const VerifyOptions& opt) {
  FlowConfig c = opt.flow;
  c.mode = FlowMode::IMCF;
  return c;
}

}  // namespace detail

/// Scale-invariant inequality Q >= disk value over caps and perturbed caps.
/// Strict gap for strictly convex entries, cap gap decreasing in rho, and
/// the gap vanishing along the flat limit.
inline ExperimentReport verify_inequality_sweep(const DimensionConstants& dims,
                                                std::vector<double> rho_grid,
                                                std::vector<double> flattening_grid,
                                                const VerifyOptions& opt = {}) {
  ExperimentReport report;
  report.name = "inequality";
  const std::size_t N = opt.flow.num_nodes;
  const double disk = oracle::disk_q_value(dims);
  report.parameters["n"] = dims.n;
  report.parameters["resolution"] = N;
  report.parameters["rho_grid"] = rho_grid;
  report.parameters["flattening_grid"] = flattening_grid;
  report.parameters["disk_q"] = disk;
  report.parameters["regime"] = dims.n >= 3 ? "n >= 3: scale-invariant inequality"
                                            : "n = 2: monotone functional only (exponent 0)";

  for (double fl : flattening_grid) {
    for (double rho : rho_grid) {
      const std::string tag = " [rho=" + detail::fmt_param(rho) + " flattening=" + detail::fmt_param(fl) + "]";
      try {
        const auto p = make_perturbed_cap(dims, rho, fl, N);
        const double gap = q_functional(p) - disk;
        report.add(make_check("Q - disk value" + tag, gap, ">=", -1e-6));
        if (curvatures(p).min_principal() > tol::num)
          report.add(make_check("strict gap, strictly convex" + tag, gap, ">", 1e-4));
      } catch (const Error& e) {
        report.add(make_check("construction" + tag, nan, ">=", -1e-6));
        report.notes.push_back("construction failed" + tag + ": " + e.what());
      }
    }
  }

  std::sort(rho_grid.begin(), rho_grid.end());
  std::vector<double> gaps;
  double oracle_err = 0.0;
  for (double rho : rho_grid) {
    const auto p = make_cap(dims, rho, N);
    const double q = q_functional(p);
    gaps.push_back(q - disk);
    oracle_err = std::max(oracle_err, std::abs(q - oracle::cap_q_exact(oracle::CapSpec::of(dims, rho))));
  }
  double worst = gaps.size() < 2 ? nan : -inf;
  for (std::size_t k = 1; k < gaps.size(); ++k) worst = std::max(worst, gaps[k] - gaps[k - 1]);
  report.add(make_check("cap gap change between increasing rho", worst, "<", 0.0));
  report.add(make_check("cap Q: quadrature vs closed form", oracle_err, "<=", 1e-6));
  report.add(make_check("flat-limit gap (rho = 1e6)", q_functional(make_cap(dims, 1e6, N)) - disk,
                        "<=", 1e-3));

  if (opt.inject_defect) {
    // A horizontal disk off the equator meets the sphere at an acute angle.
    const double h = 0.5, a = std::sqrt(1.0 - h * h);
    std::vector<Node> nodes(N);
    for (std::size_t i = 0; i < N; ++i)
      nodes[i] = {a * static_cast<double>(i) / static_cast<double>(N - 1), h};
    nodes.back() = {a, h};
    const AxisymmetricProfile plane(dims, std::move(nodes));
    report.add(make_check("Q - disk value [injected: horizontal disk at z=0.5]",
                          q_functional(plane) - disk, ">=", -1e-6));
  }
  return report;
}

/// IMCF from the rho-cap: Q non-increasing, the rate bound, the quantified
/// early drop, boundary growth below rate 1, convexity and the graph sign.
inline ExperimentReport verify_monotonicity(const DimensionConstants& dims, double rho,
                                            const VerifyOptions& opt = {}) {
  ExperimentReport report;
  report.name = "monotonicity";
  const auto cfg = detail::imcf_config(opt);
  report.parameters["n"] = dims.n;
  report.parameters["rho"] = rho;
  report.parameters["resolution"] = cfg.num_nodes;
  const auto run = run_flow(make_cap(dims, rho, cfg.num_nodes), cfg);
  detail::attach_run(report, run, "", opt);

  const auto series = opt.inject_defect
                          ? detail::corrupt_middle(run.series, &FlowDiagnostics::q_value, 1.01)
                          : run.series;
  if (opt.inject_defect) report.notes.push_back("injected: Q of the middle record scaled by 1.01");
  report.add(check_q_monotone(series));
  report.add(check_qdot_bound(series, dims));
  report.add(check_q_drop(series, dims));
  report.add(check_boundary_growth(series));
  report.add(check_strict_convexity(series));
  report.add(check_graph_sign(series));
  report.add(check_slope_finite(series));
  report.add(make_check("total Q decrease", series.front().q_value - series.back().q_value, ">", 0.0));
  return report;
}

/// Exponential area law, its first-order convergence in the node count and
/// the existence time implied by it.
inline ExperimentReport verify_area_law_and_Tstar(const DimensionConstants& dims, double rho,
                                                  const VerifyOptions& opt = {}) {
  ExperimentReport report;
  report.name = "arealaw";
  const auto cfg = detail::imcf_config(opt);
  auto coarse_cfg = cfg;
  coarse_cfg.num_nodes = std::max<std::size_t>(min_nodes, cfg.num_nodes / 4);
  report.parameters["n"] = dims.n;
  report.parameters["rho"] = rho;
  report.parameters["resolution"] = cfg.num_nodes;
  report.parameters["coarse_resolution"] = coarse_cfg.num_nodes;
  const auto initial = make_cap(dims, rho, cfg.num_nodes);
  report.parameters["predicted_T_star"] = oracle::predicted_existence_time(area(initial), dims);

  const auto run = run_flow(initial, cfg);
  detail::attach_run(report, run, "", opt);
  const auto coarse = run_flow(make_cap(dims, rho, coarse_cfg.num_nodes), coarse_cfg);
  detail::attach_run(report, coarse, "coarse_", opt);

  const auto series = opt.inject_defect
                          ? detail::corrupt_middle(run.series, &FlowDiagnostics::area, 1.01)
                          : run.series;
  if (opt.inject_defect) report.notes.push_back("injected: area of the middle record scaled by 1.01");
  const Check fine = check_area_law(series);
  report.add(fine);
  report.add(make_check("coarse residual - fine residual", check_area_law(coarse.series).value - fine.value,
                        ">", 0.0));
  report.add(check_existence_time(series, dims));
  return report;
}

/// MCF from a weakly convex perturbed cap: strict convexity for t > 0 and
/// first-order continuity of area, Willmore energy and boundary measure.
inline ExperimentReport verify_convexity_smoothing(const DimensionConstants& dims, double rho,
                                                   double flattening, double horizon,
                                                   const VerifyOptions& opt = {}) {
  ExperimentReport report;
  report.name = "smoothing";
  FlowConfig cfg = opt.flow;
  cfg.mode = FlowMode::MCF;
  cfg.max_time = horizon;
  cfg.record_interval = horizon / 10.0;
  cfg.record_every = std::numeric_limits<int>::max();
  report.parameters["n"] = dims.n;
  report.parameters["rho"] = rho;
  report.parameters["flattening"] = flattening;
  report.parameters["horizon"] = horizon;
  report.parameters["resolution"] = cfg.num_nodes;
  report.parameters["record_interval"] = cfg.record_interval;

  const auto run = run_flow(make_perturbed_cap(dims, rho, flattening, cfg.num_nodes), cfg);
  detail::attach_run(report, run, "", opt);
  auto series = run.series;
  if (opt.inject_defect && series.size() >= 2) {
    series[1].min_principal_curvature = -1e-3;
    report.notes.push_back("injected: min principal curvature of the first record after t = 0 set to -1e-3");
  }
  report.add(check_initial_convexity(series));
  report.add(check_convexity_after_start(series));
  report.add(check_area_decreasing(series));
  const double t1 = cfg.record_interval, t2 = 2.0 * cfg.record_interval;
  report.add(check_drift_ratio("area", series, &FlowDiagnostics::area, t1, t2));
  report.add(check_drift_ratio("willmore", series, &FlowDiagnostics::willmore, t1, t2));
  report.add(check_drift_ratio("boundary measure", series, &FlowDiagnostics::boundary_measure, t1, t2));
  return report;
}

struct NamedProfile {
  std::string name;
  AxisymmetricProfile profile;
};

/// Flat disk, caps over rho in {0.25, ..., 8} and perturbed caps.
inline std::vector<NamedProfile> default_cone_samples(const DimensionConstants& dims,
                                                      std::size_t num_nodes) {
  std::vector<NamedProfile> out;
  out.push_back({"flat disk", make_flat_disk(dims, num_nodes)});
  for (double rho : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0})
    out.push_back({"cap rho=" + detail::fmt_param(rho), make_cap(dims, rho, num_nodes)});
  for (double rho : {0.5, 1.0, 2.0})
    for (double fl : {0.2, 0.4})
      out.push_back({"perturbed cap rho=" + detail::fmt_param(rho) + " flattening=" + detail::fmt_param(fl),
                     make_perturbed_cap(dims, rho, fl, num_nodes)});
  return out;
}

/// Convex, non-perpendicular counterexample: a paraboloid cup from z = -0.8
/// on the axis to the sphere at radius 0.3.
inline AxisymmetricProfile make_cup_counterexample(const DimensionConstants& dims,
                                                   std::size_t num_nodes) {
  const double a = 0.3, top = std::sqrt(1.0 - a * a), bottom = -0.8;
  std::vector<Node> dense(4 * num_nodes);
  for (std::size_t i = 0; i < dense.size(); ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(dense.size() - 1);
    dense[i] = {a * u, bottom + (top - bottom) * u * u};
  }
  dense.back() = {a, top};
  return AxisymmetricProfile(dims, capflow::detail::resample_nodes(dense, num_nodes));
}

/// |M| <= cone volume over the boundary, equality on the equatorial disk,
/// and |M| < omega_n away from it.
inline ExperimentReport verify_cone_bound(const DimensionConstants& dims,
                                          std::vector<NamedProfile> samples,
                                          const VerifyOptions& opt = {}) {
  ExperimentReport report;
  report.name = "cone";
  report.parameters["n"] = dims.n;
  report.parameters["samples"] = samples.size();
  if (opt.inject_defect) {
    samples.push_back({"injected: non-perpendicular cup", make_cup_counterexample(dims, opt.flow.num_nodes)});
    report.notes.push_back("injected: convex cup meeting the sphere at an acute angle");
  }
  for (const auto& [name, p] : samples) {
    const double A = area(p), C = cone_volume(p);
    const auto b = boundary_state(p);
    report.add(make_check("area - cone volume [" + name + "]", A - C, "<=", 1e-8));
    if (b.contact_radius >= 1.0 - 1e-12)
      report.add(make_check("|area - cone volume| on the equator [" + name + "]", std::abs(A - C), "<=", 1e-8));
    else
      report.add(make_check("area / omega_n [" + name + "]", A / dims.omega_n, "<", 1.0));
  }
  return report;
}

/// Decay of the integrals of H^p along IMCF and C^1 flatness of the final
/// state (sup |z| and the profile slope each below a tenth of their start).
inline ExperimentReport verify_H_decay(const DimensionConstants& dims, double rho,
                                       const std::vector<int>& p_list, const VerifyOptions& opt = {}) {
  ExperimentReport report;
  report.name = "hdecay";
  auto cfg = detail::imcf_config(opt);
  cfg.area_target = opt.decay_area_target;
  cfg.snapshot_every = 1;
  report.parameters["n"] = dims.n;
  report.parameters["rho"] = rho;
  report.parameters["resolution"] = cfg.num_nodes;
  report.parameters["p_list"] = p_list;
  report.parameters["area_target"] = cfg.area_target;

  const auto run = run_flow(make_cap(dims, rho, cfg.num_nodes), cfg);
  detail::attach_run(report, run, "", opt);
  if (opt.inject_defect) report.notes.push_back("injected: every record replaced by the initial one");
  for (int p : p_list) {
    if (p < 1 || p > 3) throw ValidationError("p_list entries must lie in {1, 2, 3}");
    std::vector<double> values;
    for (const auto& snap : run.snapshots) values.push_back(hp_integral(snap.profile, p));
    if (opt.inject_defect) std::fill(values.begin(), values.end(), values.front());
    const std::string label = "integral of H^" + std::to_string(p);
    report.add(check_decay(label, values));
    report.add(check_last_quarter_decreasing(label, values));
  }
  const auto& first = run.series.front();
  const auto& last = opt.inject_defect ? first : run.series.back();
  report.add(make_check("sup |z|: final / initial", last.sup_z / first.sup_z, "<", 0.1));
  report.add(make_check("sup profile slope: final / initial",
                        last.sup_profile_slope / first.sup_profile_slope, "<", 0.1));
  return report;
}

struct CampaignGrids {
  double rho = 1.0;
  std::vector<double> rho_grid{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  std::vector<double> flattening_grid{0.0, 0.2, 0.4};
  double flattening = 0.3;
  double horizon = 1e-2;
  std::vector<int> p_list{1, 2, 3};
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"inequality", "monotonicity", "arealaw",
                                              "smoothing",  "cone",         "hdecay"};
  return names;
}

/// Runs one named experiment (or "all") with the given grids.
inline std::vector<ExperimentReport> run_experiment(const std::string& name, const DimensionConstants& dims,
                                                    const CampaignGrids& g, const VerifyOptions& opt) {
  if (name == "all") {
    std::vector<ExperimentReport> out;
    for (const auto& n : experiment_names()) out.push_back(run_experiment(n, dims, g, opt).front());
    return out;
  }
  if (name == "inequality") return {verify_inequality_sweep(dims, g.rho_grid, g.flattening_grid, opt)};
  if (name == "monotonicity") return {verify_monotonicity(dims, g.rho, opt)};
  if (name == "arealaw") return {verify_area_law_and_Tstar(dims, g.rho, opt)};
  if (name == "smoothing") return {verify_convexity_smoothing(dims, g.rho, g.flattening, g.horizon, opt)};
  if (name == "cone") return {verify_cone_bound(dims, default_cone_samples(dims, opt.flow.num_nodes), opt)};
  if (name == "hdecay") return {verify_H_decay(dims, g.rho, g.p_list, opt)};
  throw ValidationError("unknown experiment '" + name +
                        "' (expected inequality, monotonicity, arealaw, smoothing, cone, hdecay or all)");
}

}  // namespace capflow::experiments
