#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "capflow/boundary.hpp"
#include "capflow/curvature.hpp"
#include "capflow/geometry.hpp"
#include "capflow/profile.hpp"
#include "capflow/resample.hpp"

namespace capflow {

enum class FlowMode { IMCF, MCF };
enum class StopReason { Horizon, MinHReached, AreaTarget, StepFailure };

inline const char* to_string(FlowMode m) { return m == FlowMode::IMCF ? "imcf" : "mcf"; }

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::Horizon: return "Horizon";
    case StopReason::MinHReached: return "MinHReached";
    case StopReason::AreaTarget: return "AreaTarget";
    case StopReason::StepFailure: return "StepFailure";
  }
  return "?";
}

struct FlowConfig {
  FlowMode mode = FlowMode::IMCF;
  double dt_init = 1e-4;
  double dt_max = 1e-3;
  double cfl = 0.2;
  double min_H = 1e-3;   ///< IMCF stops once any node falls below this
  double max_time = 10.0;
  int resample_every = 20;
  std::size_t num_nodes = 128;
  int record_every = 100;
  /// When > 0, steps are clipped so that a record lands on every multiple.
  double record_interval = 0.0;
  /// IMCF stops once |M_t| reaches this fraction of omega_n.
  double area_target = 0.99;
  /// Keep a profile snapshot every this many records; 0 keeps first and last.
  int snapshot_every = 0;

  void validate() const {
    if (!(dt_init > 0.0)) throw ValidationError("dt_init must be > 0");
    if (!(dt_max > 0.0)) throw ValidationError("dt_max must be > 0");
    if (!(min_H > 0.0)) throw ValidationError("min_H must be > 0");
    if (!(max_time > 0.0)) throw ValidationError("max_time must be > 0");
    if (!(cfl > 0.0 && cfl < 1.0)) throw ValidationError("cfl must lie in (0, 1)");
    if (resample_every < 1) throw ValidationError("resample_every must be >= 1");
    if (record_every < 1) throw ValidationError("record_every must be >= 1");
    if (num_nodes < 16) throw ValidationError("num_nodes must be >= 16");
    if (!(record_interval >= 0.0)) throw ValidationError("record_interval must be >= 0");
    if (!(area_target > 0.0 && area_target <= 1.0))
      throw ValidationError("area_target must lie in (0, 1]");
    if (snapshot_every < 0) throw ValidationError("snapshot_every must be >= 0");
  }
};

struct FlowDiagnostics {
  double t = 0.0;
  double area = 0.0;
  double boundary_measure = 0.0;
  double willmore = 0.0;
  double h1_integral = 0.0;
  double q_value = 0.0;
  double min_principal_curvature = 0.0;
  double min_H = 0.0;
  double max_H = 0.0;
  double perp_defect = 0.0;
  double area_law_residual = 0.0;  ///< |area / (e^t area_0) - 1| for IMCF, 0 for MCF
  double sup_z = 0.0;
  double sup_profile_slope = 0.0;
  double max_normal_height = 0.0;  ///< max <N, e0>; keeps one sign while the graph property holds
};

inline FlowDiagnostics diagnose(const AxisymmetricProfile& profile, double t, double reference_area,
                                FlowMode mode) {
  const auto curv = curvatures(profile);
  const SurfaceQuadrature quad(profile);
  const std::size_t n = profile.size();
  std::vector<double> h2(n);
  for (std::size_t i = 0; i < n; ++i) h2[i] = curv.H[i] * curv.H[i];

  FlowDiagnostics d;
  d.t = t;
  d.area = quad.measure();
  const auto b = boundary_state(profile, curv);
  d.boundary_measure = b.boundary_measure;
  d.perp_defect = b.perp_defect;
  d.willmore = quad.integrate(h2);
  d.h1_integral = quad.integrate(curv.H);
  d.q_value = q_functional(d.area, d.willmore, d.boundary_measure, profile.dims());
  d.min_principal_curvature = curv.min_principal();
  d.min_H = curv.min_H();
  d.max_H = curv.max_H();
  d.area_law_residual =
      mode == FlowMode::IMCF ? std::abs(d.area / (std::exp(t) * reference_area) - 1.0) : 0.0;
  d.max_normal_height = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    d.sup_z = std::max(d.sup_z, std::abs(profile.nodes()[i].z));
    d.sup_profile_slope = std::max(d.sup_profile_slope, std::abs(std::tan(curv.theta[i])));
    d.max_normal_height =
        std::max(d.max_normal_height, unit_normal(curv.theta[i], profile.orientation()).z);
  }
  return d;
}

struct FlowState {
  double t = 0.0;
  AxisymmetricProfile profile;
  FlowDiagnostics diagnostics;
  double reference_area = 0.0;  ///< |M_0| of the run the state belongs to
};

inline FlowState make_state(const AxisymmetricProfile& profile, FlowMode mode, double t = 0.0,
                            std::optional<double> reference_area = std::nullopt) {
  const double ref = reference_area ? *reference_area : area(profile);
  return {t, profile, diagnose(profile, t, ref, mode), ref};
}

namespace detail {

/// One explicit normal step in place; nodes move by dt * speed * N, then
/// the free boundary is restored.
inline void advance(std::vector<Node>& nodes, std::vector<Frame>& frames, double dt, FlowMode mode,
                    double min_H, int orientation, double dim) {
  compute_frames(nodes, orientation, dim, frames);
  if (mode == FlowMode::IMCF) {
    double h = frames.front().H;
    for (const auto& f : frames) h = std::min(h, f.H);
    if (!(h >= min_H))
      throw MinHReached("mean curvature " + std::to_string(h) + " below the floor " +
                        std::to_string(min_H));
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Frame& f = frames[i];
    const double speed = mode == FlowMode::IMCF ? 1.0 / f.H : -f.H;
    nodes[i].r += dt * speed * orientation * f.tz;
    nodes[i].z -= dt * speed * orientation * f.tr;
  }
  nodes.front().r = 0.0;
  for (const Node& p : nodes)
    if (!std::isfinite(p.r) || !std::isfinite(p.z)) throw StepFailure("non-finite node position");
  enforce_boundary_nodes(nodes);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!(nodes[i + 1].r > nodes[i].r))
      throw StepFailure("profile lost the graph property at node " + std::to_string(i + 1));
}

inline std::pair<double, double> chord_range(std::span<const Node> nodes) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double l = std::hypot(nodes[i + 1].r - nodes[i].r, nodes[i + 1].z - nodes[i].z);
    lo = std::min(lo, l);
    hi = std::max(hi, l);
  }
  return {lo, hi};
}

inline double stable_dt(std::span<const Node> nodes, std::span<const Frame> frames, FlowMode mode,
                        const FlowConfig& config) {
  const double h = chord_range(nodes).first;
  double diffusivity = 1.0;
  if (mode == FlowMode::IMCF) {
    double hmin = frames.front().H;
    for (const auto& f : frames) hmin = std::min(hmin, f.H);
    hmin = std::max(hmin, config.min_H);
    diffusivity = 1.0 / (hmin * hmin);
  }
  return std::min(config.cfl * h * h / diffusivity, config.dt_max);
}

inline FlowState step(const FlowState& state, double dt, FlowMode mode, double min_H) {
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  std::vector<Node> nodes(state.profile.nodes().begin(), state.profile.nodes().end());
  std::vector<Frame> frames;
  advance(nodes, frames, dt, mode, min_H, state.profile.orientation(), state.profile.dims().n);
  auto next = AxisymmetricProfile::unchecked(state.profile.dims(), std::move(nodes),
                                             state.profile.orientation());
  try {
    next.validate();
  } catch (const Error& e) {
    throw StepFailure(std::string("post-step validation: ") + e.what());
  }
  return make_state(next, mode, state.t + dt, state.reference_area);
}

}  // namespace detail

/// Inverse mean curvature flow step: X <- X + dt N / H, free boundary restored.
inline FlowState step_imcf(const FlowState& state, double dt, double min_H = 1e-3) {
  return detail::step(state, dt, FlowMode::IMCF, min_H);
}

/// Mean curvature flow step: X <- X - dt H N, free boundary restored.
inline FlowState step_mcf(const FlowState& state, double dt) {
  return detail::step(state, dt, FlowMode::MCF, 0.0);
}

/// Parabolic step bound cfl * h^2 / D with D = 1/min(H)^2 for IMCF and 1 for
/// MCF, h the smallest node spacing; clamped to dt_max.
inline double adaptive_dt(const FlowState& state, const FlowConfig& config) {
  std::vector<detail::Frame> frames;
  detail::compute_frames(state.profile.nodes(), state.profile.orientation(),
                         state.profile.dims().n, frames);
  return detail::stable_dt(state.profile.nodes(), frames, config.mode, config);
}

struct ProfileSnapshot {
  double t = 0.0;
  AxisymmetricProfile profile;
};

struct FlowRun {
  FlowConfig config;
  std::vector<FlowDiagnostics> series;
  std::vector<ProfileSnapshot> snapshots;
  StopReason stop_reason = StopReason::Horizon;
  std::string message;
  /// log(omega_n / |M_0|); absent for MCF or when |M_0| >= omega_n.
  std::optional<double> predicted_T_star;
  std::optional<FlowState> final_state;
  std::size_t steps = 0;

  double stop_time() const { return series.empty() ? 0.0 : series.back().t; }
};

/// Evolves `initial` until the horizon, the IMCF mean curvature floor, the
/// IMCF area target, or a failed step. The state before a failed step is
/// kept as the final state.
inline FlowRun run_flow(const AxisymmetricProfile& initial, const FlowConfig& config) {
  config.validate();
  FlowRun run;
  run.config = config;
  const FlowMode mode = config.mode;
  const auto& dims = initial.dims();
  const int orient = initial.orientation();

  std::vector<Node> nodes(initial.nodes().begin(), initial.nodes().end());
  if (nodes.size() != config.num_nodes) {
    nodes = detail::resample_nodes(nodes, config.num_nodes);
    detail::enforce_boundary_nodes(nodes);
  }
  auto start = AxisymmetricProfile(dims, nodes, orient);
  const double area0 = area(start);
  if (mode == FlowMode::IMCF && area0 < dims.omega_n)
    run.predicted_T_star = std::log(dims.omega_n / area0);

  FlowState state = make_state(start, mode, 0.0, area0);
  run.series.push_back(state.diagnostics);
  run.snapshots.push_back({0.0, start});

  if (mode == FlowMode::IMCF) {
    if (!(state.diagnostics.min_H >= config.min_H)) {
      run.stop_reason = StopReason::MinHReached;
      run.message = "initial mean curvature below the floor";
      run.final_state = state;
      return run;
    }
    if (!(state.diagnostics.min_principal_curvature > 0.0))
      throw ValidationError("IMCF requires strictly convex initial data");
  }

  std::vector<detail::Frame> frames;
  double t = 0.0;
  std::size_t records = 1;
  std::size_t since_record = 0;
  const double target_area = config.area_target * dims.omega_n;
  double next_record_time =
      config.record_interval > 0.0 ? config.record_interval : std::numeric_limits<double>::infinity();

  auto record = [&](bool force_snapshot) {
    auto prof = AxisymmetricProfile::unchecked(dims, nodes, orient);
    prof.validate();
    state = make_state(prof, mode, t, area0);
    run.series.push_back(state.diagnostics);
    ++records;
    since_record = 0;
    if (force_snapshot ||
        (config.snapshot_every > 0 && (records - 1) % config.snapshot_every == 0))
      run.snapshots.push_back({t, prof});
  };

  std::vector<Node> backup;
  bool record_failed = false;
  while (true) {
    if (t >= config.max_time * (1.0 - 1e-14)) {
      run.stop_reason = StopReason::Horizon;
      break;
    }
    if (mode == FlowMode::IMCF && std::exp(t) * area0 >= 0.98 * target_area &&
        area(AxisymmetricProfile::unchecked(dims, nodes, orient)) >= target_area) {
      run.stop_reason = StopReason::AreaTarget;
      break;
    }
    detail::compute_frames(nodes, orient, dims.n, frames);
    double dt = detail::stable_dt(nodes, frames, mode, config);
    if (run.steps == 0) dt = std::min(dt, config.dt_init);
    bool hits_record = false;
    if (t + dt >= config.max_time) dt = config.max_time - t;
    if (t + dt >= next_record_time * (1.0 - 1e-13)) {
      dt = next_record_time - t;
      hits_record = true;
    }
    backup = nodes;
    try {
      detail::advance(nodes, frames, dt, mode, config.min_H, orient, dims.n);
      const auto [lo, hi] = detail::chord_range(nodes);
      if ((run.steps + 1) % config.resample_every == 0 || hi > 2.0 * lo) {
        nodes = detail::resample_nodes(nodes, nodes.size());
        detail::enforce_boundary_nodes(nodes);
      }
    } catch (const MinHReached& e) {
      nodes = backup;
      run.stop_reason = StopReason::MinHReached;
      run.message = e.what();
      break;
    } catch (const Error& e) {
      nodes = backup;
      run.stop_reason = StopReason::StepFailure;
      run.message = e.what();
      break;
    }
    t = hits_record ? next_record_time : t + dt;
    ++run.steps;
    ++since_record;
    try {
      if (hits_record) {
        next_record_time += config.record_interval;
        record(false);
      } else if (since_record >= static_cast<std::size_t>(config.record_every)) {
        record(false);
      }
    } catch (const Error& e) {
      run.stop_reason = StopReason::StepFailure;
      run.message = e.what();
      record_failed = true;
      break;
    }
  }

  if (since_record > 0 && !record_failed) {
    try {
      record(true);
    } catch (const Error& e) {
      run.stop_reason = StopReason::StepFailure;
      run.message = e.what();
    }
  } else if (run.snapshots.back().t != state.t) {
    run.snapshots.push_back({state.t, state.profile});
  }
  run.final_state = state;
  return run;
}

}  // namespace capflow
