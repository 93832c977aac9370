#include <gtest/gtest.h>

#include <cmath>

#include "capflow/construct.hpp"
#include "capflow/flow.hpp"
#include "capflow/oracle.hpp"

using namespace capflow;

TEST(FlowConfig, Validation) {
  FlowConfig c;
  EXPECT_NO_THROW(c.validate());
  auto bad = [](auto mutate) {
    FlowConfig k;
    mutate(k);
    return k;
  };
  EXPECT_THROW(bad([](FlowConfig& k) { k.dt_init = 0.0; }).validate(), ValidationError);
  EXPECT_THROW(bad([](FlowConfig& k) { k.cfl = 1.0; }).validate(), ValidationError);
  EXPECT_THROW(bad([](FlowConfig& k) { k.num_nodes = 8; }).validate(), ValidationError);
  EXPECT_THROW(bad([](FlowConfig& k) { k.area_target = 1.5; }).validate(), ValidationError);
  EXPECT_THROW(bad([](FlowConfig& k) { k.min_H = -1.0; }).validate(), ValidationError);
  EXPECT_THROW(bad([](FlowConfig& k) { k.record_interval = -1.0; }).validate(), ValidationError);
}

TEST(StepImcf, OneStepGrowsAreaByExpDt) {
  // d|M|/dt = |M| under IMCF.
  const auto d = DimensionConstants::of(3);
  const double dt = 1e-4;
  for (double rho : {0.5, 1.0, 2.0}) {
    const auto s0 = make_state(make_cap(d, rho, 128), FlowMode::IMCF);
    const auto s1 = step_imcf(s0, dt);
    EXPECT_NEAR(s1.diagnostics.area / s0.diagnostics.area, std::exp(dt), 1e-6) << rho;
    EXPECT_DOUBLE_EQ(s1.t, dt);
    EXPECT_LE(s1.diagnostics.perp_defect, tol::perp);
  }
}

TEST(StepImcf, FlatDiskCannotStart) {
  const auto s = make_state(make_flat_disk(DimensionConstants::of(3), 64), FlowMode::IMCF);
  EXPECT_THROW(step_imcf(s, 1e-4), MinHReached);
  EXPECT_THROW(step_imcf(s, 0.0), ValidationError);
}

TEST(StepImcf, CapsAreNotSelfSimilar) {
  // A cap moves by N / H = rho / n along its normal: the image is the
  // concentric sphere of radius rho + rho dt / n, which no longer meets the
  // unit sphere orthogonally. After the boundary is restored the profile
  // departs from every orthogonal cap by an amount linear in dt.
  const auto d = DimensionConstants::of(3);
  const auto s0 = make_state(make_cap(d, 1.0, 64), FlowMode::IMCF);
  EXPECT_LE(oracle::cap_fit_residual(s0.profile), 1e-12);
  const double r1 = oracle::cap_fit_residual(step_imcf(s0, 1e-4).profile);
  const double r2 = oracle::cap_fit_residual(step_imcf(s0, 2e-4).profile);
  EXPECT_GT(r1, 5e-6);
  EXPECT_NEAR(r2 / r1, 2.0, 0.1);
}

TEST(StepMcf, FlatDiskIsStationary) {
  const auto s0 = make_state(make_flat_disk(DimensionConstants::of(3), 64), FlowMode::MCF);
  auto s = s0;
  for (int k = 0; k < 10; ++k) s = step_mcf(s, 1e-5);
  for (std::size_t i = 0; i < s.profile.size(); ++i) {
    EXPECT_NEAR(s.profile.nodes()[i].r, s0.profile.nodes()[i].r, 1e-12);
    EXPECT_NEAR(s.profile.nodes()[i].z, 0.0, 1e-12);
  }
}

TEST(StepMcf, AreaDecreasesAtTheWillmoreRate) {
  // d|M|/dt = -integral H^2 under MCF with free boundary.
  const auto s0 = make_state(make_cap(DimensionConstants::of(3), 1.0, 128), FlowMode::MCF);
  const double dt = 1e-6;
  const auto s1 = step_mcf(s0, dt);
  EXPECT_LT(s1.diagnostics.area, s0.diagnostics.area);
  const double rate = (s1.diagnostics.area - s0.diagnostics.area) / dt;
  EXPECT_NEAR(rate / -s0.diagnostics.willmore, 1.0, 2e-2);
}

TEST(AdaptiveDt, ScalesWithSquaredSpacing) {
  const auto d = DimensionConstants::of(3);
  FlowConfig c;
  c.dt_max = 1.0;
  for (FlowMode mode : {FlowMode::IMCF, FlowMode::MCF}) {
    c.mode = mode;
    const double a = adaptive_dt(make_state(make_cap(d, 1.0, 64), mode), c);
    const double b = adaptive_dt(make_state(make_cap(d, 1.0, 127), mode), c);
    EXPECT_NEAR(b / a, 0.25, 1e-5);  // chords, not arcs
  }
  c.mode = FlowMode::IMCF;
  // IMCF diffusivity 1/H^2: a cap with H = 3 allows a 9x larger step than MCF.
  FlowConfig m = c;
  m.mode = FlowMode::MCF;
  const auto cap = make_cap(d, 1.0, 64);
  EXPECT_NEAR(adaptive_dt(make_state(cap, FlowMode::IMCF), c) / adaptive_dt(make_state(cap, FlowMode::MCF), m),
              9.0, 1e-4);
  c.dt_max = 1e-9;
  EXPECT_EQ(adaptive_dt(make_state(cap, FlowMode::IMCF), c), 1e-9);
}

TEST(RunFlow, FlatDiskImcfStopsImmediately) {
  FlowConfig c;
  c.num_nodes = 64;
  const auto run = run_flow(make_flat_disk(DimensionConstants::of(3), 64), c);
  EXPECT_EQ(run.stop_reason, StopReason::MinHReached);
  EXPECT_EQ(run.steps, 0u);
  EXPECT_EQ(run.stop_time(), 0.0);
  EXPECT_FALSE(run.predicted_T_star.has_value());
}

TEST(RunFlow, CapReachesTheAreaTargetAtThePredictedTime) {
  const auto d = DimensionConstants::of(3);
  FlowConfig c;
  c.num_nodes = 64;
  c.area_target = 0.99;
  const auto run = run_flow(make_cap(d, 1.0, 64), c);
  ASSERT_EQ(run.stop_reason, StopReason::AreaTarget) << run.message;
  ASSERT_TRUE(run.predicted_T_star.has_value());
  EXPECT_NEAR(*run.predicted_T_star, std::log(d.omega_n / run.series.front().area), 1e-12);
  // |M_t| = e^t |M_0| reaches 0.99 omega_n at T* + log(0.99).
  const double expected = *run.predicted_T_star + std::log(0.99);
  EXPECT_NEAR(run.stop_time() / expected, 1.0, 0.02);
  EXPECT_GE(run.series.back().area, 0.99 * d.omega_n);
  EXPECT_LE(oracle::area_law_residual(run), 1e-3);
  for (const auto& r : run.series) EXPECT_LE(r.perp_defect, tol::perp);
  EXPECT_TRUE(run.final_state.has_value());
  EXPECT_EQ(run.snapshots.size(), 2u);
}

TEST(RunFlow, RecordIntervalLandsOnMultiples) {
  FlowConfig c;
  c.mode = FlowMode::MCF;
  c.num_nodes = 48;
  c.max_time = 2e-3;
  c.record_interval = 5e-4;
  c.record_every = 1000000;
  c.snapshot_every = 1;
  const auto run = run_flow(make_cap(DimensionConstants::of(3), 1.0, 48), c);
  ASSERT_EQ(run.stop_reason, StopReason::Horizon);
  std::vector<double> want{0.0, 5e-4, 1e-3, 1.5e-3, 2e-3};
  ASSERT_EQ(run.series.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(run.series[i].t, want[i], 1e-15);
  EXPECT_EQ(run.snapshots.size(), want.size());
  for (const auto& r : run.series) EXPECT_EQ(r.area_law_residual, 0.0);
}

TEST(RunFlow, MirroredCapWithFlippedOrientationMatches) {
  // z -> -z with N -> -N is a symmetry of both flows.
  const auto d = DimensionConstants::of(3);
  const auto cap = make_cap(d, 1.0, 64);
  std::vector<Node> nodes(cap.nodes().begin(), cap.nodes().end());
  for (auto& p : nodes) p.z = -p.z;
  const AxisymmetricProfile mirrored(d, nodes, -1);
  FlowConfig c;
  c.num_nodes = 64;
  c.max_time = 0.05;
  const auto a = run_flow(cap, c), b = run_flow(mirrored, c);
  ASSERT_EQ(a.series.size(), b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    EXPECT_NEAR(a.series[i].area, b.series[i].area, 1e-12);
    EXPECT_NEAR(a.series[i].min_H, b.series[i].min_H, 1e-9);
  }
}

TEST(RunFlow, ResampleOnLoadAndDeterminism) {
  FlowConfig c;
  c.num_nodes = 48;
  c.max_time = 0.05;
  const auto p = make_cap(DimensionConstants::of(3), 1.0, 32);
  const auto a = run_flow(p, c), b = run_flow(p, c);
  ASSERT_EQ(a.series.size(), b.series.size());
  EXPECT_EQ(a.final_state->profile.size(), 48u);
  for (std::size_t i = 0; i < a.series.size(); ++i) EXPECT_EQ(a.series[i].area, b.series[i].area);
}
