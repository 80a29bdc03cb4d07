#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "follow/perception.hpp"

namespace follow {
namespace {

const CameraIntrinsics kCam{500.0, 500.0, 320.0, 240.0, 640, 480};

BoxMeasurement at(double u, double v) { return {u, v, v - 100.0, 1.0}; }

TEST(DetectionGate, InitializesAfterThreeStableFrames) {
  DetectionGate gate;
  EXPECT_FALSE(gate_update(gate, at(100, 100)));
  EXPECT_FALSE(gate_update(gate, at(105, 102)));
  const auto init = gate_update(gate, at(108, 104));
  ASSERT_TRUE(init);
  EXPECT_EQ(init->u, 108.0);
  EXPECT_EQ(init->v, 104.0);
}

TEST(DetectionGate, JumpResetsWindow) {
  DetectionGate gate;
  EXPECT_FALSE(gate_update(gate, at(100, 100)));
  EXPECT_FALSE(gate_update(gate, at(150, 100)));
  EXPECT_FALSE(gate_update(gate, at(152, 101)));
  EXPECT_TRUE(gate_update(gate, at(153, 101)));
}

TEST(DetectionGate, TwoFramesAreNotEnough) {
  DetectionGate gate;
  EXPECT_FALSE(gate_update(gate, at(100, 100)));
  EXPECT_FALSE(gate_update(gate, at(101, 100)));
  EXPECT_LE(gate.window.size(), 3u);
}

TEST(DetectionGate, ToleranceIsStrict) {
  DetectionGate gate;
  gate_update(gate, at(100, 100));
  gate_update(gate, at(110, 100));  // exactly 10 px: not "less than"
  EXPECT_EQ(gate.window.size(), 1u);
}

TEST(SimulatedTrack, NoiselessVisibleInRegionIsExact) {
  NoiseModel noise;
  std::mt19937_64 rng(1);
  const BoxMeasurement truth{330.0, 250.0, 140.0, 1.0};
  const TrackerOutput out = simulated_track(truth, at(320, 240), 1.0, 64.0, noise, 0.0, rng);
  EXPECT_EQ(out.box.u, truth.u);
  EXPECT_EQ(out.box.v, truth.v);
  EXPECT_EQ(out.box.v2, truth.v2);
  EXPECT_EQ(out.score, noise.score_visible);
}

TEST(SimulatedTrack, OcclusionForcesLowScore) {
  NoiseModel noise;
  noise.occlusion_windows = {{1.0, 3.0}};
  std::mt19937_64 rng(1);
  const BoxMeasurement last = at(320, 240);
  const TrackerOutput out = simulated_track(at(321, 240), last, 1.0, 64.0, noise, 2.0, rng);
  EXPECT_EQ(out.score, noise.score_occluded);
  EXPECT_EQ(out.box.u, last.u);
  EXPECT_EQ(simulated_track(std::nullopt, last, 1.0, 64.0, noise, 5.0, rng).score, noise.score_occluded);
}

TEST(SimulatedTrack, RegionScaleControlsContainment) {
  NoiseModel noise;
  std::mt19937_64 rng(1);
  const BoxMeasurement last = at(320, 240);
  const BoxMeasurement truth = at(320 + 150, 240);  // 150 px > 64, < 192
  EXPECT_EQ(simulated_track(truth, last, 1.0, 64.0, noise, 0.0, rng).score, noise.score_occluded);
  EXPECT_EQ(simulated_track(truth, last, 3.0, 64.0, noise, 0.0, rng).score, noise.score_visible);
}

TEST(SimulatedTrack, DropoutAndNoiseAreSeedDeterministic) {
  NoiseModel noise;
  noise.sigma_px = 2.0;
  noise.dropout_prob = 0.3;
  std::mt19937_64 a(42), b(42);
  int drops = 0;
  for (int i = 0; i < 1000; ++i) {
    const TrackerOutput x = simulated_track(at(320, 240), at(320, 240), 1.0, 64.0, noise, 0.0, a);
    const TrackerOutput y = simulated_track(at(320, 240), at(320, 240), 1.0, 64.0, noise, 0.0, b);
    ASSERT_EQ(x.box.u, y.box.u);
    ASSERT_EQ(x.score, y.score);
    ASSERT_LT(x.box.v2, x.box.v);
    drops += x.score == noise.score_occluded;
  }
  EXPECT_GT(drops, 230);
  EXPECT_LT(drops, 370);
}

TEST(RecoveryStep, Transitions) {
  const RecoveryParams p;
  const double cap = p.scale_cap(kCam);
  RecoveryState s;
  s = recovery_step(s, 0.2, p, cap);
  EXPECT_TRUE(s.failure_state);
  EXPECT_DOUBLE_EQ(s.region_scale, 1.0 + p.step_s);

  const RecoveryState mid = recovery_step(s, 0.6, p, cap);
  EXPECT_TRUE(mid.failure_state);
  EXPECT_DOUBLE_EQ(mid.region_scale, s.region_scale + p.step_s);

  const RecoveryState back = recovery_step(mid, 0.9, p, cap);
  EXPECT_FALSE(back.failure_state);
  EXPECT_EQ(back.region_scale, 1.0);

  const RecoveryState normal_mid = recovery_step(RecoveryState{}, 0.6, p, cap);
  EXPECT_FALSE(normal_mid.failure_state);
  EXPECT_EQ(normal_mid.region_scale, 1.0);
}

TEST(RecoveryStep, HysteresisAndMonotoneGrowthOnRandomScores) {
  const RecoveryParams p;
  const double cap = p.scale_cap(kCam);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  RecoveryState s;
  for (int i = 0; i < 5000; ++i) {
    const double sc = score(rng);
    const RecoveryState next = recovery_step(s, sc, p, cap);
    if (s.failure_state && sc < p.th_high) {
      ASSERT_TRUE(next.failure_state);
      ASSERT_GE(next.region_scale, s.region_scale);
    }
    if (!s.failure_state && sc > p.th_low) ASSERT_FALSE(next.failure_state);
    if (!next.failure_state) ASSERT_EQ(next.region_scale, 1.0);
    ASSERT_LE(next.region_scale, cap);
    s = next;
  }
}

TEST(RecoveryStep, ScaleCapsAtFullImage) {
  const RecoveryParams p;
  const double cap = p.scale_cap(kCam);
  EXPECT_DOUBLE_EQ(cap, 10.0);
  RecoveryState s;
  for (int i = 0; i < 100; ++i) s = recovery_step(s, 0.0, p, cap);
  EXPECT_EQ(s.region_scale, cap);
}

PerceptionPipeline initialized_pipeline(PerceptionConfig cfg, const BoxMeasurement& box) {
  PerceptionPipeline pipe(std::move(cfg), kCam, 7);
  for (int i = 0; i < 3; ++i) pipe.update(box, 0.0);
  return pipe;
}

TEST(PerceptionPipeline, WaitsForGateThenPassesTruthThrough) {
  PerceptionPipeline pipe(PerceptionConfig{}, kCam, 7);
  const BoxMeasurement truth = at(300, 250);
  EXPECT_FALSE(pipe.update(truth, 0.0).box);
  EXPECT_FALSE(pipe.update(truth, 0.02).box);
  const auto third = pipe.update(truth, 0.04);
  ASSERT_TRUE(third.box);
  EXPECT_TRUE(third.initialized);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> step(-5.0, 5.0);
  BoxMeasurement moving = truth;
  for (int i = 0; i < 200; ++i) {
    moving.u += step(rng);
    moving.v += step(rng);
    moving.v2 = moving.v - 90.0;
    const auto out = pipe.update(moving, 0.1 + 0.02 * i);
    ASSERT_TRUE(out.box);
    ASSERT_FALSE(out.hold);
    ASSERT_EQ(out.box->u, moving.u);
    ASSERT_EQ(out.box->v, moving.v);
    ASSERT_EQ(out.box->v2, moving.v2);
  }
}

TEST(PerceptionPipeline, MissingDetectionResetsGate) {
  PerceptionPipeline pipe(PerceptionConfig{}, kCam, 7);
  pipe.update(at(300, 250), 0.0);
  pipe.update(at(300, 250), 0.02);
  pipe.update(std::nullopt, 0.04);
  EXPECT_FALSE(pipe.update(at(300, 250), 0.06).box);
  EXPECT_FALSE(pipe.update(at(300, 250), 0.08).box);
  EXPECT_TRUE(pipe.update(at(300, 250), 0.10).box);
}

TEST(PerceptionPipeline, PermanentOcclusionCapsWithoutReacquiring) {
  PerceptionConfig cfg;
  cfg.noise.occlusion_windows = {{1.0, 1000.0}};
  PerceptionPipeline pipe = initialized_pipeline(cfg, at(320, 240));
  double prev_scale = 1.0;
  for (int i = 0; i < 500; ++i) {
    const auto out = pipe.update(at(320, 240), 1.0 + 0.02 * i);
    ASSERT_TRUE(out.failure_state);
    ASSERT_TRUE(out.hold);
    ASSERT_GE(out.region_scale, prev_scale);
    prev_scale = out.region_scale;
  }
  EXPECT_EQ(prev_scale, cfg.recovery.scale_cap(kCam));
}

TEST(PerceptionPipeline, ReacquiresWithinRedetectionBound) {
  // Lose the target for one tick, then present it D pixels away.
  for (double displacement : {40.0, 100.0, 150.0, 250.0, 400.0}) {
    PerceptionConfig cfg;
    PerceptionPipeline pipe = initialized_pipeline(cfg, at(320, 240));
    ASSERT_TRUE(pipe.update(std::nullopt, 0.1).failure_state);
    const BoxMeasurement moved = at(320 - displacement * 0.5, 240 + displacement);
    const double r = cfg.recovery.search_radius_px;
    const int bound =
        static_cast<int>(std::ceil(std::max(0.0, (displacement / r - 1.0) / cfg.recovery.step_s)));
    int ticks = 0;
    while (pipe.update(moved, 0.2 + 0.02 * ticks).failure_state) {
      ++ticks;
      ASSERT_LE(ticks, 1000);
    }
    EXPECT_LE(ticks, bound) << "displacement " << displacement;
  }
}

TEST(NoiseModel, Validation) {
  NoiseModel n;
  EXPECT_NO_THROW(n.validate());
  n.occlusion_windows = {{1.0, 3.0}, {2.0, 4.0}};
  EXPECT_THROW(n.validate(), DomainError);
  n.occlusion_windows = {{1.0, 3.0}};
  n.score_occluded = 0.99;
  EXPECT_THROW(n.validate(), DomainError);
}

}  // namespace
}  // namespace follow
