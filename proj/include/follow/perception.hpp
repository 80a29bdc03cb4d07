#ifndef FOLLOW_PERCEPTION_HPP
#define FOLLOW_PERCEPTION_HPP

// Simulated detector/tracker front end. The detector is represented only by
// its initialization rule, the tracker by a noise/occlusion channel whose
// confidence score drives the hysteretic failure-recovery state machine.

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "follow/controller.hpp"
#include "follow/geometry.hpp"

namespace follow {

struct DetectionGate {
  std::deque<Pixel> window;  // at most 3 consecutive centers
  double pixel_tolerance = 10.0;
};

/// Feeds one detected center. Returns the detection once three consecutive
/// centers each moved less than pixel_tolerance from the previous frame.
std::optional<BoxMeasurement> gate_update(DetectionGate& gate, const BoxMeasurement& detection);

/// A frame without any detection breaks the consecutive run.
void gate_reset(DetectionGate& gate);

struct OcclusionWindow {
  double t_start = 0.0;
  double t_end = 0.0;

  bool contains(double t) const { return t >= t_start && t < t_end; }
};

struct NoiseModel {
  double sigma_px = 0.0;
  std::vector<OcclusionWindow> occlusion_windows;
  double dropout_prob = 0.0;
  double score_visible = 0.95;
  double score_occluded = 0.1;

  void validate() const;
  bool occluded_at(double t) const;
};

struct RecoveryParams {
  double th_low = 0.4;
  double th_high = 0.8;
  double step_s = 0.5;
  double search_radius_px = 64.0;  // nominal half-extent of the search region

  void validate() const;
  /// Scale at which the region covers the whole image from any center.
  double scale_cap(const CameraIntrinsics& k) const;
};

struct RecoveryState {
  bool failure_state = false;
  double region_scale = 1.0;
};

RecoveryState recovery_step(RecoveryState state, double score, const RecoveryParams& params, double scale_cap);

struct TrackerOutput {
  BoxMeasurement box;
  double score = 0.0;
};

/// Whether `center` lies inside the square search region around `last`.
bool in_search_region(const BoxMeasurement& last, const BoxMeasurement& center, double region_scale,
                      double search_radius_px);

/// One tracker update. Consumes exactly four draws from `rng` per call so the
/// stream stays aligned regardless of which branch is taken.
TrackerOutput simulated_track(const std::optional<BoxMeasurement>& truth, const BoxMeasurement& last_box,
                              double region_scale, double search_radius_px, const NoiseModel& noise, double t,
                              std::mt19937_64& rng);

struct PerceptionConfig {
  NoiseModel noise;
  RecoveryParams recovery;
  double gate_tolerance_px = 10.0;
};

class PerceptionPipeline {
 public:
  PerceptionPipeline(PerceptionConfig config, const CameraIntrinsics& k, std::uint64_t seed);

  struct Output {
    std::optional<BoxMeasurement> box;  // what the controller sees; empty before initialization
    bool hold = false;                  // controller must hold and decay
    double score = 0.0;
    double region_scale = 1.0;
    bool failure_state = false;
    bool initialized = false;
  };

  /// `truth` is the rendered box when the target is visible, empty otherwise.
  Output update(const std::optional<BoxMeasurement>& truth, double t);

  bool initialized() const { return initialized_; }
  const RecoveryState& recovery() const { return recovery_; }
  const BoxMeasurement& last_box() const { return last_box_; }

 private:
  PerceptionConfig config_;
  double scale_cap_;
  DetectionGate gate_;
  bool initialized_ = false;
  BoxMeasurement last_box_;
  RecoveryState recovery_;
  std::mt19937_64 rng_;
};

}  // namespace follow

#endif  // FOLLOW_PERCEPTION_HPP
