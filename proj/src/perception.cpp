#include "follow/perception.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace follow {

std::optional<BoxMeasurement> gate_update(DetectionGate& gate, const BoxMeasurement& detection) {
  const Pixel center{detection.u, detection.v};
  if (!gate.window.empty()) {
    const Pixel& prev = gate.window.back();
    if (std::hypot(center.u - prev.u, center.v - prev.v) >= gate.pixel_tolerance) gate.window.clear();
  }
  gate.window.push_back(center);
  while (gate.window.size() > 3) gate.window.pop_front();
  if (gate.window.size() == 3) return detection;
  return std::nullopt;
}

void gate_reset(DetectionGate& gate) { gate.window.clear(); }

void NoiseModel::validate() const {
  if (!(sigma_px >= 0.0)) throw DomainError("noise.sigma_px must be >= 0");
  if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0)) throw DomainError("noise.dropout_prob must lie in [0, 1]");
  if (!(score_visible >= 0.0 && score_visible <= 1.0)) throw DomainError("noise.score_visible must lie in [0, 1]");
  if (!(score_occluded >= 0.0 && score_occluded <= 1.0))
    throw DomainError("noise.score_occluded must lie in [0, 1]");
  if (!(score_occluded < score_visible)) throw DomainError("noise.score_occluded must be < noise.score_visible");
  std::vector<OcclusionWindow> sorted = occlusion_windows;
  std::sort(sorted.begin(), sorted.end(),
            [](const OcclusionWindow& a, const OcclusionWindow& b) { return a.t_start < b.t_start; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!(sorted[i].t_end > sorted[i].t_start))
      throw DomainError("noise.occlusion_windows[" + std::to_string(i) + "] must have t_end > t_start");
    if (i > 0 && sorted[i].t_start < sorted[i - 1].t_end)
      throw DomainError("noise.occlusion_windows must not overlap");
  }
}

bool NoiseModel::occluded_at(double t) const {
  return std::any_of(occlusion_windows.begin(), occlusion_windows.end(),
                     [t](const OcclusionWindow& w) { return w.contains(t); });
}

void RecoveryParams::validate() const {
  if (!(th_low < th_high)) throw DomainError("recovery.th_low must be < recovery.th_high");
  if (!(step_s > 0.0)) throw DomainError("recovery.step_s must be > 0");
  if (!(search_radius_px > 0.0)) throw DomainError("recovery.search_radius_px must be > 0");
}

double RecoveryParams::scale_cap(const CameraIntrinsics& k) const {
  return std::max(1.0, std::max(k.width, k.height) / search_radius_px);
}

RecoveryState recovery_step(RecoveryState state, double score, const RecoveryParams& params, double scale_cap) {
  if (score <= params.th_low) {
    state.failure_state = true;
  } else if (score >= params.th_high) {
    state.failure_state = false;
  }
  if (state.failure_state) {
    state.region_scale = std::min(state.region_scale + params.step_s, scale_cap);
  } else {
    state.region_scale = 1.0;
  }
  return state;
}

bool in_search_region(const BoxMeasurement& last, const BoxMeasurement& center, double region_scale,
                      double search_radius_px) {
  const double half = region_scale * search_radius_px;
  return std::abs(center.u - last.u) <= half && std::abs(center.v - last.v) <= half;
}

TrackerOutput simulated_track(const std::optional<BoxMeasurement>& truth, const BoxMeasurement& last_box,
                              double region_scale, double search_radius_px, const NoiseModel& noise, double t,
                              std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double nu = gauss(rng), nv = gauss(rng), nv2 = gauss(rng);
  const double drop = uniform(rng);

  const bool lost = noise.occluded_at(t) || !truth ||
                    !in_search_region(last_box, *truth, region_scale, search_radius_px) ||
                    drop < noise.dropout_prob;
  if (lost) {
    TrackerOutput out{last_box, noise.score_occluded};
    out.box.score = noise.score_occluded;
    return out;
  }

  BoxMeasurement box = *truth;
  box.u += noise.sigma_px * nu;
  box.v += noise.sigma_px * nv;
  box.v2 += noise.sigma_px * nv2;
  box.v2 = std::min(box.v2, box.v - 1.0);
  box.score = noise.score_visible;
  return {box, noise.score_visible};
}

PerceptionPipeline::PerceptionPipeline(PerceptionConfig config, const CameraIntrinsics& k, std::uint64_t seed)
    : config_(std::move(config)), scale_cap_(config_.recovery.scale_cap(k)), rng_(seed) {
  gate_.pixel_tolerance = config_.gate_tolerance_px;
}

PerceptionPipeline::Output PerceptionPipeline::update(const std::optional<BoxMeasurement>& truth, double t) {
  Output out;
  if (!initialized_) {
    if (!truth) {
      gate_reset(gate_);
      return out;
    }
    if (auto init = gate_update(gate_, *truth)) {
      initialized_ = true;
      last_box_ = *init;
      recovery_ = {};
      out.box = last_box_;
      out.score = last_box_.score;
      out.initialized = true;
    }
    return out;
  }

  const TrackerOutput tracked =
      simulated_track(truth, last_box_, recovery_.region_scale, config_.recovery.search_radius_px, config_.noise, t,
                      rng_);
  recovery_ = recovery_step(recovery_, tracked.score, config_.recovery, scale_cap_);

  out.initialized = true;
  out.score = tracked.score;
  out.failure_state = recovery_.failure_state;
  out.region_scale = recovery_.region_scale;
  if (recovery_.failure_state) {
    out.box = last_box_;
    out.hold = true;
  } else {
    last_box_ = tracked.box;
    out.box = last_box_;
  }
  return out;
}

}  // namespace follow
