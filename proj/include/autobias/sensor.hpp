#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "autobias/bias.hpp"
#include "autobias/events.hpp"
#include "autobias/scene.hpp"

namespace autobias {

/// Behavioral event-camera simulator.
///
/// Each pixel low-pass filters the log-illuminance of the scripted scene
/// (exact discrete pole per step), optionally high-pass filters it, and
/// compares the signal against a per-event reference level: a crossing of
/// theta_on / theta_off past the refractory window emits an event and resets
/// the reference to the current signal value. Background-activity noise is a
/// per-pixel per-step Bernoulli draw, scaled up in darkness; a noise event
/// resets the pixel like any other event.
///
/// Determinism: identical (scene, params, seed) produce byte-identical
/// streams for any thread count. Rows are simulated in independent bands
/// (pixels do not interact) and merged per step in (y, x) order. All
/// randomness comes from counter-based streams keyed on (seed, step).
class SensorSim {
 public:
  SensorSim(SceneScript scene, PixelParams params, int threads = 0);
  ~SensorSim();

  SensorSim(const SensorSim&) = delete;
  SensorSim& operator=(const SensorSim&) = delete;

  /// Live register write: thresholds, cutoffs and refractory change for
  /// subsequent steps; filter states and reference levels are preserved.
  void apply_params(const PixelParams& p);

  const PixelParams& params() const { return params_; }
  const SceneScript& scene() const { return scene_; }

  /// Simulates up to (excluding) t_end_us and returns the events emitted in
  /// [now_us, t_end_us), time-ordered with (y, x) tie order. The returned
  /// buffer is reused by the next call.
  const EventStream& advance(std::uint64_t t_end_us);

  /// Same simulation, but bins events straight into row-major per-polarity
  /// count planes (sized width*height) instead of materializing the stream.
  /// Returns the number of events. Counts are accumulated, not cleared.
  std::uint64_t advance_binned(std::uint64_t t_end_us,
                               std::uint32_t* on_counts,
                               std::uint32_t* off_counts);

  std::uint64_t now_us() const;

  // State probes for tests.
  float lp_at(int x, int y) const;
  float ref_at(int x, int y) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  SceneScript scene_;
  PixelParams params_;
};

/// Convenience for tests and tools: fresh simulator, one advance.
EventStream simulate_events(const SceneScript& scene, const PixelParams& params,
                            std::uint64_t t_end_us, int threads = 0);

}  // namespace autobias
