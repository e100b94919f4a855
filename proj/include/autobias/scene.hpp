#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace autobias {

enum class Waveform { Sine, Square };

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
};

/// Periodic illumination modulation. Depth is the Michelson contrast of the
/// modulated light, so the multiplicative factor is exp(s * w(t)) with
/// s = atanh(depth): a square wave swings between (1+m)/(1-m) extremes and a
/// sine sweeps the same range with a sinusoidal log-illuminance profile.
struct FlickerSource {
  double frequency_hz = 100.0;
  double depth = 0.8;  // in [0, 1)
  Waveform waveform = Waveform::Square;
  std::optional<Rect> region;  // absent = global
};

struct AmbientStep {
  double t_s = 0.0;
  double lux = 150.0;
};

/// Face-proxy ellipse. The centre sways horizontally with a sinusoid and
/// carries per-step micro-motion: a bounded translational drift (damped
/// velocity random walk) plus a radial tremor sine (depth bob at a
/// physiological ~9 Hz). Translation alone leaves the boundary tangent
/// points silent; the tremor keeps the full ring of boundary pixels
/// toggling every accumulation window the way a live head does.
struct TargetScript {
  double semi_axis_x = 14.0;
  double semi_axis_y = 18.0;
  double contrast = 12.5;  // reflectance ratio vs background, minus one
  double center_x = -1.0;  // < 0 = frame centre
  double center_y = -1.0;
  double sway_amplitude_px = 10.0;
  double sway_period_s = 4.0;
  double jitter_px = 2.5;           // translational drift bound
  double jitter_speed_px_s = 22.0;  // RMS drift speed, 0 disables
  double breathe_px = 0.65;          // radial tremor amplitude
  double breathe_hz = 9.0;          // tremor frequency, 0 disables
};

/// Background-activity noise: per pixel per step Bernoulli(rate * dt), with
/// the rate scaled by (reference_lux / ambient) clamped to [1, max_scale]
/// so darkness gets noisier.
struct NoiseModel {
  double rate_hz = 0.0;  // events/pixel/s at reference_lux
  double reference_lux = 200.0;
  double max_scale = 20.0;
};

struct SceneScript {
  int width = 160;
  int height = 120;
  std::uint32_t dt_us = 200;
  double duration_s = 10.0;
  std::uint64_t seed = 1;
  double background_reflectance = 0.005;
  std::vector<AmbientStep> ambient{{0.0, 150.0}};
  std::vector<FlickerSource> flicker;
  std::optional<TargetScript> target;
  NoiseModel noise;

  /// Throws std::invalid_argument with a field path on the first violated
  /// invariant (dt resolution, depth range, target inside frame, ...).
  void validate() const;

  double ambient_at(double t_s) const;
  std::uint64_t duration_us() const {
    return static_cast<std::uint64_t>(duration_s * 1e6 + 0.5);
  }
};

}  // namespace autobias
