#include "autobias/scene.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace autobias {

namespace {
[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw std::invalid_argument(field + ": " + msg);
}
}  // namespace

void SceneScript::validate() const {
  if (width < 1 || height < 1) fail("geometry", "width and height must be >= 1");
  if (width > 65535 || height > 65535) fail("geometry", "dimension too large");
  if (dt_us < 1) fail("geometry.dt_us", "must be >= 1");
  if (duration_s <= 0) fail("duration_s", "must be > 0");

  if (ambient.empty()) fail("ambient", "needs at least one step");
  if (ambient.front().t_s != 0.0) fail("ambient", "first step must start at t=0");
  double prev = -1.0;
  for (const AmbientStep& a : ambient) {
    if (a.t_s <= prev && &a != &ambient.front()) {
      fail("ambient", "steps must be strictly increasing in t_s");
    }
    prev = a.t_s;
    if (a.lux <= 0) fail("ambient.lux", "must be > 0");
  }

  for (std::size_t i = 0; i < flicker.size(); ++i) {
    const FlickerSource& f = flicker[i];
    std::ostringstream field;
    field << "flicker[" << i << "]";
    if (f.frequency_hz <= 0) fail(field.str() + ".frequency_hz", "must be > 0");
    if (f.depth < 0 || f.depth >= 1) {
      fail(field.str() + ".depth", "must lie in [0, 1)");
    }
    // dt must resolve the fastest flicker with >= 10 samples per cycle
    const double max_dt = 1e6 / (10.0 * f.frequency_hz);
    if (static_cast<double>(dt_us) > max_dt) {
      std::ostringstream msg;
      msg << "dt_us=" << dt_us << " too coarse for " << f.frequency_hz
          << " Hz flicker (needs <= " << max_dt << " us)";
      fail(field.str(), msg.str());
    }
    if (f.region) {
      const Rect& r = *f.region;
      if (r.w <= 0 || r.h <= 0 || r.x < 0 || r.y < 0 || r.x + r.w > width ||
          r.y + r.h > height) {
        fail(field.str() + ".region", "must lie inside the frame");
      }
    }
  }

  if (target) {
    const TargetScript& t = *target;
    if (t.semi_axis_x <= 0 || t.semi_axis_y <= 0) {
      fail("target.semi_axes", "must be > 0");
    }
    if (t.contrast <= -1.0) fail("target.contrast", "must be > -1");
    if (t.sway_period_s <= 0) fail("target.sway_period_s", "must be > 0");
    if (t.jitter_px < 0 || t.jitter_speed_px_s < 0 || t.breathe_px < 0 ||
        t.breathe_hz < 0) {
      fail("target.jitter", "must be >= 0");
    }
    const double cx = t.center_x < 0 ? width / 2.0 : t.center_x;
    const double cy = t.center_y < 0 ? height / 2.0 : t.center_y;
    const double reach_x = t.semi_axis_x + std::abs(t.sway_amplitude_px) +
                           t.jitter_px + t.breathe_px;
    const double reach_y = t.semi_axis_y + t.jitter_px + t.breathe_px;
    if (cx - reach_x < 0 || cx + reach_x > width || cy - reach_y < 0 ||
        cy + reach_y > height) {
      fail("target", "trajectory must keep the ellipse inside the frame");
    }
  }

  if (noise.rate_hz < 0) fail("noise.rate_hz", "must be >= 0");
  if (noise.reference_lux <= 0) fail("noise.reference_lux", "must be > 0");
  if (noise.max_scale < 1) fail("noise.max_scale", "must be >= 1");
}

double SceneScript::ambient_at(double t_s) const {
  double lux = ambient.front().lux;
  for (const AmbientStep& a : ambient) {
    if (a.t_s <= t_s) lux = a.lux;
  }
  return lux;
}

}  // namespace autobias
