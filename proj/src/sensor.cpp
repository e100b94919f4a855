#include "autobias/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <thread>

namespace autobias {

namespace {

constexpr double kLogEpsilonLux = 1e-3;
constexpr std::int64_t kNeverFired = std::numeric_limits<std::int32_t>::min();

inline std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline double u01(std::uint64_t& s) {
  // (0, 1]: never zero so log() is safe
  return (static_cast<double>(splitmix64(s) >> 11) + 1.0) * 0x1.0p-53;
}

struct NoiseHit {
  std::uint32_t step;   // local step index within the chunk
  std::uint32_t pixel;  // y * width + x
  std::uint8_t polarity;
};

}  // namespace

struct SensorSim::Impl {
  int width = 0;
  int height = 0;
  std::uint32_t dt_us = 0;
  std::uint64_t seed = 0;
  int threads = 1;

  // Per-pixel state
  std::vector<float> lp;
  std::vector<float> hp;
  std::vector<float> ref;
  std::vector<std::int64_t> last_step;

  // Filter constants for the active params
  float pole_lp = 0.0f;       // exp(-2*pi*f_lp*dt)
  float pole_hp = 0.0f;       // exp(-2*pi*f_hp*dt)
  bool hpf_enabled = false;
  float theta_on = 0.0f;
  float theta_off = 0.0f;
  std::int64_t refr_steps = 0;

  std::int64_t next_step = 1;  // step 0 is the initial condition

  // Scene dynamic state: bounded drifts with damped velocity random walks
  double jitter_x = 0.0;
  double jitter_y = 0.0;
  double jitter_vx = 0.0;  // px per step
  double jitter_vy = 0.0;
  double breathe_r = 0.0;  // radial tremor offset, px

  // Reused per-chunk buffers
  std::vector<float> v_bg;          // per step
  std::vector<float> v_face;        // per step
  std::vector<std::int16_t> span_lo;  // per (step, row)
  std::vector<std::int16_t> span_hi;
  std::vector<NoiseHit> noise_hits;
  std::vector<std::uint32_t> noise_step_begin;  // per step, index into hits
  std::vector<EventStream> band_events;
  std::vector<std::vector<std::uint32_t>> band_step_end;
  EventStream out;

  bool slow_path = false;  // region-limited flicker present

  const SceneScript* scene = nullptr;

  void set_params(const PixelParams& p) {
    const double dt_s = dt_us * 1e-6;
    pole_lp = static_cast<float>(std::exp(-2.0 * M_PI * p.f_lp_hz * dt_s));
    hpf_enabled = p.f_hp_hz > 0.0;
    pole_hp = hpf_enabled
                  ? static_cast<float>(std::exp(-2.0 * M_PI * p.f_hp_hz * dt_s))
                  : 0.0f;
    theta_on = static_cast<float>(p.theta_on);
    theta_off = static_cast<float>(p.theta_off);
    refr_steps = static_cast<std::int64_t>(
        std::ceil(p.t_refr_us / static_cast<double>(dt_us) - 1e-12));
    if (refr_steps < 0) refr_steps = 0;
  }

  double flicker_log(double t_s) const {
    double g = 0.0;
    for (const FlickerSource& f : scene->flicker) {
      if (f.region || f.depth <= 0.0) continue;
      const double s = std::atanh(f.depth);
      const double phase = f.frequency_hz * t_s;
      const double frac = phase - std::floor(phase);
      if (f.waveform == Waveform::Square) {
        g += frac < 0.5 ? s : -s;
      } else {
        g += s * std::sin(2.0 * M_PI * frac);
      }
    }
    return g;
  }

  double region_flicker_log(double t_s, int x, int y) const {
    double g = 0.0;
    for (const FlickerSource& f : scene->flicker) {
      if (!f.region || f.depth <= 0.0) continue;
      const Rect& r = *f.region;
      if (x < r.x || x >= r.x + r.w || y < r.y || y >= r.y + r.h) continue;
      const double s = std::atanh(f.depth);
      const double phase = f.frequency_hz * t_s;
      const double frac = phase - std::floor(phase);
      g += f.waveform == Waveform::Square ? (frac < 0.5 ? s : -s)
                                          : s * std::sin(2.0 * M_PI * frac);
    }
    return g;
  }

  // Target ellipse centre at a given time with the current jitter applied.
  void target_center(double t_s, double& cx, double& cy) const {
    const TargetScript& tg = *scene->target;
    cx = (tg.center_x < 0 ? width / 2.0 : tg.center_x) + jitter_x +
         tg.sway_amplitude_px *
             std::sin(2.0 * M_PI * t_s / tg.sway_period_s);
    cy = (tg.center_y < 0 ? height / 2.0 : tg.center_y) + jitter_y;
  }

  // Row span [lo, hi) of pixels inside the ellipse, empty if lo >= hi.
  void ellipse_span(double cx, double cy, int y, int& lo, int& hi) const {
    const TargetScript& tg = *scene->target;
    const double scale =
        1.0 + 2.0 * breathe_r / (tg.semi_axis_x + tg.semi_axis_y);
    const double ax = tg.semi_axis_x * scale;
    const double ay = tg.semi_axis_y * scale;
    const double dy = (y + 0.5 - cy) / ay;
    const double d2 = 1.0 - dy * dy;
    if (d2 <= 0.0) {
      lo = hi = 0;
      return;
    }
    const double w = ax * std::sqrt(d2);
    lo = static_cast<int>(std::ceil(cx - w - 0.5));
    hi = static_cast<int>(std::floor(cx + w - 0.5)) + 1;
    lo = std::max(lo, 0);
    hi = std::min(hi, width);
    if (lo > hi) lo = hi;
  }

  double log_illum(double ambient_lux, double reflectance,
                   double flick_log) const {
    return std::log(ambient_lux * reflectance * std::exp(flick_log) +
                    kLogEpsilonLux);
  }

  void init_state() {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    lp.assign(n, 0.0f);
    hp.assign(n, 0.0f);
    ref.assign(n, 0.0f);
    last_step.assign(n, kNeverFired);

    const double t0 = 0.0;
    const double amb = scene->ambient_at(t0);
    const double gl = flicker_log(t0);
    const double refl_bg = scene->background_reflectance;
    double cx = -1e9, cy = -1e9;
    if (scene->target) target_center(t0, cx, cy);
    for (int y = 0; y < height; ++y) {
      int flo = 0, fhi = 0;
      if (scene->target) ellipse_span(cx, cy, y, flo, fhi);
      for (int x = 0; x < width; ++x) {
        const bool in_face = x >= flo && x < fhi;
        const double refl =
            refl_bg * (in_face ? 1.0 + scene->target->contrast : 1.0);
        double g = gl;
        if (slow_path) g += region_flicker_log(t0, x, y);
        const float v = static_cast<float>(log_illum(amb, refl, g));
        const std::size_t p = static_cast<std::size_t>(y) * width + x;
        lp[p] = v;
        ref[p] = hpf_enabled ? 0.0f : v;
      }
    }
  }

  // Precomputes per-step scene tables and the noise hit list for local
  // steps [0, n_steps) corresponding to absolute steps starting at step0.
  void precompute_chunk(std::int64_t step0, int n_steps) {
    v_bg.resize(n_steps);
    v_face.resize(n_steps);
    span_lo.assign(static_cast<std::size_t>(n_steps) * height, 0);
    span_hi.assign(static_cast<std::size_t>(n_steps) * height, 0);
    noise_hits.clear();
    noise_step_begin.assign(n_steps + 1, 0);

    const double dt_s = dt_us * 1e-6;
    const double refl_bg = scene->background_reflectance;
    const double contrast = scene->target ? scene->target->contrast : 0.0;
    const std::size_t n_pixels = static_cast<std::size_t>(width) * height;

    for (int i = 0; i < n_steps; ++i) {
      const std::int64_t k = step0 + i;
      const double t_s = static_cast<double>(k) * dt_s;
      const double amb = scene->ambient_at(t_s);
      const double gl = flicker_log(t_s);
      v_bg[i] = static_cast<float>(log_illum(amb, refl_bg, gl));
      v_face[i] = static_cast<float>(
          log_illum(amb, refl_bg * (1.0 + contrast), gl));

      // Per-step random stream: jitter first, then the noise walk.
      std::uint64_t rng = seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull;
      rng ^= static_cast<std::uint64_t>(k) * 0x2545F4914F6CDD1Dull;

      if (scene->target) {
        const TargetScript& tg = *scene->target;
        // Velocities persist ~0.15 s so the micro-motion keeps moving
        // through the sway turning points instead of dithering in place.
        const double rho = std::exp(-dt_s / 0.15);
        const double unit = std::sqrt(1.0 - rho * rho) * 1.732;
        auto walk = [&](double& pos, double& vel, double speed_px_s,
                        double bound) {
          if (speed_px_s <= 0.0 || bound <= 0.0) return;
          vel = vel * rho + (2.0 * u01(rng) - 1.0) * speed_px_s * dt_s * unit;
          pos += vel;
          if (pos > bound) {
            pos = 2 * bound - pos;
            vel = -vel;
          }
          if (pos < -bound) {
            pos = -2 * bound - pos;
            vel = -vel;
          }
        };
        walk(jitter_x, jitter_vx, tg.jitter_speed_px_s, tg.jitter_px);
        walk(jitter_y, jitter_vy, tg.jitter_speed_px_s, tg.jitter_px);
        breathe_r = tg.breathe_hz > 0.0
                        ? tg.breathe_px *
                              std::sin(2.0 * M_PI * tg.breathe_hz * t_s)
                        : 0.0;
        double cx, cy;
        target_center(t_s, cx, cy);
        for (int y = 0; y < height; ++y) {
          int lo, hi;
          ellipse_span(cx, cy, y, lo, hi);
          span_lo[static_cast<std::size_t>(i) * height + y] =
              static_cast<std::int16_t>(lo);
          span_hi[static_cast<std::size_t>(i) * height + y] =
              static_cast<std::int16_t>(hi);
        }
      }

      noise_step_begin[i] = static_cast<std::uint32_t>(noise_hits.size());
      if (scene->noise.rate_hz > 0.0) {
        const double scale =
            std::clamp(scene->noise.reference_lux / amb, 1.0,
                       scene->noise.max_scale);
        double p = scene->noise.rate_hz * scale * dt_s;
        p = std::min(p, 0.999999);
        const double log1mp = std::log1p(-p);
        std::int64_t pix = -1;
        while (true) {
          const double u = u01(rng);
          pix += static_cast<std::int64_t>(std::floor(std::log(u) / log1mp)) + 1;
          if (pix >= static_cast<std::int64_t>(n_pixels)) break;
          const std::uint8_t pol =
              static_cast<std::uint8_t>(splitmix64(rng) & 1u);
          noise_hits.push_back({static_cast<std::uint32_t>(i),
                                static_cast<std::uint32_t>(pix), pol});
        }
      }
    }
    noise_step_begin[n_steps] = static_cast<std::uint32_t>(noise_hits.size());
  }

  struct StreamSink {
    EventStream& ev;
    std::vector<std::uint32_t>& step_end;
    void emit(std::uint64_t t, int x, int y, std::uint8_t pol) {
      ev.push_back({t, static_cast<std::uint16_t>(x),
                    static_cast<std::uint16_t>(y), pol});
    }
    void end_step(int i) { step_end[i] = static_cast<std::uint32_t>(ev.size()); }
  };

  struct BinSink {
    std::uint32_t* on;
    std::uint32_t* off;
    std::uint64_t count = 0;
    int width = 0;
    void emit(std::uint64_t, int x, int y, std::uint8_t pol) {
      ++(pol ? on : off)[static_cast<std::size_t>(y) * width + x];
      ++count;
    }
    void end_step(int) {}
  };

  // Simulates local steps [0, n_steps) for rows [y0, y1); events go to the
  // sink in (t, y, x) order within the band.
  template <typename Sink>
  void run_band(std::int64_t step0, int n_steps, int y0, int y1, Sink& sink) {
    const float a = pole_lp;
    const float b = 1.0f - pole_lp;
    const float th_on = theta_on;
    const float th_off = theta_off;
    const bool use_hpf = hpf_enabled;
    const float bh = pole_hp;

    for (int i = 0; i < n_steps; ++i) {
      const std::int64_t k = step0 + i;
      const std::uint64_t t_ev = static_cast<std::uint64_t>(k) * dt_us;
      const float vb = v_bg[i];
      const float vf = v_face[i];

      const NoiseHit* nh = noise_hits.data() + noise_step_begin[i];
      const NoiseHit* nh_end = noise_hits.data() + noise_step_begin[i + 1];
      // Skip hits above this band's rows.
      const std::uint32_t band_first = static_cast<std::uint32_t>(y0) * width;
      const std::uint32_t band_last = static_cast<std::uint32_t>(y1) * width;
      while (nh != nh_end && nh->pixel < band_first) ++nh;

      for (int y = y0; y < y1; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * width;
        int flo = 0, fhi = 0;
        if (scene->target) {
          flo = span_lo[static_cast<std::size_t>(i) * height + y];
          fhi = span_hi[static_cast<std::size_t>(i) * height + y];
        }
        std::uint32_t next_noise =
            (nh != nh_end && nh->pixel < band_last) ? nh->pixel
                                                    : 0xFFFFFFFFu;

        auto sweep = [&](int x_begin, int x_end, float v) {
          for (int x = x_begin; x < x_end; ++x) {
            const std::size_t p = row + x;
            const float lp_old = lp[p];
            const float lp_new = a * lp_old + b * v;
            lp[p] = lp_new;
            float s;
            if (use_hpf) {
              const float h = bh * (hp[p] + lp_new - lp_old);
              hp[p] = h;
              s = h;
            } else {
              s = lp_new;
            }
            const float d = s - ref[p];
            if (d > th_on || d < -th_off) {
              if (k - last_step[p] >= refr_steps) {
                sink.emit(t_ev, x, y,
                          static_cast<std::uint8_t>(d > th_on ? 1 : 0));
                ref[p] = s;
                last_step[p] = k;
              }
            }
            if (p == next_noise) {
              if (last_step[p] != k && k - last_step[p] >= refr_steps) {
                sink.emit(t_ev, x, y, nh->polarity);
                ref[p] = s;  // any event resets the reference level
                last_step[p] = k;
              }
              ++nh;
              next_noise = (nh != nh_end && nh->pixel < band_last)
                               ? nh->pixel
                               : 0xFFFFFFFFu;
            }
          }
        };

        if (fhi > flo) {
          sweep(0, flo, vb);
          sweep(flo, fhi, vf);
          sweep(fhi, width, vb);
        } else {
          sweep(0, width, vb);
        }
      }
      sink.end_step(i);
    }
  }

  // Slow but general path used when region-limited flicker is present:
  // per-pixel log-illuminance, single thread.
  void run_band_slow(std::int64_t step0, int n_steps, EventStream& ev,
                     std::vector<std::uint32_t>& step_end) {
    ev.clear();
    step_end.assign(n_steps, 0);
    const float a = pole_lp;
    const float b = 1.0f - pole_lp;
    const double dt_s = dt_us * 1e-6;
    for (int i = 0; i < n_steps; ++i) {
      const std::int64_t k = step0 + i;
      const double t_s = static_cast<double>(k) * dt_s;
      const std::uint64_t t_ev = static_cast<std::uint64_t>(k) * dt_us;
      const double amb = scene->ambient_at(t_s);
      const double gl = flicker_log(t_s);
      const NoiseHit* nh = noise_hits.data() + noise_step_begin[i];
      const NoiseHit* nh_end = noise_hits.data() + noise_step_begin[i + 1];
      for (int y = 0; y < height; ++y) {
        int flo = 0, fhi = 0;
        if (scene->target) {
          flo = span_lo[static_cast<std::size_t>(i) * height + y];
          fhi = span_hi[static_cast<std::size_t>(i) * height + y];
        }
        for (int x = 0; x < width; ++x) {
          const std::size_t p = static_cast<std::size_t>(y) * width + x;
          const bool in_face = x >= flo && x < fhi;
          const double refl = scene->background_reflectance *
                              (in_face ? 1.0 + scene->target->contrast : 1.0);
          const float v = static_cast<float>(
              log_illum(amb, refl, gl + region_flicker_log(t_s, x, y)));
          const float lp_old = lp[p];
          const float lp_new = a * lp_old + b * v;
          lp[p] = lp_new;
          float s;
          if (hpf_enabled) {
            const float h = pole_hp * (hp[p] + lp_new - lp_old);
            hp[p] = h;
            s = h;
          } else {
            s = lp_new;
          }
          const float d = s - ref[p];
          bool fired = false;
          if ((d > theta_on || d < -theta_off) &&
              k - last_step[p] >= refr_steps) {
            ev.push_back({t_ev, static_cast<std::uint16_t>(x),
                          static_cast<std::uint16_t>(y),
                          static_cast<std::uint8_t>(d > theta_on ? 1 : 0)});
            ref[p] = s;
            last_step[p] = k;
            fired = true;
          }
          if (!fired) {
            for (const NoiseHit* h = nh; h != nh_end && h->pixel <= p; ++h) {
              if (h->pixel == p && k - last_step[p] >= refr_steps) {
                ev.push_back({t_ev, static_cast<std::uint16_t>(x),
                              static_cast<std::uint16_t>(y), h->polarity});
                ref[p] = s;
                last_step[p] = k;
                break;
              }
            }
          }
        }
      }
      step_end[i] = static_cast<std::uint32_t>(ev.size());
    }
  }
};

SensorSim::SensorSim(SceneScript scene, PixelParams params, int threads)
    : impl_(std::make_unique<Impl>()), scene_(std::move(scene)),
      params_(params) {
  scene_.validate();
  impl_->scene = &scene_;
  impl_->width = scene_.width;
  impl_->height = scene_.height;
  impl_->dt_us = scene_.dt_us;
  impl_->seed = scene_.seed;
  for (const FlickerSource& f : scene_.flicker) {
    if (f.region) impl_->slow_path = true;
  }
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  impl_->threads = threads > 0 ? threads : std::min(hw, 4);
  impl_->threads = std::max(1, std::min(impl_->threads, scene_.height));
  impl_->set_params(params_);
  impl_->init_state();
}

SensorSim::~SensorSim() = default;

void SensorSim::apply_params(const PixelParams& p) {
  const bool was_hpf = impl_->hpf_enabled;
  const bool now_hpf = p.f_hp_hz > 0.0;
  if (was_hpf != now_hpf) {
    // The comparison signal changes space (high-pass output vs low-pass
    // level). Keep each pixel's pending headroom s - ref intact across the
    // swap instead of leaving the reference in the old space.
    const std::size_t n = impl_->lp.size();
    for (std::size_t i = 0; i < n; ++i) {
      const float s_old = was_hpf ? impl_->hp[i] : impl_->lp[i];
      const float s_new = now_hpf ? impl_->hp[i] : impl_->lp[i];
      impl_->ref[i] = s_new - (s_old - impl_->ref[i]);
    }
  }
  params_ = p;
  impl_->set_params(p);
}

std::uint64_t SensorSim::now_us() const {
  return static_cast<std::uint64_t>(impl_->next_step) * impl_->dt_us;
}

float SensorSim::lp_at(int x, int y) const {
  return impl_->lp[static_cast<std::size_t>(y) * impl_->width + x];
}

float SensorSim::ref_at(int x, int y) const {
  return impl_->ref[static_cast<std::size_t>(y) * impl_->width + x];
}

namespace {
constexpr int kMaxChunkSteps = 4096;
}

const EventStream& SensorSim::advance(std::uint64_t t_end_us) {
  Impl& im = *impl_;
  im.out.clear();

  while (static_cast<std::uint64_t>(im.next_step) * im.dt_us < t_end_us) {
    const std::int64_t last_wanted =
        static_cast<std::int64_t>((t_end_us - 1) / im.dt_us);
    const int n_steps = static_cast<int>(
        std::min<std::int64_t>(last_wanted - im.next_step + 1, kMaxChunkSteps));
    const std::int64_t step0 = im.next_step;

    im.precompute_chunk(step0, n_steps);

    if (im.slow_path) {
      if (im.band_events.empty()) {
        im.band_events.resize(1);
        im.band_step_end.resize(1);
      }
      im.run_band_slow(step0, n_steps, im.band_events[0], im.band_step_end[0]);
      im.out.insert(im.out.end(), im.band_events[0].begin(),
                    im.band_events[0].end());
    } else {
      const int nb = im.threads;
      im.band_events.resize(nb);
      im.band_step_end.resize(nb);
      if (nb == 1) {
        im.band_events[0].clear();
        im.band_step_end[0].assign(n_steps, 0);
        Impl::StreamSink sink{im.band_events[0], im.band_step_end[0]};
        im.run_band(step0, n_steps, 0, im.height, sink);
      } else {
        std::vector<std::thread> pool;
        pool.reserve(nb);
        const int rows_per = (im.height + nb - 1) / nb;
        for (int b = 0; b < nb; ++b) {
          const int y0 = b * rows_per;
          const int y1 = std::min(im.height, y0 + rows_per);
          pool.emplace_back([&im, step0, n_steps, y0, y1, b] {
            im.band_events[b].clear();
            im.band_step_end[b].assign(n_steps, 0);
            Impl::StreamSink sink{im.band_events[b], im.band_step_end[b]};
            im.run_band(step0, n_steps, y0, y1, sink);
          });
        }
        for (std::thread& t : pool) t.join();
      }
      // Merge band streams per step in band (= row) order.
      std::size_t total = 0;
      for (int b = 0; b < nb; ++b) total += im.band_events[b].size();
      im.out.reserve(im.out.size() + total);
      std::vector<std::uint32_t> cursor(nb, 0);
      for (int i = 0; i < n_steps; ++i) {
        for (int b = 0; b < nb; ++b) {
          const std::uint32_t end = im.band_step_end[b][i];
          const EventStream& src = im.band_events[b];
          for (std::uint32_t j = cursor[b]; j < end; ++j) {
            im.out.push_back(src[j]);
          }
          cursor[b] = end;
        }
      }
    }
    im.next_step = step0 + n_steps;
  }
  return im.out;
}

std::uint64_t SensorSim::advance_binned(std::uint64_t t_end_us,
                                        std::uint32_t* on_counts,
                                        std::uint32_t* off_counts) {
  Impl& im = *impl_;
  if (im.slow_path) {
    // Correct but unoptimized: materialize then bin.
    const EventStream& ev = advance(t_end_us);
    for (const Event& e : ev) {
      ++(e.polarity ? on_counts
                    : off_counts)[static_cast<std::size_t>(e.y) * im.width + e.x];
    }
    return ev.size();
  }

  std::uint64_t count = 0;
  while (static_cast<std::uint64_t>(im.next_step) * im.dt_us < t_end_us) {
    const std::int64_t last_wanted =
        static_cast<std::int64_t>((t_end_us - 1) / im.dt_us);
    const int n_steps = static_cast<int>(
        std::min<std::int64_t>(last_wanted - im.next_step + 1, kMaxChunkSteps));
    const std::int64_t step0 = im.next_step;

    im.precompute_chunk(step0, n_steps);

    const int nb = im.threads;
    if (nb == 1) {
      Impl::BinSink sink{on_counts, off_counts, 0, im.width};
      im.run_band(step0, n_steps, 0, im.height, sink);
      count += sink.count;
    } else {
      std::vector<std::thread> pool;
      pool.reserve(nb);
      std::vector<std::uint64_t> counts(nb, 0);
      const int rows_per = (im.height + nb - 1) / nb;
      for (int b = 0; b < nb; ++b) {
        const int y0 = b * rows_per;
        const int y1 = std::min(im.height, y0 + rows_per);
        pool.emplace_back([&im, step0, n_steps, y0, y1, b, on_counts,
                           off_counts, &counts] {
          Impl::BinSink sink{on_counts, off_counts, 0, im.width};
          im.run_band(step0, n_steps, y0, y1, sink);
          counts[b] = sink.count;
        });
      }
      for (std::thread& t : pool) t.join();
      for (std::uint64_t c : counts) count += c;
    }
    im.next_step = step0 + n_steps;
  }
  return count;
}

EventStream simulate_events(const SceneScript& scene, const PixelParams& params,
                            std::uint64_t t_end_us, int threads) {
  SensorSim sim(scene, params, threads);
  return sim.advance(t_end_us);
}

}  // namespace autobias
