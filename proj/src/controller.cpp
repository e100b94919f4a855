#include "autobias/controller.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "autobias/efficacy.hpp"
#include "autobias/external_detector.hpp"
#include "autobias/frames.hpp"
#include "autobias/sensor.hpp"

namespace autobias {

const char* to_string(LoopPhase p) {
  switch (p) {
    case LoopPhase::Monitoring: return "monitoring";
    case LoopPhase::Optimizing: return "optimizing";
    case LoopPhase::Settled: return "settled";
  }
  return "?";
}

namespace {

struct BudgetExhausted {};

class Loop {
 public:
  Loop(const SceneScript& scene, const DetectorConfig& det_cfg,
       const ControllerConfig& cfg, const BiasBounds& bounds,
       const BiasMapping& mapping, const BiasVector& initial)
      : scene_(scene),
        det_cfg_(det_cfg),
        cfg_(cfg),
        bounds_(bounds),
        mapping_(mapping),
        duration_s_(static_cast<int>(scene.duration_s + 0.5)),
        applied_(initial) {
    scene_.validate();
    bounds_.validate();
    bounds_.require_within(initial);
    if (cfg_.warmup_s < 0 || cfg_.fps <= 0 || cfg_.eval_window_s <= 0 ||
        cfg_.monitor_window_s != 1 || cfg_.nm_step_schedule.empty()) {
      throw std::invalid_argument("controller config invalid");
    }
    if (!cfg_.objective_override) {
      sim_ = std::make_unique<SensorSim>(
          scene_, map_bias_to_params(applied_, bounds_, mapping_),
          cfg_.sim_threads);
      if (det_cfg_.kind == DetectorKind::External) {
        if (det_cfg_.external_cmd.empty()) {
          throw std::invalid_argument(
              "detector.kind=external requires a command");
        }
        ext_ = std::make_unique<ExternalDetector>(det_cfg_.external_cmd,
                                                  det_cfg_.timeout_ms);
      }
    }
  }

  RunLog run() {
    while (t_ < duration_s_) {
      if (phase_ == LoopPhase::Optimizing) {
        optimize();
      } else {
        const SecondRecord& rec = simulate_second(phase_);
        maybe_trigger(rec);
      }
    }
    finalize_summary();
    if (ext_) log_.summary.detector_timeouts = ext_->timeouts();
    return std::move(log_);
  }

 private:
  void apply(const BiasVector& b) {
    applied_ = b;
    if (sim_) sim_->apply_params(map_bias_to_params(b, bounds_, mapping_));
  }

  // Simulates one second with the currently applied biases, appends the
  // record, returns it.
  const SecondRecord& simulate_second(LoopPhase phase) {
    SecondRecord rec;
    rec.t_s = t_;
    rec.phase = phase;
    rec.biases = applied_;

    if (cfg_.objective_override) {
      const double objective =
          std::clamp(cfg_.objective_override(applied_), 0.0, 1.0);
      rec.metric = 1.0 - objective;
      rec.mean_conf_obj = rec.metric;
      rec.mean_conf_face = rec.metric;
      rec.events = 0;
    } else {
      detections_.clear();
      std::uint64_t events = 0;
      const std::size_t n_px =
          static_cast<std::size_t>(scene_.width) * scene_.height;
      for (int f = 0; f < cfg_.fps; ++f) {
        const std::uint64_t index =
            static_cast<std::uint64_t>(t_) * cfg_.fps + f;
        Frame frame;
        frame.index = static_cast<std::uint32_t>(index);
        frame.t_begin_us = index * 1000000ull / cfg_.fps;
        frame.t_end_us = ((index + 1) * 1000000ull + cfg_.fps - 1) / cfg_.fps;
        frame.width = static_cast<std::uint16_t>(scene_.width);
        frame.height = static_cast<std::uint16_t>(scene_.height);
        frame.on_counts.assign(n_px, 0);
        frame.off_counts.assign(n_px, 0);
        events += sim_->advance_binned(frame.t_end_us, frame.on_counts.data(),
                                       frame.off_counts.data());
        detections_.push_back(run_detector(frame));
      }
      const EfficacySample s = efficacy_metric(
          detections_, static_cast<std::uint32_t>(t_), 1.0);
      rec.metric = s.metric;
      rec.mean_conf_obj = s.mean_conf_obj;
      rec.mean_conf_face = s.mean_conf_face;
      rec.events = events;
    }
    ++t_;
    log_.records.push_back(rec);
    return log_.records.back();
  }

  Detection run_detector(const Frame& frame) {
    switch (det_cfg_.kind) {
      case DetectorKind::Proxy: return detect(frame, det_cfg_);
      case DetectorKind::Fixed: return detect_fixed(frame, det_cfg_);
      case DetectorKind::External: return ext_->detect(frame, det_cfg_);
    }
    throw std::logic_error("unknown detector kind");
  }

  void maybe_trigger(const SecondRecord& rec) {
    if (rec.metric >= cfg_.trigger_threshold) return;
    if (phase_ == LoopPhase::Monitoring && t_ < cfg_.warmup_s) return;
    // Settled re-triggers have no warmup.
    phase_ = LoopPhase::Optimizing;
    ++log_.summary.triggers;
    const std::size_t stage = std::min<std::size_t>(
        log_.summary.triggers - 1, cfg_.nm_step_schedule.size() - 1);
    simplex_ = std::make_unique<NmSimplex>(
        make_bias_simplex(applied_, bounds_, cfg_.nm_step_schedule[stage],
                          cfg_.nm_coeffs, cfg_.nm_re_eval_every));
  }

  // One optimizer evaluation: apply the candidate, run the evaluation
  // window, return the mean target value. Burns eval_window_s seconds.
  double oracle(std::span<const double> point) {
    if (t_ + cfg_.eval_window_s > duration_s_) throw BudgetExhausted{};
    apply(round_to_bias(point, bounds_));
    double sum = 0.0;
    for (int i = 0; i < cfg_.eval_window_s; ++i) {
      const SecondRecord& rec = simulate_second(LoopPhase::Optimizing);
      sum += 1.0 - rec.metric;
    }
    ++log_.summary.evaluations;
    return sum / cfg_.eval_window_s;
  }

  void optimize() {
    Objective f = [this](std::span<const double> x) { return oracle(x); };
    try {
      if (!simplex_->initial_evaluated()) {
        simplex_->evaluate_initial(f);
      }
      while (simplex_->status() == NmStatus::Running) {
        simplex_->nm_step(f);
      }
      // Converged: write back the best setting and settle.
      apply(best_bias(*simplex_, bounds_));
      phase_ = LoopPhase::Settled;
      ++log_.summary.convergences;
    } catch (const BudgetExhausted&) {
      // Out of simulated time mid-optimization: keep the last applied
      // candidate; remaining seconds are logged below in Optimizing phase.
      while (t_ < duration_s_) simulate_second(LoopPhase::Optimizing);
    }
  }

  void finalize_summary() {
    RunSummary& s = log_.summary;
    s.final_biases = applied_;
    auto window_means = [this](int begin_s, int end_s) {
      WindowMeans m;
      int n = 0;
      for (const SecondRecord& r : log_.records) {
        if (r.t_s >= begin_s && r.t_s < end_s) {
          m.metric += r.metric;
          m.conf_obj += r.mean_conf_obj;
          m.conf_face += r.mean_conf_face;
          ++n;
        }
      }
      if (n > 0) {
        m.metric /= n;
        m.conf_obj /= n;
        m.conf_face /= n;
      }
      return m;
    };
    const int warmup_end = std::min(cfg_.warmup_s, duration_s_);
    s.warmup_means = window_means(0, warmup_end > 0 ? warmup_end : duration_s_);
    const int tail_begin = std::max(0, duration_s_ - cfg_.final_window_s);
    s.final_means = window_means(tail_begin, duration_s_);
  }

  SceneScript scene_;
  DetectorConfig det_cfg_;
  ControllerConfig cfg_;
  BiasBounds bounds_;
  BiasMapping mapping_;
  int duration_s_;

  BiasVector applied_;
  LoopPhase phase_ = LoopPhase::Monitoring;
  int t_ = 0;

  std::unique_ptr<SensorSim> sim_;
  std::unique_ptr<ExternalDetector> ext_;
  std::unique_ptr<NmSimplex> simplex_;
  std::vector<Detection> detections_;
  RunLog log_;
};

}  // namespace

RunLog run_loop(const SceneScript& scene, const DetectorConfig& detector,
                const ControllerConfig& cfg, const BiasBounds& bounds,
                const BiasMapping& mapping, const BiasVector& initial_biases) {
  Loop loop(scene, detector, cfg, bounds, mapping, initial_biases);
  return loop.run();
}

}  // namespace autobias
