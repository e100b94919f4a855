#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "autobias/bias.hpp"
#include "autobias/detector.hpp"
#include "autobias/scene.hpp"
#include "autobias/simplex.hpp"

namespace autobias {

enum class LoopPhase { Monitoring, Optimizing, Settled };

const char* to_string(LoopPhase p);

/// One entry per simulated second.
struct SecondRecord {
  int t_s = 0;
  LoopPhase phase = LoopPhase::Monitoring;
  BiasVector biases;  // applied during this second
  double metric = 0.0;
  double mean_conf_obj = 0.0;
  double mean_conf_face = 0.0;
  std::uint64_t events = 0;
};

struct WindowMeans {
  double metric = 0.0;
  double conf_obj = 0.0;
  double conf_face = 0.0;
};

struct RunSummary {
  BiasVector final_biases;
  int triggers = 0;
  int evaluations = 0;
  int convergences = 0;
  int detector_timeouts = 0;
  WindowMeans warmup_means;
  WindowMeans final_means;
};

struct RunLog {
  std::vector<SecondRecord> records;
  RunSummary summary;
};

struct ControllerConfig {
  int warmup_s = 20;
  double trigger_threshold = 0.5;
  int eval_window_s = 2;     // seconds consumed per optimizer evaluation
  int monitor_window_s = 1;  // efficacy window
  int fps = 8;
  int final_window_s = 30;   // tail window reported in the summary
  // Per-trigger initial simplex offsets. The dark flickering failure mode
  // has a staged remedy: a large diff_off rescue first (everything else is
  // a flat plateau to the optimizer), then the contrast sensitivity, then
  // the photoreceptor bandwidth, then symmetric refinement around the
  // operating point. Each trigger k uses schedule[k-1]; later triggers
  // reuse the last entry.
  std::vector<std::array<double, kNumBiases>> nm_step_schedule{
      {110.0, 140.0, -30.0, 8.0, -16.0},
  };
  NmCoefficients nm_coeffs{};
  // Refresh the best vertex's measured value every N iterations. The live
  // objective is noisy; without this a lucky sample parks a mediocre
  // setting in the best slot for the rest of the optimization.
  int nm_re_eval_every = 3;
  int sim_threads = 0;  // 0 = auto

  // Test hook: replaces the measured objective with a deterministic
  // function of the applied biases. Seconds are still consumed.
  std::function<double(const BiasVector&)> objective_override;
};

/// Runs the closed loop over the scripted scene: monitor the per-second
/// efficacy, trigger bounded Nelder-Mead when it drops below threshold
/// (after warmup), evaluate candidates on consecutive 2-second windows,
/// settle on convergence, re-trigger on later drops. Pixel state persists
/// across every bias write.
RunLog run_loop(const SceneScript& scene, const DetectorConfig& detector,
                const ControllerConfig& cfg, const BiasBounds& bounds,
                const BiasMapping& mapping, const BiasVector& initial_biases);

}  // namespace autobias
