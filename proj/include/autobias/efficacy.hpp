#pragma once

#include <span>

#include "autobias/detector.hpp"

namespace autobias {

/// Per-window performance sample. metric = f_detected / f_total; the
/// confidence aggregates are means over every frame of the window, counting
/// undetected frames as 0 so the curves move with the metric.
struct EfficacySample {
  std::uint32_t window_index = 0;
  double t_begin_s = 0.0;
  double t_end_s = 0.0;
  int f_detected = 0;
  int f_total = 0;
  double metric = 0.0;
  double mean_conf_obj = 0.0;
  double mean_conf_face = 0.0;
};

/// Throws std::invalid_argument on an empty window.
EfficacySample efficacy_metric(std::span<const Detection> detections,
                               std::uint32_t window_index = 0,
                               double window_s = 1.0);

/// The quantity the optimizer minimizes: 1 - metric.
double target_function(const EfficacySample& s);

/// Strict comparison: "goes below" the threshold.
bool below_trigger(const EfficacySample& s, double threshold = 0.5);

}  // namespace autobias
