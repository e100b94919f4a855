#include "autobias/efficacy.hpp"

#include <stdexcept>

namespace autobias {

EfficacySample efficacy_metric(std::span<const Detection> detections,
                               std::uint32_t window_index, double window_s) {
  if (detections.empty()) {
    throw std::invalid_argument("efficacy metric is undefined on an empty window");
  }
  EfficacySample s;
  s.window_index = window_index;
  s.t_begin_s = window_index * window_s;
  s.t_end_s = (window_index + 1) * window_s;
  s.f_total = static_cast<int>(detections.size());
  double sum_obj = 0.0;
  double sum_face = 0.0;
  for (const Detection& d : detections) {
    if (d.found) {
      ++s.f_detected;
      sum_obj += d.conf_obj;
      sum_face += d.conf_face;
    }
  }
  s.metric = static_cast<double>(s.f_detected) / s.f_total;
  s.mean_conf_obj = sum_obj / s.f_total;
  s.mean_conf_face = sum_face / s.f_total;
  return s;
}

double target_function(const EfficacySample& s) { return 1.0 - s.metric; }

bool below_trigger(const EfficacySample& s, double threshold) {
  return s.metric < threshold;
}

}  // namespace autobias
