#pragma once

#include <cstdint>
#include <string>

#include "autobias/frames.hpp"

namespace autobias {

/// Per-frame detector verdict. conf_obj carries the object probability,
/// conf_face the face class probability; p_eye is reserved for an eye
/// channel and stays 0 in the built-in proxy.
struct Detection {
  std::uint32_t frame_index = 0;
  bool found = false;
  double bx = 0.0;  // bbox centre, px
  double by = 0.0;
  double bw = 0.0;  // bbox extent, px
  double bh = 0.0;
  double conf_obj = 0.0;
  double conf_face = 0.0;
  double p_eye = 0.0;
};

enum class DetectorKind { Proxy, Fixed, External };

struct DetectorConfig {
  DetectorKind kind = DetectorKind::Proxy;

  // Proxy parameters
  std::uint32_t c_min = 2;    // binarization: active if counts >= c_min
  double m_ref = 198.0;       // expected target mass (area * fill factor)
  double ar0 = 1.3;           // face aspect ratio bh/bw
  double sigma_ar = 0.4;
  double threshold = 0.5;     // found iff conf_face >= threshold (inclusive)

  // Fixed detector (testing / protocol comparison)
  bool fixed_found = true;
  double fixed_conf_obj = 0.8;
  double fixed_conf_face = 0.7;
  double fixed_bbox[4] = {60, 40, 20, 26};

  // External detector
  std::string external_cmd;
  int timeout_ms = 500;
};

/// Deterministic geometric detector: binarize at c_min, find the largest
/// 8-connected component (ties by smallest (y, x) seed pixel), score its
/// mass against m_ref and its bounding-box aspect against ar0.
Detection detect(const Frame& frame, const DetectorConfig& cfg);

/// Fixed-output detector used to compare against an external process.
Detection detect_fixed(const Frame& frame, const DetectorConfig& cfg);

}  // namespace autobias
