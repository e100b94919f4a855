#include "autobias/detector.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace autobias {

Detection detect(const Frame& frame, const DetectorConfig& cfg) {
  const int w = frame.width;
  const int h = frame.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;

  Detection det;
  det.frame_index = frame.index;

  std::vector<std::uint8_t> active(n);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    active[i] = frame.counts(i) >= cfg.c_min;
    any |= active[i] != 0;
  }
  if (!any) return det;  // found=false, confidences 0

  // Largest 8-connected component; scan order makes the seed of each
  // component its smallest (y, x) pixel, so equal sizes resolve to the
  // component seen first.
  std::vector<std::uint8_t> visited(n, 0);
  std::vector<std::uint32_t> stack;
  std::uint32_t best_mass = 0;
  int bx0 = 0, bx1 = 0, by0 = 0, by1 = 0;

  for (std::size_t seed = 0; seed < n; ++seed) {
    if (!active[seed] || visited[seed]) continue;
    std::uint32_t mass = 0;
    int x0 = w, x1 = -1, y0 = h, y1 = -1;
    stack.clear();
    stack.push_back(static_cast<std::uint32_t>(seed));
    visited[seed] = 1;
    while (!stack.empty()) {
      const std::uint32_t p = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(p % w);
      const int y = static_cast<int>(p / w);
      ++mass;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
      for (int dy = -1; dy <= 1; ++dy) {
        const int ny = y + dy;
        if (ny < 0 || ny >= h) continue;
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int nx = x + dx;
          if (nx < 0 || nx >= w) continue;
          const std::uint32_t q = static_cast<std::uint32_t>(ny) * w + nx;
          if (active[q] && !visited[q]) {
            visited[q] = 1;
            stack.push_back(q);
          }
        }
      }
    }
    if (mass > best_mass) {  // strict: ties keep the earlier seed
      best_mass = mass;
      bx0 = x0;
      bx1 = x1;
      by0 = y0;
      by1 = y1;
    }
  }

  const double bw = bx1 - bx0 + 1;
  const double bh = by1 - by0 + 1;
  const double aspect = bh / bw;
  const double conf_obj = std::min(1.0, best_mass / cfg.m_ref);
  const double z = (aspect - cfg.ar0) / cfg.sigma_ar;
  const double shape = std::exp(-z * z);
  const double conf_face = conf_obj * shape;

  det.conf_obj = conf_obj;
  det.conf_face = conf_face;
  det.found = conf_face >= cfg.threshold;
  if (det.found) {
    det.bx = bx0 + bw / 2.0;
    det.by = by0 + bh / 2.0;
    det.bw = bw;
    det.bh = bh;
  }
  return det;
}

Detection detect_fixed(const Frame& frame, const DetectorConfig& cfg) {
  Detection det;
  det.frame_index = frame.index;
  det.found = cfg.fixed_found && cfg.fixed_conf_face >= cfg.threshold;
  det.conf_obj = cfg.fixed_conf_obj;
  det.conf_face = cfg.fixed_conf_face;
  if (det.found) {
    det.bx = cfg.fixed_bbox[0];
    det.by = cfg.fixed_bbox[1];
    det.bw = cfg.fixed_bbox[2];
    det.bh = cfg.fixed_bbox[3];
  }
  return det;
}

}  // namespace autobias
