#pragma once

#include <cstdint>
#include <vector>

namespace autobias {

/// One sensor event: microsecond timestamp, pixel address, polarity.
/// Streams are non-decreasing in t; ties are ordered by (y, x).
struct Event {
  std::uint64_t t_us = 0;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  std::uint8_t polarity = 0;  // 1 = ON, 0 = OFF

  bool operator==(const Event&) const = default;
};

using EventStream = std::vector<Event>;

inline bool stream_order_less(const Event& a, const Event& b) {
  if (a.t_us != b.t_us) return a.t_us < b.t_us;
  if (a.y != b.y) return a.y < b.y;
  return a.x < b.x;
}

}  // namespace autobias
