#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "autobias/events.hpp"

namespace autobias {

/// Per-polarity event counts accumulated over one half-open time window
/// [t_begin_us, t_end_us). Frame k at a given rate covers
/// [k*1e6/fps, (k+1)*1e6/fps); boundary events belong to the later frame.
struct Frame {
  std::uint32_t index = 0;
  std::uint64_t t_begin_us = 0;
  std::uint64_t t_end_us = 0;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::vector<std::uint32_t> on_counts;   // row-major
  std::vector<std::uint32_t> off_counts;  // row-major

  std::uint32_t counts(std::size_t i) const {
    return on_counts[i] + off_counts[i];
  }
  std::uint64_t total_events() const;
};

/// Streaming event-to-frame binner. Push time-ordered events, then close
/// windows up to a time limit; empty windows still come out as zero-count
/// frames. Throws on out-of-order input.
class FrameAccumulator {
 public:
  FrameAccumulator(int fps, int width, int height);

  int fps() const { return fps_; }

  void add(const Event& e);
  void add(std::span<const Event> events);

  /// Emits every frame whose window ends at or before t_us into out
  /// (in index order), including empty ones.
  void drain_until(std::uint64_t t_us, std::vector<Frame>& out);

 private:
  std::uint64_t frame_index_of(std::uint64_t t_us) const;
  void open(std::uint64_t index);
  Frame close();

  int fps_;
  int width_;
  int height_;
  std::uint64_t current_index_ = 0;
  std::uint64_t last_t_ = 0;
  bool any_event_ = false;
  Frame current_;
};

/// Batch form: bins a whole stream covering [0, t_end_us) and returns all
/// frames of the interval, empty windows included.
std::vector<Frame> accumulate_frames(std::span<const Event> events, int fps,
                                     int width, int height,
                                     std::uint64_t t_end_us);

/// 8-bit PGM dump (counts clipped at 255), for debugging.
void write_frame_pgm(std::ostream& os, const Frame& f);

}  // namespace autobias
