#include "autobias/frames.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace autobias {

std::uint64_t Frame::total_events() const {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < on_counts.size(); ++i) n += counts(i);
  return n;
}

FrameAccumulator::FrameAccumulator(int fps, int width, int height)
    : fps_(fps), width_(width), height_(height) {
  if (fps <= 0) throw std::invalid_argument("fps must be > 0");
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("frame geometry must be positive");
  }
  open(0);
}

std::uint64_t FrameAccumulator::frame_index_of(std::uint64_t t_us) const {
  // frame k covers [k*1e6/fps, (k+1)*1e6/fps); equivalently floor(t*fps/1e6)
  return t_us * static_cast<std::uint64_t>(fps_) / 1000000ull;
}

void FrameAccumulator::open(std::uint64_t index) {
  current_index_ = index;
  current_.index = static_cast<std::uint32_t>(index);
  current_.t_begin_us = index * 1000000ull / fps_;
  // first instant of the next window
  current_.t_end_us = (index + 1) * 1000000ull;
  current_.t_end_us = (current_.t_end_us + fps_ - 1) / fps_;
  current_.width = static_cast<std::uint16_t>(width_);
  current_.height = static_cast<std::uint16_t>(height_);
  current_.on_counts.assign(static_cast<std::size_t>(width_) * height_, 0);
  current_.off_counts.assign(static_cast<std::size_t>(width_) * height_, 0);
}

Frame FrameAccumulator::close() {
  Frame done = std::move(current_);
  open(current_index_ + 1);
  return done;
}

void FrameAccumulator::add(const Event& e) {
  if (any_event_ && e.t_us < last_t_) {
    throw std::runtime_error("event stream is not time-ordered");
  }
  any_event_ = true;
  last_t_ = e.t_us;
  const std::uint64_t idx = frame_index_of(e.t_us);
  if (idx < current_index_) {
    throw std::runtime_error("event behind the current frame window");
  }
  // add() never closes windows on its own; the caller drains by time so
  // empty windows are emitted too.
  if (idx > current_index_) {
    throw std::runtime_error(
        "event beyond the open frame window; call drain_until past the "
        "window edge first");
  }
  if (e.x >= width_ || e.y >= height_) {
    throw std::runtime_error("event outside the frame geometry");
  }
  const std::size_t p = static_cast<std::size_t>(e.y) * width_ + e.x;
  auto& plane = e.polarity ? current_.on_counts : current_.off_counts;
  ++plane[p];
}

void FrameAccumulator::add(std::span<const Event> events) {
  for (const Event& e : events) add(e);
}

void FrameAccumulator::drain_until(std::uint64_t t_us, std::vector<Frame>& out) {
  while (current_.t_end_us <= t_us) {
    out.push_back(close());
  }
}

std::vector<Frame> accumulate_frames(std::span<const Event> events, int fps,
                                     int width, int height,
                                     std::uint64_t t_end_us) {
  FrameAccumulator acc(fps, width, height);
  std::vector<Frame> out;
  for (const Event& e : events) {
    acc.drain_until(e.t_us, out);
    acc.add(e);
  }
  acc.drain_until(t_end_us, out);
  return out;
}

void write_frame_pgm(std::ostream& os, const Frame& f) {
  os << "P5\n" << f.width << " " << f.height << "\n255\n";
  for (std::size_t i = 0; i < f.on_counts.size(); ++i) {
    const std::uint32_t c = f.counts(i);
    const unsigned char b = static_cast<unsigned char>(std::min(c, 255u));
    os.write(reinterpret_cast<const char*>(&b), 1);
  }
}

}  // namespace autobias
