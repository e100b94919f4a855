#include <doctest.h>

#include <random>

#include "autobias/detector.hpp"

using namespace autobias;

namespace {

Frame blank_frame(int w, int h) {
  Frame f;
  f.index = 0;
  f.width = static_cast<std::uint16_t>(w);
  f.height = static_cast<std::uint16_t>(h);
  f.on_counts.assign(static_cast<std::size_t>(w) * h, 0);
  f.off_counts.assign(static_cast<std::size_t>(w) * h, 0);
  return f;
}

void set_count(Frame& f, int x, int y, std::uint32_t c) {
  f.on_counts[static_cast<std::size_t>(y) * f.width + x] = c;
}

// Solid rectangle of active pixels with bh/bw = 26/20 = 1.3
Frame face_rect_frame(int x0 = 10, int y0 = 10, std::uint32_t count = 5) {
  Frame f = blank_frame(64, 64);
  for (int y = y0; y < y0 + 26; ++y) {
    for (int x = x0; x < x0 + 20; ++x) {
      set_count(f, x, y, count);
    }
  }
  return f;
}

}  // namespace

TEST_CASE("all-zero frame detects nothing") {
  DetectorConfig cfg;
  Detection d = detect(blank_frame(32, 32), cfg);
  CHECK(!d.found);
  CHECK(d.conf_obj == 0.0);
  CHECK(d.conf_face == 0.0);
}

TEST_CASE("a component of exactly m_ref pixels at face aspect scores 1.0") {
  Frame f = face_rect_frame();
  DetectorConfig cfg;
  cfg.m_ref = 20.0 * 26.0;  // the component's exact mass
  Detection d = detect(f, cfg);
  CHECK(d.conf_obj == doctest::Approx(1.0));
  CHECK(d.conf_face == doctest::Approx(1.0));
  CHECK(d.found);
  CHECK(d.bw == doctest::Approx(20));
  CHECK(d.bh == doctest::Approx(26));
  CHECK(d.bx == doctest::Approx(10 + 10.0));
  CHECK(d.by == doctest::Approx(10 + 13.0));
}

TEST_CASE("half of m_ref scores 0.5 and the threshold is inclusive") {
  Frame f = face_rect_frame();
  DetectorConfig cfg;
  cfg.m_ref = 2.0 * 20.0 * 26.0;  // component mass is exactly m_ref / 2
  Detection d = detect(f, cfg);
  CHECK(d.conf_obj == doctest::Approx(0.5));
  CHECK(d.conf_face == doctest::Approx(0.5));
  CHECK(d.found);  // found iff conf_face >= 0.5, boundary inclusive
}

TEST_CASE("aspect ratio away from 1.3 shrinks the face score") {
  Frame f = blank_frame(64, 64);
  for (int y = 20; y < 30; ++y) {
    for (int x = 10; x < 50; ++x) set_count(f, x, y, 3);
  }
  DetectorConfig cfg;
  cfg.m_ref = 400.0;
  Detection d = detect(f, cfg);
  CHECK(d.conf_obj == doctest::Approx(1.0));
  // AR = 10/40 = 0.25: shape = exp(-((0.25-1.3)/0.4)^2)
  CHECK(d.conf_face ==
        doctest::Approx(std::exp(-std::pow((0.25 - 1.3) / 0.4, 2))));
  CHECK(!d.found);
}

TEST_CASE("translation leaves scores unchanged and shifts the bbox") {
  DetectorConfig cfg;
  cfg.m_ref = 700.0;
  Detection a = detect(face_rect_frame(5, 7), cfg);
  Detection b = detect(face_rect_frame(17, 23), cfg);
  CHECK(a.conf_obj == b.conf_obj);
  CHECK(a.conf_face == b.conf_face);
  CHECK(b.bx - a.bx == doctest::Approx(12));
  CHECK(b.by - a.by == doctest::Approx(16));
}

TEST_CASE("conf_obj grows with component mass until saturation") {
  DetectorConfig cfg;
  cfg.m_ref = 100.0;
  double prev = -1.0;
  for (int rows : {2, 4, 6, 10, 14}) {
    Frame f = blank_frame(32, 32);
    for (int y = 4; y < 4 + rows; ++y) {
      for (int x = 4; x < 14; ++x) set_count(f, x, y, 2);
    }
    Detection d = detect(f, cfg);
    CHECK(d.conf_obj >= prev);
    CHECK(d.conf_obj <= 1.0);
    prev = d.conf_obj;
  }
  CHECK(prev == doctest::Approx(1.0));
}

TEST_CASE("scores stay in [0,1] on random frames") {
  std::mt19937_64 rng(3);
  DetectorConfig cfg;
  cfg.m_ref = 60.0;
  for (int trial = 0; trial < 25; ++trial) {
    Frame f = blank_frame(24, 24);
    for (std::size_t i = 0; i < f.on_counts.size(); ++i) {
      f.on_counts[i] = rng() % 4;
      f.off_counts[i] = rng() % 4;
    }
    Detection d = detect(f, cfg);
    CHECK(d.conf_obj >= 0.0);
    CHECK(d.conf_obj <= 1.0);
    CHECK(d.conf_face >= 0.0);
    CHECK(d.conf_face <= 1.0);
  }
}

TEST_CASE("ties between equal components resolve to the first seed") {
  Frame f = blank_frame(32, 32);
  // two disjoint 3x3 blocks of equal mass; the (2,2) one is seen first
  for (int y = 2; y < 5; ++y) {
    for (int x = 2; x < 5; ++x) set_count(f, x, y, 2);
  }
  for (int y = 20; y < 23; ++y) {
    for (int x = 20; x < 23; ++x) set_count(f, x, y, 2);
  }
  DetectorConfig cfg;
  cfg.m_ref = 9.0;
  cfg.threshold = 0.0;  // force found so the bbox is reported
  Detection d = detect(f, cfg);
  CHECK(d.bx == doctest::Approx(3.5));
  CHECK(d.by == doctest::Approx(3.5));
}

TEST_CASE("binarization threshold c_min gates activity") {
  Frame f = blank_frame(16, 16);
  set_count(f, 4, 4, 1);  // below the default c_min = 2
  DetectorConfig cfg;
  Detection d = detect(f, cfg);
  CHECK(d.conf_obj == 0.0);

  set_count(f, 4, 4, 2);
  d = detect(f, cfg);
  CHECK(d.conf_obj > 0.0);

  // counts are polarity-summed: 1 ON + 1 OFF activates too
  Frame g = blank_frame(16, 16);
  g.on_counts[4 * 16 + 4] = 1;
  g.off_counts[4 * 16 + 4] = 1;
  d = detect(g, cfg);
  CHECK(d.conf_obj > 0.0);
}

TEST_CASE("8-connectivity joins diagonal pixels") {
  Frame f = blank_frame(16, 16);
  set_count(f, 4, 4, 2);
  set_count(f, 5, 5, 2);
  set_count(f, 6, 6, 2);
  DetectorConfig cfg;
  cfg.m_ref = 3.0;
  Detection d = detect(f, cfg);
  CHECK(d.conf_obj == doctest::Approx(1.0));  // one component of mass 3
}

TEST_CASE("fixed detector reports the configured verdict") {
  DetectorConfig cfg;
  cfg.kind = DetectorKind::Fixed;
  cfg.fixed_conf_obj = 0.8;
  cfg.fixed_conf_face = 0.7;
  Detection d = detect_fixed(blank_frame(8, 8), cfg);
  CHECK(d.found);
  CHECK(d.conf_obj == 0.8);
  CHECK(d.conf_face == 0.7);
  cfg.fixed_conf_face = 0.3;  // below threshold
  d = detect_fixed(blank_frame(8, 8), cfg);
  CHECK(!d.found);
}
