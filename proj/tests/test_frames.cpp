#include <doctest.h>

#include <random>
#include <sstream>

#include "autobias/event_io.hpp"
#include "autobias/frames.hpp"

using namespace autobias;

TEST_CASE("uniform events bin evenly") {
  // 800 events uniformly over 1 s at 8 fps: 8 frames of 100 each
  EventStream ev;
  for (int i = 0; i < 800; ++i) {
    ev.push_back({static_cast<std::uint64_t>(i) * 1250, 3, 4, 1});
  }
  auto frames = accumulate_frames(ev, 8, 16, 16, 1000000);
  REQUIRE(frames.size() == 8);
  for (const Frame& f : frames) {
    CHECK(f.total_events() == 100);
  }
}

TEST_CASE("boundary event belongs to the later frame") {
  EventStream ev{{125000, 0, 0, 1}};
  auto frames = accumulate_frames(ev, 8, 4, 4, 1000000);
  REQUIRE(frames.size() == 8);
  CHECK(frames[0].total_events() == 0);
  CHECK(frames[1].total_events() == 1);
}

TEST_CASE("empty stream still yields zero-count frames") {
  auto frames = accumulate_frames({}, 8, 4, 4, 1000000);
  REQUIRE(frames.size() == 8);
  for (const Frame& f : frames) {
    CHECK(f.total_events() == 0);
  }
}

TEST_CASE("frame windows partition time") {
  auto frames = accumulate_frames({}, 8, 4, 4, 2000000);
  REQUIRE(frames.size() == 16);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    CHECK(frames[i].index == i);
    CHECK(frames[i].t_end_us - frames[i].t_begin_us == 125000);
    if (i > 0) CHECK(frames[i].t_begin_us == frames[i - 1].t_end_us);
  }
}

TEST_CASE("event conservation over random streams") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = static_cast<int>(rng() % 500);
    EventStream ev;
    std::uint64_t t = 0;
    for (int i = 0; i < n; ++i) {
      t += rng() % 9000;
      if (t >= 1000000) break;
      ev.push_back({t, static_cast<std::uint16_t>(rng() % 8),
                    static_cast<std::uint16_t>(rng() % 8),
                    static_cast<std::uint8_t>(rng() % 2)});
    }
    auto frames = accumulate_frames(ev, 8, 8, 8, 1000000);
    std::uint64_t total = 0;
    std::uint64_t on_total = 0, off_total = 0;
    for (const Frame& f : frames) {
      total += f.total_events();
      for (std::size_t i = 0; i < f.on_counts.size(); ++i) {
        on_total += f.on_counts[i];
        off_total += f.off_counts[i];
      }
    }
    CHECK(total == ev.size());
    CHECK(on_total + off_total == ev.size());
  }
}

TEST_CASE("total mass is fps-invariant") {
  std::mt19937_64 rng(7);
  EventStream ev;
  std::uint64_t t = 0;
  for (int i = 0; i < 700; ++i) {
    t += rng() % 2500;
    if (t >= 1000000) break;
    ev.push_back({t, static_cast<std::uint16_t>(rng() % 6),
                  static_cast<std::uint16_t>(rng() % 6), 1});
  }
  std::uint64_t mass4 = 0, mass8 = 0, mass25 = 0;
  for (const Frame& f : accumulate_frames(ev, 4, 6, 6, 1000000)) mass4 += f.total_events();
  for (const Frame& f : accumulate_frames(ev, 8, 6, 6, 1000000)) mass8 += f.total_events();
  for (const Frame& f : accumulate_frames(ev, 25, 6, 6, 1000000)) mass25 += f.total_events();
  CHECK(mass4 == ev.size());
  CHECK(mass8 == ev.size());
  CHECK(mass25 == ev.size());
}

TEST_CASE("unordered stream is rejected") {
  EventStream ev{{1000, 0, 0, 1}, {500, 0, 0, 1}};
  FrameAccumulator acc(8, 4, 4);
  acc.add(ev[0]);
  CHECK_THROWS_AS(acc.add(ev[1]), std::runtime_error);
}

TEST_CASE("pgm export clips counts at 255") {
  Frame f;
  f.index = 0;
  f.width = 2;
  f.height = 1;
  f.on_counts = {300, 1};
  f.off_counts = {100, 1};
  std::ostringstream os;
  write_frame_pgm(os, f);
  const std::string data = os.str();
  CHECK(data.substr(0, 3) == "P5\n");
  REQUIRE(data.size() >= 2);
  CHECK(static_cast<unsigned char>(data[data.size() - 2]) == 255);
  CHECK(static_cast<unsigned char>(data[data.size() - 1]) == 2);
}

TEST_CASE("event files round-trip through csv and bin") {
  EventStream ev;
  std::mt19937_64 rng(99);
  std::uint64_t t = 0;
  for (int i = 0; i < 200; ++i) {
    t += rng() % 5000;
    ev.push_back({t, static_cast<std::uint16_t>(rng() % 160),
                  static_cast<std::uint16_t>(rng() % 120),
                  static_cast<std::uint8_t>(rng() % 2)});
  }
  std::stringstream csv;
  write_events_csv(csv, ev);
  CHECK(read_events_csv(csv) == ev);

  std::stringstream bin(std::ios::in | std::ios::out | std::ios::binary);
  write_events_bin(bin, ev);
  CHECK(read_events_bin(bin) == ev);
}
