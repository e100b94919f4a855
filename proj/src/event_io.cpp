#include "autobias/event_io.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace autobias {

void write_events_csv(std::ostream& os, const EventStream& events) {
  os << "t_us,x,y,p\n";
  char buf[64];
  for (const Event& e : events) {
    const int n = std::snprintf(buf, sizeof(buf), "%llu,%u,%u,%u\n",
                                static_cast<unsigned long long>(e.t_us),
                                unsigned(e.x), unsigned(e.y),
                                unsigned(e.polarity));
    os.write(buf, n);
  }
}

EventStream read_events_csv(std::istream& is) {
  EventStream out;
  std::string line;
  if (!std::getline(is, line)) return out;
  if (line != "t_us,x,y,p") {
    throw std::runtime_error("EVT-CSV: missing 't_us,x,y,p' header");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    unsigned long long t;
    unsigned x, y, p;
    if (std::sscanf(line.c_str(), "%llu,%u,%u,%u", &t, &x, &y, &p) != 4 ||
        p > 1 || x > 0xFFFF || y > 0xFFFF) {
      throw std::runtime_error("EVT-CSV: malformed line: " + line);
    }
    out.push_back({t, static_cast<std::uint16_t>(x),
                   static_cast<std::uint16_t>(y),
                   static_cast<std::uint8_t>(p)});
  }
  return out;
}

namespace {
constexpr std::size_t kBinRecord = 13;  // u64 + u16 + u16 + u8

void put_le(std::uint8_t* p, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint64_t get_le(const std::uint8_t* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}
}  // namespace

void write_events_bin(std::ostream& os, const EventStream& events) {
  std::array<std::uint8_t, kBinRecord> rec;
  for (const Event& e : events) {
    put_le(rec.data(), e.t_us, 8);
    put_le(rec.data() + 8, e.x, 2);
    put_le(rec.data() + 10, e.y, 2);
    rec[12] = e.polarity;
    os.write(reinterpret_cast<const char*>(rec.data()), kBinRecord);
  }
}

EventStream read_events_bin(std::istream& is) {
  EventStream out;
  std::array<std::uint8_t, kBinRecord> rec;
  while (is.read(reinterpret_cast<char*>(rec.data()), kBinRecord)) {
    Event e;
    e.t_us = get_le(rec.data(), 8);
    e.x = static_cast<std::uint16_t>(get_le(rec.data() + 8, 2));
    e.y = static_cast<std::uint16_t>(get_le(rec.data() + 10, 2));
    e.polarity = rec[12];
    if (e.polarity > 1) throw std::runtime_error("EVT-BIN: bad polarity");
    out.push_back(e);
  }
  if (is.gcount() != 0) {
    throw std::runtime_error("EVT-BIN: truncated record");
  }
  return out;
}

namespace {
bool has_suffix(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() &&
         s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}
}  // namespace

void write_events_file(const std::string& path, const EventStream& events) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  if (has_suffix(path, ".bin")) {
    write_events_bin(os, events);
  } else if (has_suffix(path, ".csv")) {
    write_events_csv(os, events);
  } else {
    throw std::runtime_error("event file must end in .csv or .bin: " + path);
  }
}

EventStream read_events_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  if (has_suffix(path, ".bin")) return read_events_bin(is);
  if (has_suffix(path, ".csv")) return read_events_csv(is);
  throw std::runtime_error("event file must end in .csv or .bin: " + path);
}

}  // namespace autobias
