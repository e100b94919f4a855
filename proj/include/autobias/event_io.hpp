#pragma once

#include <iosfwd>
#include <string>

#include "autobias/events.hpp"

namespace autobias {

// EVT-CSV: UTF-8 text, header "t_us,x,y,p", one event per line, p in {0,1}.
void write_events_csv(std::ostream& os, const EventStream& events);
EventStream read_events_csv(std::istream& is);

// EVT-BIN: little-endian records of u64 t_us, u16 x, u16 y, u8 p, no header.
void write_events_bin(std::ostream& os, const EventStream& events);
EventStream read_events_bin(std::istream& is);

// Dispatch on the file extension (.csv / .bin).
void write_events_file(const std::string& path, const EventStream& events);
EventStream read_events_file(const std::string& path);

}  // namespace autobias
