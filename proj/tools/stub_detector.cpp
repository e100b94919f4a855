// Minimal external detector speaking the newline-JSON protocol on
// stdin/stdout. Answers every frame with fixed confidences; useful as a
// protocol reference and for conformance tests.
//
//   stub_detector [--conf-obj F] [--conf-face F] [--detected 0|1]
//                 [--bbox bx,by,bw,bh] [--sleep-ms N] [--wrong-id]
//                 [--garbage]
//
// --sleep-ms delays each response (timeout testing), --wrong-id answers
// with frame_id+1, --garbage answers with an unparsable line.

#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <iostream>
#include <string>

#include <json.hpp>

int main(int argc, char** argv) {
  double conf_obj = 0.8;
  double conf_face = 0.7;
  bool detected = true;
  double bbox[4] = {60, 40, 20, 26};
  int sleep_ms = 0;
  bool wrong_id = false;
  bool garbage = false;

  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    auto next = [&]() -> const char* {
      if (i + 1 >= argc) {
        std::cerr << "missing value for " << a << "\n";
        std::exit(1);
      }
      return argv[++i];
    };
    if (a == "--conf-obj") {
      conf_obj = std::atof(next());
    } else if (a == "--conf-face") {
      conf_face = std::atof(next());
    } else if (a == "--detected") {
      detected = std::atoi(next()) != 0;
    } else if (a == "--bbox") {
      std::sscanf(next(), "%lf,%lf,%lf,%lf", &bbox[0], &bbox[1], &bbox[2],
                  &bbox[3]);
    } else if (a == "--sleep-ms") {
      sleep_ms = std::atoi(next());
    } else if (a == "--wrong-id") {
      wrong_id = true;
    } else if (a == "--garbage") {
      garbage = true;
    } else {
      std::cerr << "unknown option " << a << "\n";
      return 1;
    }
  }

  std::cout << "{\"ready\":true}\n" << std::flush;

  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    nlohmann::json req;
    try {
      req = nlohmann::json::parse(line);
    } catch (...) {
      std::cerr << "stub_detector: bad request: " << line << "\n";
      return 1;
    }
    if (sleep_ms > 0) usleep(sleep_ms * 1000);
    if (garbage) {
      std::cout << "not json at all\n" << std::flush;
      continue;
    }
    nlohmann::json resp;
    std::uint64_t id = req.value("frame_id", 0ull);
    resp["frame_id"] = wrong_id ? id + 1 : id;
    resp["detected"] = detected;
    resp["conf_obj"] = conf_obj;
    resp["conf_face"] = conf_face;
    if (detected) {
      resp["bbox"] = {bbox[0], bbox[1], bbox[2], bbox[3]};
    }
    std::cout << resp.dump() << "\n" << std::flush;
  }
  return 0;
}
