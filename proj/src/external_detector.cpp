#include "autobias/external_detector.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <sstream>

#include <json.hpp>

namespace autobias {

namespace {
constexpr char kB64Chars[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(const std::uint8_t* data, std::size_t len) {
  std::string out;
  out.reserve((len + 2) / 3 * 4);
  for (std::size_t i = 0; i < len; i += 3) {
    std::uint32_t v = data[i] << 16;
    if (i + 1 < len) v |= data[i + 1] << 8;
    if (i + 2 < len) v |= data[i + 2];
    out.push_back(kB64Chars[(v >> 18) & 63]);
    out.push_back(kB64Chars[(v >> 12) & 63]);
    out.push_back(i + 1 < len ? kB64Chars[(v >> 6) & 63] : '=');
    out.push_back(i + 2 < len ? kB64Chars[v & 63] : '=');
  }
  return out;
}

std::string base64_decode(const std::string& text) {
  auto val = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::string out;
  int acc = 0, bits = 0;
  for (char c : text) {
    if (c == '=') break;
    const int v = val(c);
    if (v < 0) throw ProtocolError("base64: invalid character");
    acc = (acc << 6) | v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<char>((acc >> bits) & 0xFF));
    }
  }
  return out;
}

std::string encode_frame_request(const Frame& frame) {
  std::vector<std::uint8_t> clipped(frame.on_counts.size());
  for (std::size_t i = 0; i < clipped.size(); ++i) {
    clipped[i] = static_cast<std::uint8_t>(std::min(frame.counts(i), 255u));
  }
  nlohmann::json j;
  j["frame_id"] = frame.index;
  j["width"] = frame.width;
  j["height"] = frame.height;
  j["counts_b64"] = base64_encode(clipped.data(), clipped.size());
  return j.dump();
}

Detection parse_detector_response(const std::string& line,
                                  std::uint32_t expected_frame_id,
                                  double threshold) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const std::exception& e) {
    throw ProtocolError(std::string("unparsable detector response: ") + line);
  }
  try {
    const std::uint32_t id = j.at("frame_id").get<std::uint32_t>();
    if (id != expected_frame_id) {
      std::ostringstream os;
      os << "detector response for frame " << id << ", expected "
         << expected_frame_id << ": " << line;
      throw ProtocolError(os.str());
    }
    Detection det;
    det.frame_index = expected_frame_id;
    det.found = j.at("detected").get<bool>();
    det.conf_obj = j.at("conf_obj").get<double>();
    det.conf_face = j.at("conf_face").get<double>();
    if (det.conf_obj < 0 || det.conf_obj > 1 || det.conf_face < 0 ||
        det.conf_face > 1) {
      throw ProtocolError("detector confidences outside [0,1]: " + line);
    }
    if (det.found) {
      const auto& b = j.at("bbox");
      if (!b.is_array() || b.size() != 4) {
        throw ProtocolError("detected=true without a 4-element bbox: " + line);
      }
      det.bx = b[0].get<double>();
      det.by = b[1].get<double>();
      det.bw = b[2].get<double>();
      det.bh = b[3].get<double>();
    }
    (void)threshold;
    return det;
  } catch (const ProtocolError&) {
    throw;
  } catch (const std::exception& e) {
    throw ProtocolError(std::string("malformed detector response (") +
                        e.what() + "): " + line);
  }
}

ExternalDetector::ExternalDetector(const std::string& command,
                                   int timeout_ms) {
  int to_child[2];
  int from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0) {
    throw std::runtime_error("pipe() failed for external detector");
  }
  const int pid = fork();
  if (pid < 0) throw std::runtime_error("fork() failed for external detector");
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  pid_ = pid;
  to_child_ = to_child[1];
  from_child_ = from_child[0];

  // Handshake: the child announces readiness before the first request.
  std::string line;
  if (!read_line(line, std::max(timeout_ms, 2000))) {
    throw std::runtime_error("external detector did not complete handshake: " +
                             command);
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (...) {
    throw ProtocolError("bad handshake line: " + line);
  }
  if (!j.value("ready", false)) {
    throw ProtocolError("handshake missing ready:true: " + line);
  }
}

ExternalDetector::~ExternalDetector() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  if (pid_ > 0) {
    kill(pid_, SIGTERM);
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

void ExternalDetector::write_line(const std::string& line) {
  std::string msg = line;
  msg.push_back('\n');
  std::size_t off = 0;
  while (off < msg.size()) {
    const ssize_t n = write(to_child_, msg.data() + off, msg.size() - off);
    if (n <= 0) throw std::runtime_error("external detector pipe closed");
    off += static_cast<std::size_t>(n);
  }
}

bool ExternalDetector::read_line(std::string& line, int timeout_ms) {
  while (true) {
    const std::size_t pos = rx_buffer_.find('\n');
    if (pos != std::string::npos) {
      line = rx_buffer_.substr(0, pos);
      rx_buffer_.erase(0, pos + 1);
      return true;
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int pr = poll(&pfd, 1, timeout_ms);
    if (pr <= 0) return false;  // timeout or error
    char buf[4096];
    const ssize_t n = read(from_child_, buf, sizeof(buf));
    if (n <= 0) return false;  // child went away
    rx_buffer_.append(buf, static_cast<std::size_t>(n));
  }
}

Detection ExternalDetector::detect(const Frame& frame,
                                   const DetectorConfig& cfg) {
  write_line(encode_frame_request(frame));
  std::string line;
  if (!read_line(line, cfg.timeout_ms)) {
    ++timeouts_;
    Detection det;
    det.frame_index = frame.index;
    det.found = false;
    return det;
  }
  return parse_detector_response(line, frame.index, cfg.threshold);
}

}  // namespace autobias
