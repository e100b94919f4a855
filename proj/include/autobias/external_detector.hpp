#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "autobias/detector.hpp"
#include "autobias/frames.hpp"

namespace autobias {

/// Malformed or mismatched response from the external process. The raw
/// payload is preserved in the message.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string base64_encode(const std::uint8_t* data, std::size_t len);
std::string base64_decode(const std::string& text);

/// Serializes a frame to the wire request (counts clipped at 255, row-major).
std::string encode_frame_request(const Frame& frame);

/// Parses a response line into a Detection, checking the frame id.
Detection parse_detector_response(const std::string& line,
                                  std::uint32_t expected_frame_id,
                                  double threshold);

/// Thin wrapper around one external detector child process speaking
/// newline-delimited JSON on stdin/stdout. One request in flight at a time.
/// A response timeout yields found=false and bumps the warning counter; a
/// wrong frame id or unparsable payload raises ProtocolError.
class ExternalDetector {
 public:
  explicit ExternalDetector(const std::string& command, int timeout_ms = 500);
  ~ExternalDetector();

  ExternalDetector(const ExternalDetector&) = delete;
  ExternalDetector& operator=(const ExternalDetector&) = delete;

  Detection detect(const Frame& frame, const DetectorConfig& cfg);

  int timeouts() const { return timeouts_; }

 private:
  bool read_line(std::string& line, int timeout_ms);
  void write_line(const std::string& line);

  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string rx_buffer_;
  int timeouts_ = 0;
};

}  // namespace autobias
