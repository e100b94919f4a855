#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "autobias/bias.hpp"
#include "autobias/controller.hpp"
#include "autobias/detector.hpp"
#include "autobias/scene.hpp"

namespace autobias {

/// Configuration problem: carries the offending field path in the message.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything one run needs.
struct ScenarioConfig {
  std::string label = "custom";
  SceneScript scene;
  DetectorConfig detector;
  ControllerConfig controller;
  BiasBounds bounds;
  BiasMapping mapping;
  BiasVector initial_biases;

  /// Cross-field checks (initial biases within bounds, detector m_ref from
  /// the target when unset, scene invariants). Throws ConfigError.
  void finalize_and_validate();
};

std::vector<std::string> preset_names();

/// Built-in scenarios: flicker-100 .. flicker-500 replicate the dim-light
/// flickering protocol (150 lux ambient, global square-wave flicker at the
/// named frequency, swaying face target, 180 s, 20 s warmup); "quiet" is a
/// bright no-flicker scene that never triggers.
ScenarioConfig preset(const std::string& name, std::uint64_t seed = 1);

/// Strict JSON load: unknown keys are errors. The file may name a "preset"
/// to start from; every other field overrides it.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& json_text);

}  // namespace autobias
