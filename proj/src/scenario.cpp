#include "autobias/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace autobias {

using nlohmann::json;

void ScenarioConfig::finalize_and_validate() {
  try {
    scene.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  try {
    bounds.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (int i = 0; i < kNumBiases; ++i) {
    if (initial_biases[i] < bounds[i].min || initial_biases[i] > bounds[i].max) {
      std::ostringstream os;
      os << "bias_bounds." << kBiasNames[i] << ": initial bias "
         << initial_biases[i] << " outside [" << bounds[i].min << ", "
         << bounds[i].max << "]";
      throw ConfigError(os.str());
    }
  }
  if (detector.m_ref <= 0) {
    if (scene.target) {
      // expected target area x fill factor
      detector.m_ref =
          M_PI * scene.target->semi_axis_x * scene.target->semi_axis_y * 0.25;
    } else {
      throw ConfigError("detector.m_ref: required when the scene has no target");
    }
  }
  if (detector.kind == DetectorKind::External && detector.external_cmd.empty()) {
    throw ConfigError("detector.external_cmd: required for kind=external");
  }
  if (controller.fps <= 0) throw ConfigError("controller.fps: must be > 0");
  if (controller.warmup_s < 0) throw ConfigError("controller.warmup_s: must be >= 0");
}

std::vector<std::string> preset_names() {
  return {"flicker-100", "flicker-200", "flicker-300", "flicker-400",
          "flicker-500", "quiet"};
}

ScenarioConfig preset(const std::string& name, std::uint64_t seed) {
  ScenarioConfig c;
  c.label = name;
  c.scene.seed = seed;
  c.scene.width = 160;
  c.scene.height = 120;
  c.scene.dt_us = 200;

  TargetScript target;
  target.semi_axis_x = 14;
  target.semi_axis_y = 18;
  target.sway_amplitude_px = 10;
  target.sway_period_s = 4;

  if (name == "quiet") {
    c.scene.duration_s = 60;
    c.scene.ambient = {{0.0, 5000.0}};
    target.contrast = 12.5;
    target.jitter_px = 2.5;
    target.jitter_speed_px_s = 22.0;
    c.scene.target = target;
    c.scene.noise.rate_hz = 0.5;
    c.detector.m_ref = 0;  // derived from the target
    return c;
  }

  double freq = 0.0;
  if (name.rfind("flicker-", 0) == 0) {
    freq = std::atof(name.c_str() + 8);
  }
  if (freq != 100 && freq != 200 && freq != 300 && freq != 400 && freq != 500) {
    throw ConfigError("preset: unknown name '" + name + "'");
  }

  c.scene.duration_s = 180;
  c.scene.ambient = {{0.0, 150.0}};  // dim, below the 200 lux protocol line
  FlickerSource f;
  f.frequency_hz = freq;
  f.depth = 0.8;
  f.waveform = Waveform::Square;
  c.scene.flicker.push_back(f);

  target.contrast = 12.5;
  target.jitter_px = 2.5;
  target.jitter_speed_px_s = 22.0;
  c.scene.target = target;

  c.scene.noise.rate_hz = 3.4;
  c.scene.noise.reference_lux = 200.0;
  c.scene.noise.max_scale = 20.0;

  c.controller.warmup_s = 20;
  // The protocol's requirement is sustained detection in three quarters of
  // the frames, so the loop keeps correcting until it holds that level
  // (the trigger level is a project decision; the bare default stays 0.5).
  c.controller.trigger_threshold = 0.75;
  c.detector.m_ref = 0;  // derived from the target
  return c;
}

namespace {

[[noreturn]] void unknownKey(const std::string& path, const std::string& key) {
  throw ConfigError(path.empty() ? key + ": unknown field"
                                 : path + "." + key + ": unknown field");
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) unknownKey(path, key);
  }
}

template <typename T>
void get_to(const json& j, const char* key, const std::string& path, T& out) {
  if (!j.contains(key)) return;
  try {
    j.at(key).get_to(out);
  } catch (const std::exception& e) {
    throw ConfigError(path + "." + key + ": " + e.what());
  }
}

void parse_bias_fields(const json& j, const std::string& path, BiasVector& b) {
  check_keys(j, path, {"diff_on", "diff_off", "fo", "hpf", "refr"});
  get_to(j, "diff_on", path, b.diff_on);
  get_to(j, "diff_off", path, b.diff_off);
  get_to(j, "fo", path, b.fo);
  get_to(j, "hpf", path, b.hpf);
  get_to(j, "refr", path, b.refr);
}

void parse_bounds(const json& j, BiasBounds& bounds) {
  check_keys(j, "bias_bounds", {"diff_on", "diff_off", "fo", "hpf", "refr"});
  for (int i = 0; i < kNumBiases; ++i) {
    if (!j.contains(kBiasNames[i])) continue;
    const json& r = j.at(kBiasNames[i]);
    const std::string path = std::string("bias_bounds.") + kBiasNames[i];
    if (!r.is_array() || r.size() != 2) {
      throw ConfigError(path + ": expected [min, max]");
    }
    bounds[i].min = r[0].get<int>();
    bounds[i].max = r[1].get<int>();
  }
}

void parse_scene(const json& j, SceneScript& s) {
  check_keys(j, "scene",
             {"width", "height", "dt_us", "duration_s", "seed",
              "background_reflectance", "ambient", "flicker", "target",
              "noise"});
  get_to(j, "width", "scene", s.width);
  get_to(j, "height", "scene", s.height);
  get_to(j, "dt_us", "scene", s.dt_us);
  get_to(j, "duration_s", "scene", s.duration_s);
  get_to(j, "seed", "scene", s.seed);
  get_to(j, "background_reflectance", "scene", s.background_reflectance);

  if (j.contains("ambient")) {
    s.ambient.clear();
    int i = 0;
    for (const json& a : j.at("ambient")) {
      const std::string path = "scene.ambient[" + std::to_string(i++) + "]";
      check_keys(a, path, {"t_s", "lux"});
      AmbientStep step;
      get_to(a, "t_s", path, step.t_s);
      get_to(a, "lux", path, step.lux);
      s.ambient.push_back(step);
    }
  }
  if (j.contains("flicker")) {
    s.flicker.clear();
    int i = 0;
    for (const json& fj : j.at("flicker")) {
      const std::string path = "scene.flicker[" + std::to_string(i++) + "]";
      check_keys(fj, path,
                 {"frequency_hz", "depth", "waveform", "region"});
      FlickerSource f;
      get_to(fj, "frequency_hz", path, f.frequency_hz);
      get_to(fj, "depth", path, f.depth);
      if (fj.contains("waveform")) {
        const std::string w = fj.at("waveform").get<std::string>();
        if (w == "sine") {
          f.waveform = Waveform::Sine;
        } else if (w == "square") {
          f.waveform = Waveform::Square;
        } else {
          throw ConfigError(path + ".waveform: must be 'sine' or 'square'");
        }
      }
      if (fj.contains("region")) {
        const json& r = fj.at("region");
        if (!r.is_array() || r.size() != 4) {
          throw ConfigError(path + ".region: expected [x, y, w, h]");
        }
        f.region = Rect{r[0].get<int>(), r[1].get<int>(), r[2].get<int>(),
                        r[3].get<int>()};
      }
      s.flicker.push_back(f);
    }
  }
  if (j.contains("target")) {
    const json& t = j.at("target");
    if (t.is_null()) {
      s.target.reset();
    } else {
      check_keys(t, "scene.target",
                 {"semi_axis_x", "semi_axis_y", "contrast", "center_x",
                  "center_y", "sway_amplitude_px", "sway_period_s",
                  "jitter_px", "jitter_speed_px_s", "breathe_px",
                  "breathe_hz"});
      TargetScript tg = s.target.value_or(TargetScript{});
      get_to(t, "semi_axis_x", "scene.target", tg.semi_axis_x);
      get_to(t, "semi_axis_y", "scene.target", tg.semi_axis_y);
      get_to(t, "contrast", "scene.target", tg.contrast);
      get_to(t, "center_x", "scene.target", tg.center_x);
      get_to(t, "center_y", "scene.target", tg.center_y);
      get_to(t, "sway_amplitude_px", "scene.target", tg.sway_amplitude_px);
      get_to(t, "sway_period_s", "scene.target", tg.sway_period_s);
      get_to(t, "jitter_px", "scene.target", tg.jitter_px);
      get_to(t, "jitter_speed_px_s", "scene.target", tg.jitter_speed_px_s);
      get_to(t, "breathe_px", "scene.target", tg.breathe_px);
      get_to(t, "breathe_hz", "scene.target", tg.breathe_hz);
      s.target = tg;
    }
  }
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    check_keys(n, "scene.noise", {"rate_hz", "reference_lux", "max_scale"});
    get_to(n, "rate_hz", "scene.noise", s.noise.rate_hz);
    get_to(n, "reference_lux", "scene.noise", s.noise.reference_lux);
    get_to(n, "max_scale", "scene.noise", s.noise.max_scale);
  }
}

void parse_detector(const json& j, DetectorConfig& d) {
  check_keys(j, "detector",
             {"kind", "c_min", "m_ref", "ar0", "sigma_ar", "threshold",
              "fixed_found", "fixed_conf_obj", "fixed_conf_face", "fixed_bbox",
              "external_cmd", "timeout_ms"});
  if (j.contains("kind")) {
    const std::string k = j.at("kind").get<std::string>();
    if (k == "proxy") {
      d.kind = DetectorKind::Proxy;
    } else if (k == "fixed") {
      d.kind = DetectorKind::Fixed;
    } else if (k == "external") {
      d.kind = DetectorKind::External;
    } else {
      throw ConfigError("detector.kind: must be proxy|fixed|external");
    }
  }
  get_to(j, "c_min", "detector", d.c_min);
  get_to(j, "m_ref", "detector", d.m_ref);
  get_to(j, "ar0", "detector", d.ar0);
  get_to(j, "sigma_ar", "detector", d.sigma_ar);
  get_to(j, "threshold", "detector", d.threshold);
  get_to(j, "fixed_found", "detector", d.fixed_found);
  get_to(j, "fixed_conf_obj", "detector", d.fixed_conf_obj);
  get_to(j, "fixed_conf_face", "detector", d.fixed_conf_face);
  if (j.contains("fixed_bbox")) {
    const json& b = j.at("fixed_bbox");
    if (!b.is_array() || b.size() != 4) {
      throw ConfigError("detector.fixed_bbox: expected [bx, by, bw, bh]");
    }
    for (int i = 0; i < 4; ++i) d.fixed_bbox[i] = b[i].get<double>();
  }
  get_to(j, "external_cmd", "detector", d.external_cmd);
  get_to(j, "timeout_ms", "detector", d.timeout_ms);
}

void parse_controller(const json& j, ControllerConfig& c) {
  check_keys(j, "controller",
             {"warmup_s", "trigger_threshold", "eval_window_s", "fps",
              "final_window_s", "nm_steps", "sim_threads"});
  get_to(j, "warmup_s", "controller", c.warmup_s);
  get_to(j, "trigger_threshold", "controller", c.trigger_threshold);
  get_to(j, "eval_window_s", "controller", c.eval_window_s);
  get_to(j, "fps", "controller", c.fps);
  get_to(j, "final_window_s", "controller", c.final_window_s);
  get_to(j, "nm_re_eval_every", "controller", c.nm_re_eval_every);
  get_to(j, "sim_threads", "controller", c.sim_threads);
  if (j.contains("nm_step_schedule")) {
    const json& sched = j.at("nm_step_schedule");
    if (!sched.is_array() || sched.empty()) {
      throw ConfigError("controller.nm_step_schedule: expected a non-empty array");
    }
    c.nm_step_schedule.clear();
    int idx = 0;
    for (const json& s : sched) {
      const std::string path =
          "controller.nm_step_schedule[" + std::to_string(idx++) + "]";
      check_keys(s, path, {"diff_on", "diff_off", "fo", "hpf", "refr"});
      std::array<double, kNumBiases> steps{11.25, 11.25, 5.0, 6.0, 12.75};
      for (int i = 0; i < kNumBiases; ++i) {
        if (s.contains(kBiasNames[i])) {
          steps[i] = s.at(kBiasNames[i]).get<double>();
        }
      }
      c.nm_step_schedule.push_back(steps);
    }
  }
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("scenario: parse error: ") + e.what());
  }
  check_keys(j, "",
             {"preset", "label", "seed", "scene", "detector", "controller",
              "bias_bounds", "bias_mapping", "initial_biases"});

  ScenarioConfig cfg;
  if (j.contains("preset")) {
    cfg = preset(j.at("preset").get<std::string>());
  }
  get_to(j, "label", "", cfg.label);
  if (j.contains("seed")) cfg.scene.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("scene")) parse_scene(j.at("scene"), cfg.scene);
  if (j.contains("detector")) parse_detector(j.at("detector"), cfg.detector);
  if (j.contains("controller")) parse_controller(j.at("controller"), cfg.controller);
  if (j.contains("bias_bounds")) parse_bounds(j.at("bias_bounds"), cfg.bounds);
  if (j.contains("bias_mapping")) {
    const json& m = j.at("bias_mapping");
    check_keys(m, "bias_mapping",
               {"theta0", "k_c", "f_lp0_hz", "k_f", "f_hp0_hz", "k_h",
                "t_refr0_us", "k_r"});
    get_to(m, "theta0", "bias_mapping", cfg.mapping.theta0);
    get_to(m, "k_c", "bias_mapping", cfg.mapping.k_c);
    get_to(m, "f_lp0_hz", "bias_mapping", cfg.mapping.f_lp0_hz);
    get_to(m, "k_f", "bias_mapping", cfg.mapping.k_f);
    get_to(m, "f_hp0_hz", "bias_mapping", cfg.mapping.f_hp0_hz);
    get_to(m, "k_h", "bias_mapping", cfg.mapping.k_h);
    get_to(m, "t_refr0_us", "bias_mapping", cfg.mapping.t_refr0_us);
    get_to(m, "k_r", "bias_mapping", cfg.mapping.k_r);
  }
  if (j.contains("initial_biases")) {
    parse_bias_fields(j.at("initial_biases"), "initial_biases",
                      cfg.initial_biases);
  }
  cfg.finalize_and_validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("scenario: cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace autobias
