// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits non-zero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "autobias/controller.hpp"
#include "autobias/detector.hpp"
#include "autobias/efficacy.hpp"
#include "autobias/frames.hpp"
#include "autobias/run_output.hpp"
#include "autobias/scenario.hpp"
#include "autobias/sensor.hpp"
#include "autobias/simplex.hpp"

using namespace autobias;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail,
            double seconds) {
  std::printf("criterion %2d: %s  (%.1fs)  %s\n", criterion,
              pass ? "PASS" : "FAIL", seconds, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Detection> fake_window(int detected, int total) {
  std::vector<Detection> v(total);
  for (int i = 0; i < total; ++i) {
    v[i].found = i < detected;
    if (v[i].found) {
      v[i].conf_obj = 0.9;
      v[i].conf_face = 0.8;
    }
  }
  return v;
}

// ---------------------------------------------------------------- 1
void criterion_metric_exactness() {
  auto t0 = Clock::now();
  bool ok = true;
  for (int n = 1; n <= 64 && ok; ++n) {
    for (int d = 0; d <= n && ok; ++d) {
      EfficacySample s = efficacy_metric(fake_window(d, n));
      if (s.metric != static_cast<double>(d) / n) ok = false;
      if (target_function(s) != 1.0 - static_cast<double>(d) / n) ok = false;
    }
  }
  report(1, ok, "efficacy metric and target function exact for d/n up to 64",
         elapsed(t0));
}

// ---------------------------------------------------------------- 2
void criterion_optimizer() {
  auto t0 = Clock::now();
  const std::vector<double> c{30, 40, -10, 20, 50};
  BiasBounds bounds;
  Objective f = [&](std::span<const double> x) {
    double v = 0;
    for (int i = 0; i < 5; ++i) v += (x[i] - c[i]) * (x[i] - c[i]);
    return v;
  };
  NmSimplex s =
      make_bias_simplex(BiasVector{}, bounds, default_bias_steps(bounds));
  s.evaluate_initial(f);
  while (s.status() == NmStatus::Running && s.evaluations() < 200) {
    s.nm_step(f);
  }
  bool ok = s.status() == NmStatus::Converged && s.evaluations() <= 200;
  BiasVector b = best_bias(s, bounds);
  int err = 0;
  for (int i = 0; i < 5; ++i) {
    err = std::max(err, std::abs(b[i] - static_cast<int>(c[i])));
  }
  ok = ok && err <= 1;

  // 2-D hand-traced reflection: {(0,0),(1,0),(0,1)} on x+y -> worst (0,1)
  // replaced by (1,-1).
  std::vector<double> start{0, 0}, steps{1, 1};
  BoxBounds box{{-1e9, -1e9}, {1e9, 1e9}};
  NmSimplex s2(start, steps, std::move(box));
  Objective f2 = [](std::span<const double> x) { return x[0] + x[1]; };
  s2.evaluate_initial(f2);
  s2.nm_step(f2);
  bool traced = false;
  bool old_gone = true;
  for (const auto& v : s2.vertices()) {
    if (v.x == std::vector<double>{1, -1}) traced = true;
    if (v.x == std::vector<double>{0, 1}) old_gone = false;
  }
  ok = ok && traced && old_gone;

  std::ostringstream os;
  os << "quadratic: " << s.evaluations() << " evals, max-norm err " << err
     << "; hand-traced reflection " << (traced ? "reproduced" : "wrong");
  report(2, ok, os.str(), elapsed(t0));
}

// ---------------------------------------------------------------- 3
void criterion_pixel_invariants() {
  auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream os;

  // (a) static noiseless scene emits nothing
  {
    SceneScript s;
    s.width = 32;
    s.height = 24;
    s.dt_us = 200;
    s.duration_s = 2;
    s.background_reflectance = 1.0;
    s.ambient = {{0.0, 150.0}};
    PixelParams p;
    EventStream ev = simulate_events(s, p, 2000000);
    if (!ev.empty()) {
      ok = false;
      os << "static scene emitted " << ev.size() << " events; ";
    }
  }

  // (b) per-pixel inter-event gaps >= t_refr across a 10 s flicker run
  {
    SceneScript s;
    s.width = 48;
    s.height = 36;
    s.dt_us = 200;
    s.duration_s = 10;
    s.background_reflectance = 1.0;
    s.ambient = {{0.0, 150.0}};
    FlickerSource f;
    f.frequency_hz = 200;
    f.depth = 0.8;
    s.flicker = {f};
    s.noise.rate_hz = 10.0;
    s.seed = 11;
    PixelParams p;
    p.t_refr_us = 1000.0;
    EventStream ev = simulate_events(s, p, 10000000);
    std::map<std::pair<int, int>, std::uint64_t> last;
    std::uint64_t violations = 0;
    for (const Event& e : ev) {
      auto key = std::make_pair(int(e.x), int(e.y));
      auto it = last.find(key);
      if (it != last.end() && e.t_us - it->second < 1000) ++violations;
      last[key] = e.t_us;
    }
    if (violations != 0 || ev.empty()) {
      ok = false;
      os << violations << " refractory violations in " << ev.size()
         << " events; ";
    }
  }

  // (c) ON count non-increasing over theta_on grid on a fixed scene
  {
    SceneScript s;
    s.width = 16;
    s.height = 16;
    s.dt_us = 200;
    s.duration_s = 2;
    s.background_reflectance = 1.0;
    s.ambient = {{0.0, 150.0}};
    FlickerSource f;
    f.frequency_hz = 100;
    f.depth = 0.6;
    f.waveform = Waveform::Sine;
    s.flicker = {f};
    s.seed = 4;
    long prev = 1L << 40;
    for (double theta : {0.1, 0.15, 0.2, 0.3}) {
      PixelParams p;
      p.theta_on = theta;
      p.f_lp_hz = 2000.0;
      p.t_refr_us = 0.0;
      EventStream ev = simulate_events(s, p, 2000000);
      long on = 0;
      for (const Event& e : ev) on += e.polarity == 1;
      if (on > prev) {
        ok = false;
        os << "ON count rose " << prev << "->" << on << " at theta " << theta
           << "; ";
      }
      prev = on;
    }
  }

  report(3, ok, ok ? "static silence, refractory gaps, threshold monotonicity"
                   : os.str(),
         elapsed(t0));
}

// ---------------------------------------------------------------- 4
void criterion_flicker_attenuation() {
  auto t0 = Clock::now();
  SceneScript s;
  s.width = 32;
  s.height = 24;
  s.dt_us = 200;
  s.duration_s = 4;
  s.background_reflectance = 1.0;
  s.ambient = {{0.0, 150.0}};
  FlickerSource f;
  f.frequency_hz = 200;
  f.depth = 0.5;
  f.waveform = Waveform::Sine;
  s.flicker = {f};
  // first-order amplitude factors: 0.243 at f_lp = 50, 0.999 at 4000; with
  // thresholds at 0.4 the attenuated swing stays below and the wide one
  // crosses every cycle
  PixelParams slow;
  slow.theta_on = slow.theta_off = 0.4;
  slow.f_lp_hz = 50.0;
  slow.t_refr_us = 0.0;
  PixelParams fast = slow;
  fast.f_lp_hz = 4000.0;
  const std::size_t n_slow = simulate_events(s, slow, 4000000).size();
  const std::size_t n_fast = simulate_events(s, fast, 4000000).size();
  const bool ok = n_fast > 0 && n_slow * 5 <= n_fast;
  std::ostringstream os;
  os << "events at f_lp=50: " << n_slow << ", at f_lp=4000: " << n_fast;
  report(4, ok, os.str(), elapsed(t0));
}

// ------------------------------------------------------------- 5, 6, 9
struct PresetRun {
  std::string preset_name;
  std::uint64_t seed;
  RunLog log;
  double wall_s;
};

std::vector<PresetRun> run_preset_matrix() {
  std::vector<PresetRun> runs;
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  for (const char* name : {"flicker-100", "flicker-200", "flicker-300",
                           "flicker-400", "flicker-500"}) {
    for (std::uint64_t seed : seeds) {
      ScenarioConfig cfg = preset(name, seed);
      cfg.finalize_and_validate();
      auto t0 = Clock::now();
      RunLog log = run_loop(cfg.scene, cfg.detector, cfg.controller,
                            cfg.bounds, cfg.mapping, cfg.initial_biases);
      runs.push_back({name, seed, std::move(log), elapsed(t0)});
      std::printf("    %s seed %llu: warmup %.3f final30 %.3f biases %s"
                  " (%.0fs)\n",
                  name, static_cast<unsigned long long>(seed),
                  runs.back().log.summary.warmup_means.metric,
                  runs.back().log.summary.final_means.metric,
                  to_string(runs.back().log.summary.final_biases).c_str(),
                  runs.back().wall_s);
      std::fflush(stdout);
    }
  }
  return runs;
}

bool improved(double warmup, double final_v, double min_gain) {
  if (warmup <= 0.0) return final_v > 0.0;
  return (final_v - warmup) / warmup >= min_gain;
}

void criterion_end_to_end(const std::vector<PresetRun>& runs) {
  bool ok = true;
  std::ostringstream os;
  for (const char* name : {"flicker-100", "flicker-200", "flicker-300",
                           "flicker-400", "flicker-500"}) {
    double warm_m = 0, fin_m = 0, warm_o = 0, fin_o = 0, warm_f = 0, fin_f = 0;
    int n = 0;
    for (const PresetRun& r : runs) {
      if (r.preset_name != name) continue;
      warm_m += r.log.summary.warmup_means.metric;
      fin_m += r.log.summary.final_means.metric;
      warm_o += r.log.summary.warmup_means.conf_obj;
      fin_o += r.log.summary.final_means.conf_obj;
      warm_f += r.log.summary.warmup_means.conf_face;
      fin_f += r.log.summary.final_means.conf_face;
      ++n;
    }
    warm_m /= n; fin_m /= n; warm_o /= n; fin_o /= n; warm_f /= n; fin_f /= n;
    const bool preset_ok = warm_m <= 0.2 && fin_m >= 0.75 &&
                           improved(warm_o, fin_o, 0.33) &&
                           improved(warm_f, fin_f, 0.37);
    if (!preset_ok) ok = false;
    os << name << " warmup " << std::round(warm_m * 1000) / 1000 << "/final "
       << std::round(fin_m * 1000) / 1000 << (preset_ok ? " ok; " : " BAD; ");
  }
  report(5, ok, os.str(), 0.0);
}

void criterion_table3_direction(const std::vector<PresetRun>& runs) {
  bool ok = true;
  std::ostringstream os;
  for (const PresetRun& r : runs) {
    const BiasVector& b = r.log.summary.final_biases;
    if (!(b.diff_off > 0 && b.fo < 0)) {
      ok = false;
      os << r.preset_name << "/" << r.seed << " (diff_off " << b.diff_off
         << ", fo " << b.fo << ") ";
    }
  }
  report(6, ok,
         ok ? "final diff_off > 0 and fo < 0 in all 15 runs"
            : "sign violations: " + os.str(),
         0.0);
}

void criterion_performance(const std::vector<PresetRun>& runs) {
  double worst = 0;
  for (const PresetRun& r : runs) worst = std::max(worst, r.wall_s);
  std::ostringstream os;
  os << "slowest 180 s preset run took " << std::round(worst) << " s wall";
  report(9, worst <= 120.0, os.str(), 0.0);
}

// ---------------------------------------------------------------- 7
std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void criterion_determinism(const std::string& cli) {
  auto t0 = Clock::now();
  const std::string base = "/tmp/autobias_acceptance";
  std::system(("rm -rf " + base + " && mkdir -p " + base).c_str());
  bool ok = true;
  for (int i = 1; i <= 2; ++i) {
    const std::string cmd = cli + " run --preset flicker-300 --seed 42 --out " +
                            base + "/d" + std::to_string(i);
    if (std::system(cmd.c_str()) != 0) ok = false;
  }
  const std::string csv1 = slurp(base + "/d1/run.csv");
  const std::string csv2 = slurp(base + "/d2/run.csv");
  const std::string js1 = slurp(base + "/d1/summary.json");
  const std::string js2 = slurp(base + "/d2/summary.json");
  ok = ok && !csv1.empty() && csv1 == csv2 && !js1.empty() && js1 == js2;
  report(7, ok, "two flicker-300 seed-42 runs byte-identical", elapsed(t0));
}

// ---------------------------------------------------------------- 8
void criterion_event_conservation() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  bool ok = true;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    EventStream ev;
    std::uint64_t t = 0;
    const int n = static_cast<int>(rng() % 800);
    for (int i = 0; i < n; ++i) {
      t += rng() % 7000;
      if (t >= 1000000) break;
      ev.push_back({t, static_cast<std::uint16_t>(rng() % 12),
                    static_cast<std::uint16_t>(rng() % 9),
                    static_cast<std::uint8_t>(rng() % 2)});
    }
    auto frames = accumulate_frames(ev, 8, 12, 9, 1000000);
    std::uint64_t total = 0;
    for (const Frame& f : frames) total += f.total_events();
    if (total != ev.size() || frames.size() != 8) ok = false;
  }
  report(8, ok, "100 random streams conserved through frame accumulation",
         elapsed(t0));
}

// ---------------------------------------------------------------- 10
void criterion_protocol(const std::string& stub) {
  auto t0 = Clock::now();
  ScenarioConfig cfg = preset("quiet", 5);
  cfg.scene.duration_s = 10;
  cfg.controller.warmup_s = 3;
  cfg.finalize_and_validate();

  ScenarioConfig internal = cfg;
  internal.detector.kind = DetectorKind::Fixed;
  internal.detector.fixed_conf_obj = 0.8;
  internal.detector.fixed_conf_face = 0.7;
  RunLog a = run_loop(internal.scene, internal.detector, internal.controller,
                      internal.bounds, internal.mapping,
                      internal.initial_biases);

  ScenarioConfig external = cfg;
  external.detector.kind = DetectorKind::External;
  external.detector.external_cmd =
      stub + " --conf-obj 0.8 --conf-face 0.7 --detected 1";
  RunLog b = run_loop(external.scene, external.detector, external.controller,
                      external.bounds, external.mapping,
                      external.initial_biases);

  bool ok = a.records.size() == b.records.size();
  for (std::size_t i = 0; ok && i < a.records.size(); ++i) {
    const SecondRecord& ra = a.records[i];
    const SecondRecord& rb = b.records[i];
    ok = ra.phase == rb.phase && ra.biases == rb.biases &&
         ra.metric == rb.metric && ra.mean_conf_obj == rb.mean_conf_obj &&
         ra.mean_conf_face == rb.mean_conf_face && ra.events == rb.events;
  }
  ok = ok && a.summary.final_biases == b.summary.final_biases &&
       a.summary.triggers == b.summary.triggers;
  report(10, ok, "stub external detector run log matches the internal stub",
         elapsed(t0));
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::string stub;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string a = argv[i];
    if (a == "--cli") cli = argv[i + 1];
    if (a == "--stub") stub = argv[i + 1];
  }
  if (cli.empty() || stub.empty()) {
    std::fprintf(stderr,
                 "usage: autobias_acceptance --cli <autobias> --stub "
                 "<stub_detector>\n");
    return 2;
  }

  criterion_metric_exactness();
  criterion_optimizer();
  criterion_pixel_invariants();
  criterion_flicker_attenuation();

  std::printf("running the five flicker presets, three seeds each...\n");
  std::fflush(stdout);
  const std::vector<PresetRun> runs = run_preset_matrix();
  criterion_end_to_end(runs);
  criterion_table3_direction(runs);
  criterion_determinism(cli);
  criterion_event_conservation();
  criterion_performance(runs);
  criterion_protocol(stub);

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria failed\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
