#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "autobias/controller.hpp"
#include "autobias/event_io.hpp"
#include "autobias/frames.hpp"
#include "autobias/run_output.hpp"
#include "autobias/scenario.hpp"
#include "autobias/sensor.hpp"

namespace fs = std::filesystem;
using namespace autobias;

namespace {

struct CommonOpts {
  std::string preset_name;
  std::string scenario_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir = ".";
  int fps = 0;
  bool verbose = false;
};

ScenarioConfig resolve_scenario(const CommonOpts& o) {
  ScenarioConfig cfg;
  if (!o.scenario_path.empty()) {
    cfg = load_scenario(o.scenario_path);
  } else if (!o.preset_name.empty()) {
    cfg = preset(o.preset_name);
    cfg.finalize_and_validate();
  } else {
    throw ConfigError("either --preset or --scenario is required");
  }
  if (o.seed_set) cfg.scene.seed = o.seed;
  if (o.fps > 0) cfg.controller.fps = o.fps;
  if (const char* cmd = std::getenv("AUTOBIAS_DETECTOR_CMD");
      cmd && *cmd != '\0') {
    cfg.detector.kind = DetectorKind::External;
    cfg.detector.external_cmd = cmd;
  }
  return cfg;
}

void add_common(CLI::App* app, CommonOpts& o, bool with_out = true) {
  app->add_option("--preset", o.preset_name, "built-in scenario name");
  app->add_option("--scenario", o.scenario_path, "scenario JSON file");
  app->add_option("--seed", o.seed, "random seed")
      ->each([&o](const std::string&) { o.seed_set = true; });
  if (with_out) app->add_option("--out", o.out_dir, "output directory");
  app->add_option("--fps", o.fps, "detector frame rate (default 8)");
  app->add_flag("--verbose", o.verbose, "progress output on stderr");
}

int cmd_run(const CommonOpts& o) {
  ScenarioConfig cfg = resolve_scenario(o);
  if (o.verbose) {
    std::cerr << "running '" << cfg.label << "' seed " << cfg.scene.seed
              << " for " << cfg.scene.duration_s << " s\n";
  }
  RunLog log = run_loop(cfg.scene, cfg.detector, cfg.controller, cfg.bounds,
                        cfg.mapping, cfg.initial_biases);
  fs::create_directories(o.out_dir);
  {
    std::ofstream csv(fs::path(o.out_dir) / "run.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write run.csv");
    write_run_csv(csv, log);
  }
  {
    std::ofstream js(fs::path(o.out_dir) / "summary.json", std::ios::binary);
    if (!js) throw std::runtime_error("cannot write summary.json");
    js << summary_json(cfg.label, cfg.scene.seed, log);
  }
  if (o.verbose) {
    std::cerr << "final biases " << to_string(log.summary.final_biases)
              << ", triggers " << log.summary.triggers << ", evaluations "
              << log.summary.evaluations << "\n";
  }
  return 0;
}

int cmd_sim(const CommonOpts& o, const std::string& biases_csv,
            const std::string& format, double duration_override,
            const std::string& dump_frames_dir) {
  ScenarioConfig cfg = resolve_scenario(o);
  if (duration_override > 0) cfg.scene.duration_s = duration_override;
  cfg.finalize_and_validate();

  BiasVector biases;
  if (!biases_csv.empty()) {
    int vals[5];
    if (std::sscanf(biases_csv.c_str(), "%d,%d,%d,%d,%d", &vals[0], &vals[1],
                    &vals[2], &vals[3], &vals[4]) != 5) {
      throw ConfigError("--biases: expected diff_on,diff_off,fo,hpf,refr");
    }
    biases = BiasVector{vals[0], vals[1], vals[2], vals[3], vals[4]};
  }
  const PixelParams params = map_bias_to_params(biases, cfg.bounds, cfg.mapping);

  fs::create_directories(o.out_dir);
  const std::string ext = format == "bin" ? ".bin" : ".csv";
  const fs::path out_path = fs::path(o.out_dir) / ("events" + ext);
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + out_path.string());
  if (format != "bin") os << "t_us,x,y,p\n";

  SensorSim sim(cfg.scene, params, cfg.controller.sim_threads);
  FrameAccumulator acc(cfg.controller.fps, cfg.scene.width, cfg.scene.height);
  std::vector<Frame> frames;
  const bool dump = !dump_frames_dir.empty();
  if (dump) fs::create_directories(dump_frames_dir);

  const std::uint64_t end_us = cfg.scene.duration_us();
  const std::uint64_t chunk_us = 250000;
  std::uint64_t events_total = 0;
  for (std::uint64_t t = 0; t < end_us;) {
    const std::uint64_t stop = std::min(end_us, t + chunk_us);
    const EventStream& ev = sim.advance(stop);
    events_total += ev.size();
    if (format == "bin") {
      write_events_bin(os, ev);
    } else {
      char buf[64];
      for (const Event& e : ev) {
        const int n = std::snprintf(buf, sizeof(buf), "%llu,%u,%u,%u\n",
                                    static_cast<unsigned long long>(e.t_us),
                                    unsigned(e.x), unsigned(e.y),
                                    unsigned(e.polarity));
        os.write(buf, n);
      }
    }
    if (dump) {
      acc.add(ev);
      frames.clear();
      acc.drain_until(stop, frames);
      for (const Frame& f : frames) {
        char name[64];
        std::snprintf(name, sizeof(name), "frame_%06u.pgm", f.index);
        std::ofstream pgm(fs::path(dump_frames_dir) / name, std::ios::binary);
        write_frame_pgm(pgm, f);
      }
    }
    t = stop;
  }
  if (o.verbose) {
    std::cerr << events_total << " events -> " << out_path.string() << "\n";
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& paths) {
  std::vector<RunSummaryFile> summaries;
  for (const std::string& p : paths) summaries.push_back(read_summary_json(p));
  std::cout << report_table(summaries);
  return 0;
}

int cmd_convert(const std::string& in_path, const std::string& out_path) {
  write_events_file(out_path, read_events_file(in_path));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"event-camera autobiasing engine"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  CLI::App* run = app.add_subcommand("run", "closed-loop run -> run.csv + summary.json");
  add_common(run, run_opts);

  CommonOpts sim_opts;
  std::string biases_csv;
  std::string format = "csv";
  double duration_override = 0;
  std::string dump_frames;
  CLI::App* simc = app.add_subcommand("sim", "open-loop event simulation -> events file");
  add_common(simc, sim_opts);
  simc->add_option("--biases", biases_csv, "diff_on,diff_off,fo,hpf,refr (default zeros)");
  simc->add_option("--format", format, "csv|bin")
      ->check(CLI::IsMember({"csv", "bin"}));
  simc->add_option("--duration", duration_override, "override duration (s)");
  simc->add_option("--dump-frames", dump_frames, "write accumulation frames as PGM");

  std::vector<std::string> report_paths;
  CLI::App* rep = app.add_subcommand("report", "final-bias table from summary.json files");
  rep->add_option("summaries", report_paths, "summary.json paths")->required();

  std::string conv_in, conv_out;
  CLI::App* conv = app.add_subcommand("convert", "convert events between csv and bin");
  conv->add_option("input", conv_in, "input events file")->required();
  conv->add_option("output", conv_out, "output events file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (simc->parsed()) {
      return cmd_sim(sim_opts, biases_csv, format, duration_override, dump_frames);
    }
    if (rep->parsed()) return cmd_report(report_paths);
    if (conv->parsed()) return cmd_convert(conv_in, conv_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
