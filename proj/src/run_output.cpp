#include "autobias/run_output.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "autobias/scenario.hpp"

namespace autobias {

using nlohmann::json;

void write_run_csv(std::ostream& os, const RunLog& log) {
  os << "t_s,phase,diff_on,diff_off,fo,hpf,refr,efficacy,conf_obj,conf_face,"
        "events\n";
  char buf[256];
  for (const SecondRecord& r : log.records) {
    const int n = std::snprintf(
        buf, sizeof(buf), "%d,%s,%d,%d,%d,%d,%d,%.6f,%.6f,%.6f,%llu\n", r.t_s,
        to_string(r.phase), r.biases.diff_on, r.biases.diff_off, r.biases.fo,
        r.biases.hpf, r.biases.refr, r.metric, r.mean_conf_obj,
        r.mean_conf_face, static_cast<unsigned long long>(r.events));
    os.write(buf, n);
  }
}

namespace {
json biases_json(const BiasVector& b) {
  return json{{"diff_on", b.diff_on},
              {"diff_off", b.diff_off},
              {"fo", b.fo},
              {"hpf", b.hpf},
              {"refr", b.refr}};
}

json means_json(const WindowMeans& m) {
  return json{{"efficacy", m.metric},
              {"conf_obj", m.conf_obj},
              {"conf_face", m.conf_face}};
}
}  // namespace

std::string summary_json(const std::string& scenario_label, std::uint64_t seed,
                         const RunLog& log) {
  json j;
  j["scenario"] = scenario_label;
  j["seed"] = seed;
  j["final_biases"] = biases_json(log.summary.final_biases);
  j["triggers"] = log.summary.triggers;
  j["evaluations"] = log.summary.evaluations;
  j["convergences"] = log.summary.convergences;
  j["detector_timeouts"] = log.summary.detector_timeouts;
  j["warmup_means"] = means_json(log.summary.warmup_means);
  j["final_means"] = means_json(log.summary.final_means);
  return j.dump(2) + "\n";
}

RunSummaryFile read_summary_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("summary: cannot open " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const std::exception& e) {
    throw ConfigError("summary: parse error in " + path + ": " + e.what());
  }
  RunSummaryFile s;
  try {
    s.scenario = j.at("scenario").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    const json& b = j.at("final_biases");
    s.final_biases.diff_on = b.at("diff_on").get<int>();
    s.final_biases.diff_off = b.at("diff_off").get<int>();
    s.final_biases.fo = b.at("fo").get<int>();
    s.final_biases.hpf = b.at("hpf").get<int>();
    s.final_biases.refr = b.at("refr").get<int>();
    s.triggers = j.at("triggers").get<int>();
    s.evaluations = j.at("evaluations").get<int>();
    auto means = [](const json& m, WindowMeans& out) {
      out.metric = m.at("efficacy").get<double>();
      out.conf_obj = m.at("conf_obj").get<double>();
      out.conf_face = m.at("conf_face").get<double>();
    };
    means(j.at("warmup_means"), s.warmup_means);
    means(j.at("final_means"), s.final_means);
  } catch (const std::exception& e) {
    throw ConfigError("summary: missing field in " + path + ": " + e.what());
  }
  return s;
}

namespace {
std::string percent_change(double before, double after) {
  char buf[32];
  if (before <= 0.0) {
    return after > 0.0 ? "+inf%" : "0%";
  }
  const double pct = (after - before) / before * 100.0;
  std::snprintf(buf, sizeof(buf), "%+.0f%%", pct);
  return buf;
}
}  // namespace

std::string report_table(const std::vector<RunSummaryFile>& summaries) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-14s %8s %8s %6s %5s %6s %10s %10s %10s\n",
                "scenario", "diff_off", "diff_on", "fo", "hpf", "refr",
                "d_obj", "d_face", "d_metric");
  os << buf;
  for (const RunSummaryFile& s : summaries) {
    std::snprintf(buf, sizeof(buf),
                  "%-14s %8d %8d %6d %5d %6d %10s %10s %10s\n",
                  s.scenario.c_str(), s.final_biases.diff_off,
                  s.final_biases.diff_on, s.final_biases.fo,
                  s.final_biases.hpf, s.final_biases.refr,
                  percent_change(s.warmup_means.conf_obj, s.final_means.conf_obj).c_str(),
                  percent_change(s.warmup_means.conf_face, s.final_means.conf_face).c_str(),
                  percent_change(s.warmup_means.metric, s.final_means.metric).c_str());
    os << buf;
  }
  return os.str();
}

}  // namespace autobias
