#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "autobias/controller.hpp"

namespace autobias {

/// Fixed-column timeline:
/// t_s,phase,diff_on,diff_off,fo,hpf,refr,efficacy,conf_obj,conf_face,events
void write_run_csv(std::ostream& os, const RunLog& log);

std::string summary_json(const std::string& scenario_label, std::uint64_t seed,
                         const RunLog& log);

struct RunSummaryFile {
  std::string scenario;
  std::uint64_t seed = 0;
  BiasVector final_biases;
  int triggers = 0;
  int evaluations = 0;
  WindowMeans warmup_means;
  WindowMeans final_means;
};

RunSummaryFile read_summary_json(const std::string& path);

/// Renders the final-bias report table (one row per summary) with percent
/// changes of the means between the warmup window and the final window.
std::string report_table(const std::vector<RunSummaryFile>& summaries);

}  // namespace autobias
