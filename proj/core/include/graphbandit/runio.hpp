#pragma once

#include <string>
#include <vector>

#include "graphbandit/harness.hpp"

namespace graphbandit {

// Shortest round-trippable decimal form of a double; keeps CSV output
// bit-reproducible across runs.
std::string format_double(double value);

// "config_id,seed,T,final_regret,final_Q,clip_events,cumulative_loss,
//  realized_corruption,status"
std::string results_csv(const std::vector<RunResult>& rows);

// "t,arm,loss,gamma,beta,entropy,q_istar"
std::string trace_csv(const Trace& trace);

// Aggregated cells, fits, echo and warnings in one JSON document.
std::string summary_json(const SweepResult& result, const std::string& echo_json,
                         const std::vector<std::string>& warnings);

// Standalone matplotlib script that renders regret-vs-T curves with error
// bars from a results CSV.
std::string plot_script_text(const std::string& results_csv_name);

// Writes via a temporary file in the same directory plus rename, so an
// interrupted run leaves no partial artifact.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace graphbandit
