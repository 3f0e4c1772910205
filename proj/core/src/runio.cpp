#include "graphbandit/runio.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "graphbandit/errors.hpp"

namespace graphbandit {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[40];
  // %.17g round-trips; try the shorter forms first.
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    if (std::strtod(buffer, nullptr) == value) break;
  }
  return buffer;
}

std::string results_csv(const std::vector<RunResult>& rows) {
  std::ostringstream out;
  out << "config_id,seed,T,final_regret,final_Q,clip_events,cumulative_loss,"
         "realized_corruption,status\n";
  for (const auto& row : rows) {
    out << row.config_id << ',' << row.seed << ',' << row.horizon << ','
        << format_double(row.final_regret) << ',' << format_double(row.final_q)
        << ',' << row.clip_events << ',' << format_double(row.cumulative_loss)
        << ',' << format_double(row.realized_corruption) << ','
        << (row.failed ? "error:" + row.error : "ok") << '\n';
  }
  return out.str();
}

std::string trace_csv(const Trace& trace) {
  if (trace.gamma.empty()) {
    throw MissingTraceField("per-round trace was not recorded at this level");
  }
  std::ostringstream out;
  out << "t,arm,loss,gamma,beta,entropy,q_istar\n";
  for (std::size_t t = 0; t < trace.arms.size(); ++t) {
    out << (t + 1) << ',' << trace.arms[t] << ','
        << format_double(trace.incurred[t]) << ','
        << format_double(trace.gamma[t]) << ',' << format_double(trace.beta[t])
        << ',' << format_double(trace.entropy[t]) << ','
        << format_double(trace.q_opt[t]) << '\n';
  }
  return out.str();
}

std::string summary_json(const SweepResult& result, const std::string& echo_json,
                         const std::vector<std::string>& warnings) {
  nlohmann::json doc;
  doc["resolved"] = echo_json.empty()
                        ? nlohmann::json::object()
                        : nlohmann::json::parse(echo_json);
  doc["warnings"] = warnings;
  auto cells = nlohmann::json::array();
  for (const auto& cell : result.cells) {
    nlohmann::json c;
    c["config_id"] = cell.config_id;
    c["group_id"] = cell.group_id;
    c["T"] = cell.horizon;
    c["seeds"] = cell.seeds;
    c["mean_regret"] = cell.mean_regret;
    c["stderr_regret"] = cell.stderr_regret;
    cells.push_back(std::move(c));
  }
  doc["cells"] = cells;
  auto fits = nlohmann::json::array();
  for (const auto& fit : result.fits) {
    nlohmann::json f;
    f["group_id"] = fit.group_id;
    f["loglog_slope"] = fit.loglog_slope;
    f["cells"] = fit.cells;
    fits.push_back(std::move(f));
  }
  doc["scaling_fits"] = fits;
  int failures = 0;
  for (const auto& row : result.rows) failures += row.failed ? 1 : 0;
  doc["runs"] = result.rows.size();
  doc["failures"] = failures;
  return doc.dump(2) + "\n";
}

std::string plot_script_text(const std::string& results_csv_name) {
  std::ostringstream out;
  out << "#!/usr/bin/env python3\n"
         "\"\"\"Regret-vs-T curves with error bars, from a results CSV.\"\"\"\n"
         "import csv\n"
         "import math\n"
         "import sys\n"
         "from collections import defaultdict\n"
         "\n"
         "import matplotlib\n"
         "matplotlib.use(\"Agg\")\n"
         "import matplotlib.pyplot as plt\n"
         "\n"
         "path = sys.argv[1] if len(sys.argv) > 1 else \""
      << results_csv_name
      << "\"\n"
         "rows = []\n"
         "with open(path) as fh:\n"
         "    for row in csv.DictReader(fh):\n"
         "        if row[\"status\"] != \"ok\":\n"
         "            continue\n"
         "        rows.append(row)\n"
         "if not rows:\n"
         "    raise SystemExit(\"no successful rows in \" + path)\n"
         "\n"
         "groups = defaultdict(lambda: defaultdict(list))\n"
         "for row in rows:\n"
         "    cid = row[\"config_id\"]\n"
         "    group = cid.split(\",\", 1)[0] if \"run.T=\" in cid else cid\n"
         "    groups[group][int(row[\"T\"])].append(float(row[\"final_regret\"]))\n"
         "\n"
         "plt.figure(figsize=(7, 5))\n"
         "for group, by_t in sorted(groups.items()):\n"
         "    ts = sorted(by_t)\n"
         "    means = [sum(by_t[t]) / len(by_t[t]) for t in ts]\n"
         "    errs = []\n"
         "    for t in ts:\n"
         "        vals = by_t[t]\n"
         "        m = sum(vals) / len(vals)\n"
         "        var = sum((v - m) ** 2 for v in vals)\n"
         "        errs.append(math.sqrt(var / (len(vals) - 1) / len(vals)) if len(vals) > 1 else 0.0)\n"
         "    plt.errorbar(ts, means, yerr=errs, marker=\"o\", capsize=3, label=group)\n"
         "\n"
         "plt.xscale(\"log\")\n"
         "plt.yscale(\"log\")\n"
         "plt.xlabel(\"T\")\n"
         "plt.ylabel(\"regret\")\n"
         "plt.legend(fontsize=7)\n"
         "plt.tight_layout()\n"
         "plt.savefig(\"regret_vs_T.png\", dpi=150)\n"
         "print(\"wrote regret_vs_T.png\")\n";
  return out.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.good()) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("atomic rename failed for " + path + ": " + ec.message());
  }
}

}  // namespace graphbandit
