#ifndef B4NS_EXPERIMENTS_HPP
#define B4NS_EXPERIMENTS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace b4ns {

struct ExperimentConfig {
  std::string scenario;
  std::map<std::string, std::string> params;  // flat key=value document
  std::uint64_t seed = 1;
  bool seed_set = false;
  int threads = 1;
  std::string out_dir = ".";
  bool plot = false;

  double get(const std::string& key, double fallback) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
};

// parses a flat key=value file ('#' comments); scenario-specific key
// validation happens in run_scenario
ExperimentConfig load_config(const std::string& scenario, const std::string& path);

struct SeriesData {
  bool present = false;
  std::vector<double> xs, ys;       // log-log plot data (N, norm)
  double fit_slope = 0, fit_intercept = 0;
  double theory_slope = 0;
};

struct ResultRecord {
  std::string scenario;
  std::vector<std::pair<std::string, std::string>> inputs;  // echo, fixed order
  std::vector<std::pair<std::string, double>> scalars;      // fixed order
  bool pass = false;
  double wall_time_s = 0;  // console diagnostics only; never serialized
  SeriesData series;

  double scalar(const std::string& key) const;
};

// deterministic given (config, seed); throws on unknown config keys
ResultRecord run_scenario(const ExperimentConfig& config);

// CSV (one row per record, fixed columns), JSON (mirror of the records), and
// per-record SVG slope plots for records carrying series data
void emit_report(const std::vector<ResultRecord>& records, const std::string& out_dir,
                 bool csv, bool json, bool svg);

// Independent route for the p-variation acceptance check: exhaustive
// enumeration over all sub-partitions, accumulated in the same left-to-right
// order as the dynamic program so agreement is exact.
double p_variation_enumerated(const std::vector<double>& scalar_path, double p,
                              bool with_endpoint_jump);

const std::vector<std::string>& scenario_names();

}  // namespace b4ns

#endif
