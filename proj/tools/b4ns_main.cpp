#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "b4ns/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"biharmonic NLS experiment driver"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
  bool plot = false;

  std::vector<CLI::App*> subs;
  for (const auto& name : b4ns::scenario_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " scenario");
    sub->add_option("--config", config_path, "key=value config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the config seed")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--plot", plot, "emit SVG slope plots");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);
  const std::string scenario = app.get_subcommands().front()->get_name();

  if (const char* env = std::getenv("B4NS_OUT")) out_dir = env;

  try {
    b4ns::ExperimentConfig cfg = b4ns::load_config(scenario, config_path);
    if (seed_given) {
      cfg.seed = seed;
      cfg.seed_set = true;
    }
    cfg.threads = threads;
    cfg.out_dir = out_dir;
    cfg.plot = plot;

    b4ns::ResultRecord rec = b4ns::run_scenario(cfg);
    b4ns::emit_report({rec}, out_dir, true, true, plot);

    std::cout << scenario << ": " << (rec.pass ? "pass" : "FAIL") << "  ("
              << rec.wall_time_s << " s)\n";
    for (const auto& [k, v] : rec.scalars) std::cout << "  " << k << " = " << v << "\n";
    std::cout << "report written to " << out_dir << "\n";
    return rec.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
