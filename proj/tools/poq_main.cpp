#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "poq/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"phase-decorated oracle simulator"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "execute a scenario file");
  std::string scenario_path;
  run->add_option("--scenario", scenario_path, "path to a scenario JSON file")
      ->required();
  std::optional<std::uint64_t> seed;
  run->add_option("--seed", seed, "override the scenario seed");
  std::optional<int> trials;
  run->add_option("--trials", trials, "override the scenario trial count");
  std::optional<std::string> out_path;
  run->add_option("--out", out_path,
                  "override the output path (empty scenario default: stdout)");
  std::optional<std::string> format;
  run->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  int max_width = poq::kDefaultMaxWidth;
  run->add_option("--n-max", max_width, "cap on the register width")
      ->check(CLI::PositiveNumber);
  bool dump_state = false;
  run->add_flag("--dump-state", dump_state,
                "attach the final state vector to every record");

  CLI11_PARSE(app, argc, argv);

  try {
    const poq::ScenarioConfig config = poq::ScenarioConfig::load(scenario_path);
    poq::RunOptions options;
    options.seed = seed;
    options.trials = trials;
    options.out_path = out_path;
    if (format.has_value()) {
      options.format = *format == "csv" ? poq::ReportFormat::csv
                                        : poq::ReportFormat::json;
    }
    options.max_width = max_width;
    options.dump_state = dump_state;

    const poq::ResultSet results = poq::run_scenario(config, options);
    const std::string out = options.out_path.value_or(config.out_path);
    const poq::ReportFormat effective_format =
        options.format.value_or(config.format);
    poq::write_report(results, out, effective_format);
    if (!out.empty()) {
      std::cerr << "wrote " << results.records.size() << " record(s) to " << out
                << " (mean probability "
                << results.mean_probability << ")\n";
    }
    return 0;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 1;
  }
}
