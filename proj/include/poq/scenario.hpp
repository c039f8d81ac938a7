#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "poq/protocols.hpp"

namespace poq {

// Configuration or I/O problem in a scenario run. The CLI reports the
// message and exits nonzero.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Protocol { dj, readout, classical_sweep, lower_bound, halting_demo };
enum class ReportFormat { json, csv };

std::string_view to_string(Protocol protocol);

// Parsed scenario file. Referenced oracle and table files are resolved and
// inlined at load time, so a config is self-contained afterwards.
struct ScenarioConfig {
  std::string name;
  Protocol protocol = Protocol::dj;
  int n = 0;
  // Inline oracle document (see oracle_from_json); empty for protocols that
  // build their own oracle (lower_bound, halting_demo).
  nlohmann::json oracle;
  DJConfig dj;
  std::optional<std::uint64_t> z;       // readout reference string
  std::uint64_t budget = 1000;          // halting_demo step budget
  std::optional<std::uint64_t> seed;
  int trials = 1;
  std::string out_path;                 // empty: write to stdout
  ReportFormat format = ReportFormat::json;

  static ScenarioConfig load(const std::filesystem::path& path);
  static ScenarioConfig from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir);
};

// Command line overrides; unset fields fall back to the scenario file.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> out_path;
  std::optional<ReportFormat> format;
  int max_width = kDefaultMaxWidth;
  bool dump_state = false;
};

// One protocol execution. For dj, trial is the repetition index; for
// readout and classical_sweep rows it is the queried string x.
struct RunRecord {
  std::string protocol;
  std::uint64_t trial = 0;
  int n = 0;
  std::string regime;
  Complex inner;
  double probability = 0.0;
  std::string verdict;
  int oracle_calls = 0;
  std::optional<std::uint64_t> seed;
  std::optional<nlohmann::json> state;  // only with RunOptions::dump_state
};

struct ResultSet {
  std::string scenario;
  std::string protocol;
  int n = 0;
  std::vector<RunRecord> records;
  double mean_probability = 0.0;
  double stderr_probability = 0.0;
  // Protocol-specific outputs (recovered tables, certificates, ...) merged
  // into the top level of the JSON report.
  nlohmann::json extras = nlohmann::json::object();
};

ResultSet run_scenario(const ScenarioConfig& config,
                       const RunOptions& options = {});

// Deterministic rendering: byte-identical for identical result sets.
std::string render_report(const ResultSet& results, ReportFormat format);

// Writes to the path, or to stdout when the path is empty.
void write_report(const ResultSet& results, const std::string& path,
                  ReportFormat format);

}  // namespace poq
