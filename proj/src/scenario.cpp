#include "poq/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <utility>

#include "poq/classical.hpp"
#include "poq/rng.hpp"
#include "poq/serialize.hpp"

namespace poq {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::dj: return "dj";
    case Protocol::readout: return "readout";
    case Protocol::classical_sweep: return "classical_sweep";
    case Protocol::lower_bound: return "lower_bound";
    case Protocol::halting_demo: return "halting_demo";
  }
  throw std::invalid_argument("unknown protocol");
}

namespace {

bool is_uint(const json& value) {
  return value.is_number_unsigned() ||
         (value.is_number_integer() && value.get<std::int64_t>() >= 0);
}

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

json parse_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open " + path.string());
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  try {
    return json::parse(text);
  } catch (const json::parse_error& error) {
    throw ConfigError(path.string() + ":" +
                      std::to_string(line_of_byte(text, error.byte)) + ": " +
                      error.what());
  }
}

Protocol protocol_from_string(const std::string& s) {
  if (s == "dj") return Protocol::dj;
  if (s == "readout") return Protocol::readout;
  if (s == "classical_sweep") return Protocol::classical_sweep;
  if (s == "lower_bound") return Protocol::lower_bound;
  if (s == "halting_demo") return Protocol::halting_demo;
  throw ConfigError("unknown protocol '" + s +
                    "', want dj, readout, classical_sweep, lower_bound or "
                    "halting_demo");
}

ReportFormat format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  throw ConfigError("unknown format '" + s + "', want json or csv");
}

std::string phase_kind(const json& oracle_doc) {
  if (oracle_doc.is_object() && oracle_doc.contains("phases") &&
      oracle_doc["phases"].is_object()) {
    return oracle_doc["phases"].value("kind", "");
  }
  return "";
}

// Loads a referenced oracle file and splices any referenced table file into
// the phases, so the returned document stands on its own.
json resolve_oracle_doc(const json& raw, const fs::path& base_dir, int n) {
  if (!raw.is_object()) {
    throw ConfigError("scenario field \"oracle\" must be an object");
  }
  json doc = raw;
  if (doc.contains("file")) {
    if (!doc["file"].is_string()) {
      throw ConfigError("oracle \"file\" must be a path string");
    }
    doc = parse_json_file(base_dir / doc["file"].get<std::string>());
    if (!doc.is_object()) {
      throw ConfigError("referenced oracle file must hold a JSON object");
    }
  }
  if (doc.contains("phases") && doc["phases"].is_object() &&
      doc["phases"].contains("h_file")) {
    const json& ref = doc["phases"]["h_file"];
    if (!ref.is_string()) {
      throw ConfigError("phases \"h_file\" must be a path string");
    }
    const json table_doc = parse_json_file(base_dir / ref.get<std::string>());
    HaltingTableFile table;
    try {
      table = halting_table_from_json(table_doc);
    } catch (const std::invalid_argument& error) {
      throw ConfigError(std::string("bad table file: ") + error.what());
    }
    if (table.n != n) {
      throw ConfigError("table file width " + std::to_string(table.n) +
                        " does not match scenario width " + std::to_string(n));
    }
    std::string bits(table.h.size(), '0');
    for (std::size_t i = 0; i < table.h.size(); ++i) {
      bits[i] = table.h[i] ? '1' : '0';
    }
    doc["phases"] = json{{"kind", "encode_function"}, {"h", bits}};
  }
  if (doc.contains("n")) {
    if (!doc["n"].is_number_integer() || doc["n"].get<int>() != n) {
      throw ConfigError("oracle width does not match the scenario width " +
                        std::to_string(n));
    }
  } else {
    doc["n"] = n;  // inline oracles inherit the scenario width
  }
  return doc;
}

// Oracle for one trial. Underspecified uniform_random phases draw a fresh
// substream seed from the master seed, so repeated trials see independent
// profiles while the whole run stays a pure function of (config, seed).
OracleSpec build_trial_oracle(const json& doc,
                              std::optional<std::uint64_t> master_seed,
                              std::uint64_t trial,
                              std::optional<std::uint64_t>* used_seed) {
  if (phase_kind(doc) == "uniform_random" && !doc["phases"].contains("seed")) {
    if (!master_seed.has_value()) {
      throw ConfigError(
          "scenario draws random phases but no seed was given; add \"seed\" "
          "to the scenario or pass --seed");
    }
    const std::uint64_t trial_seed = fold_in(*master_seed, trial);
    json patched = doc;
    patched["phases"]["seed"] = trial_seed;
    if (used_seed != nullptr) *used_seed = trial_seed;
    try {
      return oracle_from_json(patched);
    } catch (const std::invalid_argument& error) {
      throw ConfigError(std::string("bad oracle: ") + error.what());
    }
  }
  try {
    return oracle_from_json(doc);
  } catch (const std::invalid_argument& error) {
    throw ConfigError(std::string("bad oracle: ") + error.what());
  }
}

struct Effective {
  std::optional<std::uint64_t> seed;
  int trials = 1;
  std::string out_path;
  ReportFormat format = ReportFormat::json;
};

Effective effective_options(const ScenarioConfig& config,
                            const RunOptions& options) {
  Effective effective;
  effective.seed = options.seed.has_value() ? options.seed : config.seed;
  effective.trials = options.trials.value_or(config.trials);
  effective.out_path = options.out_path.value_or(config.out_path);
  effective.format = options.format.value_or(config.format);
  if (effective.trials < 1) {
    throw ConfigError("trials must be at least 1");
  }
  return effective;
}

void finish_summary(ResultSet& results) {
  const std::size_t count = results.records.size();
  if (count == 0) return;
  double sum = 0.0;
  for (const RunRecord& record : results.records) sum += record.probability;
  const double mean = sum / static_cast<double>(count);
  double variance = 0.0;
  if (count > 1) {
    for (const RunRecord& record : results.records) {
      const double d = record.probability - mean;
      variance += d * d;
    }
    variance /= static_cast<double>(count - 1);
  }
  results.mean_probability = mean;
  results.stderr_probability =
      count > 1 ? std::sqrt(variance / static_cast<double>(count)) : 0.0;
}

void run_dj(const ScenarioConfig& config, const RunOptions& options,
            const Effective& effective, ResultSet& results) {
  DJConfig dj = config.dj;
  if (dj.phase_regime.empty()) {
    dj.phase_regime = phase_kind(config.oracle) + "+" +
                      std::string(to_string(dj.middle_op)) + "+" +
                      std::string(to_string(dj.second_call));
  }
  for (int trial = 0; trial < effective.trials; ++trial) {
    std::optional<std::uint64_t> trial_seed;
    const OracleSpec oracle =
        build_trial_oracle(config.oracle, effective.seed,
                           static_cast<std::uint64_t>(trial), &trial_seed);
    StateVector final_state = StateVector::basis_state(1, BasisLabel{0, 0});
    const DJOutcome outcome =
        dj_run(oracle, dj, options.max_width,
               options.dump_state ? &final_state : nullptr);
    RunRecord record;
    record.protocol = "dj";
    record.trial = static_cast<std::uint64_t>(trial);
    record.n = config.n;
    record.regime = dj.phase_regime;
    record.inner = outcome.inner;
    record.probability = outcome.probability;
    record.verdict = std::string(to_string(outcome.verdict));
    record.oracle_calls = outcome.oracle_calls;
    record.seed = trial_seed;
    if (options.dump_state) record.state = state_to_json(final_state);
    results.records.push_back(std::move(record));
  }
}

std::vector<std::uint8_t> encoded_table(const json& oracle_doc) {
  if (phase_kind(oracle_doc) != "encode_function") {
    throw ConfigError(
        "this protocol needs phases of kind encode_function so the hidden "
        "table is known");
  }
  const json& phases = oracle_doc["phases"];
  if (!phases.contains("h") || !phases["h"].is_string()) {
    throw ConfigError("phases of kind encode_function need a bit string \"h\"");
  }
  const std::string bits = phases["h"].get<std::string>();
  std::vector<std::uint8_t> h(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw ConfigError("table bit strings may only contain 0 and 1");
    }
    h[i] = static_cast<std::uint8_t>(bits[i] - '0');
  }
  return h;
}

// Shared by the readout scenario and the halting demo: recover the whole
// table hidden in the phases, one single-call readout per string.
void readout_sweep(const OracleSpec& oracle, const std::vector<std::uint8_t>& h,
                   std::uint64_t z, const ScenarioConfig& config,
                   const RunOptions& options, ResultSet& results,
                   std::vector<std::uint8_t>& recovered) {
  recovered.assign(h.size(), 0);
  recovered[z] = 1;  // h(z) = 1 was validated up front
  for (std::uint64_t x = 0; x < h.size(); ++x) {
    if (x == z) continue;
    StateVector final_state = StateVector::basis_state(1, BasisLabel{0, 0});
    ReadoutOutcome outcome;
    try {
      outcome = phase_readout_outcome(oracle, z, x,
                                      options.dump_state ? &final_state
                                                         : nullptr);
    } catch (const ProtocolViolation& error) {
      throw ProtocolViolation("scenario '" + config.name + "', x = " +
                              std::to_string(x) + ": " + error.what());
    }
    recovered[x] = static_cast<std::uint8_t>(outcome.bit);
    RunRecord record;
    record.protocol = "readout";
    record.trial = x;
    record.n = config.n;
    record.regime = "phase_readout";
    record.inner = outcome.inner;
    record.probability = outcome.probability;
    record.verdict = outcome.bit ? "1" : "0";
    record.oracle_calls = 1;
    if (options.dump_state) record.state = state_to_json(final_state);
    results.records.push_back(std::move(record));
  }
}

std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
  std::string text(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) {
    text[i] = bits[i] ? '1' : '0';
  }
  return text;
}

void run_readout(const ScenarioConfig& config, const RunOptions& options,
                 const Effective& effective, ResultSet& results) {
  const std::vector<std::uint8_t> h = encoded_table(config.oracle);
  const OracleSpec oracle = build_trial_oracle(config.oracle, effective.seed,
                                               0, nullptr);
  std::uint64_t z;
  if (config.z.has_value()) {
    z = *config.z;
    if (z >= h.size() || h[z] != 1) {
      throw ConfigError("reference string z = " + std::to_string(z) +
                        " must satisfy h(z) = 1");
    }
  } else {
    const auto it = std::find(h.begin(), h.end(), std::uint8_t{1});
    if (it == h.end()) {
      throw ConfigError(
          "the encoded table has no string with h = 1 to serve as reference");
    }
    z = static_cast<std::uint64_t>(std::distance(h.begin(), it));
  }
  std::vector<std::uint8_t> recovered;
  readout_sweep(oracle, h, z, config, options, results, recovered);
  results.extras["z"] = z;
  results.extras["h"] = bits_to_string(h);
  results.extras["recovered_h"] = bits_to_string(recovered);
  results.extras["recovered_matches"] = recovered == h;
}

void run_classical_sweep(const ScenarioConfig& config,
                         const RunOptions& options, const Effective& effective,
                         ResultSet& results) {
  (void)options;
  const OracleSpec oracle = build_trial_oracle(config.oracle, effective.seed,
                                               0, nullptr);
  const std::uint64_t count = oracle.membership().size();
  std::vector<std::uint8_t> answers(count);
  for (std::uint64_t x = 0; x < count; ++x) {
    const int answer = classical_query(oracle, x);
    answers[x] = static_cast<std::uint8_t>(answer);
    RunRecord record;
    record.protocol = "classical_sweep";
    record.trial = x;
    record.n = config.n;
    record.regime = "classical";
    record.inner = Complex{static_cast<double>(answer), 0.0};
    record.probability = static_cast<double>(answer);
    record.verdict = answer ? "1" : "0";
    record.oracle_calls = 1;
    results.records.push_back(std::move(record));
  }
  results.extras["answers"] = bits_to_string(answers);
  results.extras["all_zero"] =
      std::all_of(answers.begin(), answers.end(),
                  [](std::uint8_t a) { return a == 0; });
}

void run_lower_bound(const ScenarioConfig& config, ResultSet& results) {
  int min_queries;
  std::optional<DecisionTree> tree;
  try {
    min_queries = min_classical_queries(config.n);
    tree = find_promise_tree(config.n, min_queries);
  } catch (const std::invalid_argument& error) {
    throw ConfigError(error.what());
  }
  if (!tree.has_value()) {
    throw std::logic_error("search reported a depth it cannot witness");
  }
  RunRecord record;
  record.protocol = "lower_bound";
  record.trial = 0;
  record.n = config.n;
  record.regime = "exhaustive_search";
  record.inner = Complex{1.0, 0.0};
  record.probability = 1.0;
  record.verdict = "decided";
  record.oracle_calls = min_queries;  // classical queries for this protocol
  results.records.push_back(std::move(record));
  results.extras["min_queries"] = min_queries;
  results.extras["quantum_oracle_calls"] = 2;
  results.extras["certificate"] = tree_to_json(*tree);
  results.extras["certificate_valid"] = tree_decides_promise(*tree, config.n);
}

void run_halting_demo(const ScenarioConfig& config, const RunOptions& options,
                      ResultSet& results) {
  std::vector<std::uint8_t> h;
  try {
    h = build_halting_table(config.n, config.budget);
  } catch (const std::invalid_argument& error) {
    throw ConfigError(error.what());
  }
  if (h[0] != 1) {
    // x = 0 decodes to the machine that halts immediately, so the reference
    // string is always available.
    throw std::logic_error("halting table lost its reference string");
  }
  const OracleSpec oracle(MembershipTable::all_zeros(config.n),
                          PhaseProfile::encode_function(config.n, h));
  std::vector<std::uint8_t> recovered;
  readout_sweep(oracle, h, 0, config, options, results, recovered);

  std::vector<std::uint8_t> answers(h.size());
  for (std::uint64_t x = 0; x < h.size(); ++x) {
    answers[x] = static_cast<std::uint8_t>(classical_query(oracle, x));
  }
  results.extras["halting_table"] =
      halting_table_to_json(config.n, config.budget, h);
  results.extras["z"] = 0;
  results.extras["recovered_h"] = bits_to_string(recovered);
  results.extras["recovered_matches"] = recovered == h;
  results.extras["classical_answers"] = bits_to_string(answers);
  results.extras["classical_all_zero"] =
      std::all_of(answers.begin(), answers.end(),
                  [](std::uint8_t a) { return a == 0; });
}

std::string number_to_string(double value) {
  // nlohmann prints shortest round-trip doubles; reuse that so CSV and JSON
  // agree byte for byte on every number.
  return json(value).dump();
}

}  // namespace

ScenarioConfig ScenarioConfig::load(const fs::path& path) {
  return from_json(parse_json_file(path), path.parent_path());
}

ScenarioConfig ScenarioConfig::from_json(const json& doc,
                                         const fs::path& base_dir) {
  if (!doc.is_object()) {
    throw ConfigError("scenario must be a JSON object");
  }
  ScenarioConfig config;

  if (!doc.contains("name") || !doc["name"].is_string()) {
    throw ConfigError("scenario needs a string field \"name\"");
  }
  config.name = doc["name"].get<std::string>();

  if (!doc.contains("protocol") || !doc["protocol"].is_string()) {
    throw ConfigError("scenario needs a string field \"protocol\"");
  }
  config.protocol = protocol_from_string(doc["protocol"].get<std::string>());

  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    throw ConfigError("scenario needs an integer field \"n\"");
  }
  config.n = doc["n"].get<int>();
  if (config.n < 1 || config.n > 62) {
    throw ConfigError("scenario width must be in [1, 62]");
  }

  if (doc.contains("seed")) {
    if (!is_uint(doc["seed"])) {
      throw ConfigError("scenario \"seed\" must be a nonnegative integer");
    }
    config.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("trials")) {
    if (!doc["trials"].is_number_integer() || doc["trials"].get<int>() < 1) {
      throw ConfigError("scenario \"trials\" must be a positive integer");
    }
    config.trials = doc["trials"].get<int>();
  }
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) {
      throw ConfigError("scenario \"out\" must be a path string");
    }
    config.out_path = doc["out"].get<std::string>();
  }
  if (doc.contains("format")) {
    if (!doc["format"].is_string()) {
      throw ConfigError("scenario \"format\" must be a string");
    }
    config.format = format_from_string(doc["format"].get<std::string>());
  }
  if (doc.contains("z")) {
    if (!is_uint(doc["z"])) {
      throw ConfigError("scenario \"z\" must be a nonnegative integer");
    }
    config.z = doc["z"].get<std::uint64_t>();
  }
  if (doc.contains("budget")) {
    if (!is_uint(doc["budget"]) ||
        doc["budget"].get<std::uint64_t>() < 1) {
      throw ConfigError("scenario \"budget\" must be a positive integer");
    }
    config.budget = doc["budget"].get<std::uint64_t>();
  }
  if (doc.contains("dj")) {
    const json& dj = doc["dj"];
    if (!dj.is_object()) {
      throw ConfigError("scenario \"dj\" must be an object");
    }
    try {
      if (dj.contains("middle_op")) {
        config.dj.middle_op =
            middle_op_from_string(dj["middle_op"].get<std::string>());
      }
      if (dj.contains("second_call")) {
        config.dj.second_call =
            second_call_from_string(dj["second_call"].get<std::string>());
      }
    } catch (const std::invalid_argument& error) {
      throw ConfigError(error.what());
    }
    if (dj.contains("regime")) {
      config.dj.phase_regime = dj["regime"].get<std::string>();
    }
  }

  const bool needs_oracle = config.protocol == Protocol::dj ||
                            config.protocol == Protocol::readout ||
                            config.protocol == Protocol::classical_sweep;
  if (needs_oracle) {
    if (!doc.contains("oracle")) {
      throw ConfigError("scenario needs an \"oracle\" object");
    }
    config.oracle = resolve_oracle_doc(doc["oracle"], base_dir, config.n);
  }
  if (config.protocol == Protocol::lower_bound && config.n > 3) {
    throw ConfigError("lower_bound scenarios are exhaustive; n must be <= 3");
  }
  return config;
}

ResultSet run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  const Effective effective = effective_options(config, options);
  if (config.n > options.max_width) {
    throw ConfigError("scenario width " + std::to_string(config.n) +
                      " exceeds the cap of " + std::to_string(options.max_width) +
                      "; raise it with --n-max if this is intended");
  }
  ResultSet results;
  results.scenario = config.name;
  results.protocol = std::string(to_string(config.protocol));
  results.n = config.n;
  switch (config.protocol) {
    case Protocol::dj:
      run_dj(config, options, effective, results);
      break;
    case Protocol::readout:
      run_readout(config, options, effective, results);
      break;
    case Protocol::classical_sweep:
      run_classical_sweep(config, options, effective, results);
      break;
    case Protocol::lower_bound:
      run_lower_bound(config, results);
      break;
    case Protocol::halting_demo:
      run_halting_demo(config, options, results);
      break;
  }
  finish_summary(results);
  return results;
}

std::string render_report(const ResultSet& results, ReportFormat format) {
  if (format == ReportFormat::json) {
    json report;
    report["scenario"] = results.scenario;
    report["protocol"] = results.protocol;
    report["n"] = results.n;
    report["summary"] = json{{"trials", results.records.size()},
                             {"mean_probability", results.mean_probability},
                             {"stderr_probability", results.stderr_probability}};
    json records = json::array();
    for (const RunRecord& record : results.records) {
      json row{{"protocol", record.protocol},
               {"trial", record.trial},
               {"n", record.n},
               {"regime", record.regime},
               {"inner", json::array({record.inner.real(), record.inner.imag()})},
               {"probability", record.probability},
               {"verdict", record.verdict},
               {"oracle_calls", record.oracle_calls}};
      if (record.seed.has_value()) row["seed"] = *record.seed;
      if (record.state.has_value()) row["state"] = *record.state;
      records.push_back(std::move(row));
    }
    report["records"] = std::move(records);
    for (const auto& [key, value] : results.extras.items()) {
      report[key] = value;
    }
    return report.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "scenario,trial,n,regime,inner_re,inner_im,probability,verdict,"
         "oracle_calls,seed\n";
  for (const RunRecord& record : results.records) {
    out << results.scenario << ',' << record.trial << ',' << record.n << ','
        << record.regime << ',' << number_to_string(record.inner.real()) << ','
        << number_to_string(record.inner.imag()) << ','
        << number_to_string(record.probability) << ',' << record.verdict << ','
        << record.oracle_calls << ',';
    if (record.seed.has_value()) out << *record.seed;
    out << '\n';
  }
  out << "# summary trials=" << results.records.size()
      << " mean_probability=" << number_to_string(results.mean_probability)
      << " stderr_probability=" << number_to_string(results.stderr_probability)
      << '\n';
  return out.str();
}

void write_report(const ResultSet& results, const std::string& path,
                  ReportFormat format) {
  const std::string text = render_report(results, format);
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot open output file " + path);
  }
  out << text;
  out.close();
  if (!out) {
    throw ConfigError("failed while writing " + path);
  }
}

}  // namespace poq
