#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "poq/rng.hpp"
#include "poq/scenario.hpp"
#include "poq/serialize.hpp"

using namespace poq;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarioDir = POQ_SCENARIO_DIR;

fs::path write_temp(const std::string& stem, const std::string& text) {
  const fs::path path = fs::temp_directory_path() / (stem + ".json");
  std::ofstream out(path);
  out << text;
  return path;
}

json dj_doc(int n, const std::string& f, const json& phases) {
  return json{{"name", "inline_dj"},
              {"protocol", "dj"},
              {"n", n},
              {"oracle", {{"f", f}, {"phases", phases}}}};
}

}  // namespace

TEST_CASE("shipped scenarios load with their documented fields") {
  const ScenarioConfig config =
      ScenarioConfig::load(kScenarioDir / "dj_zero_phase_case_b.json");
  CHECK(config.name == "dj_zero_phase_case_b");
  CHECK(config.protocol == Protocol::dj);
  CHECK(config.n == 3);
  CHECK(config.dj.middle_op == MiddleOp::sign_flip);
  CHECK(config.dj.second_call == SecondCall::forward_u);
  CHECK(config.trials == 1);
  CHECK(config.oracle["f"] == "00001111");
}

TEST_CASE("parse errors carry the line number") {
  const fs::path path = write_temp("poq_broken", "{\n  \"name\": \"x\",\n  ,\n}");
  try {
    ScenarioConfig::load(path);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& error) {
    const std::string message = error.what();
    CHECK(message.find(":3:") != std::string::npos);
  }
  std::remove(path.string().c_str());
  CHECK_THROWS_AS(ScenarioConfig::load("/nonexistent/poq.json"), ConfigError);
}

TEST_CASE("scenario validation rejects malformed configs") {
  const fs::path base = fs::temp_directory_path();
  CHECK_THROWS_AS(ScenarioConfig::from_json(json::array(), base), ConfigError);
  CHECK_THROWS_AS(
      ScenarioConfig::from_json(json{{"protocol", "dj"}, {"n", 1}}, base),
      ConfigError);

  json doc = dj_doc(2, "0011", {{"kind", "zero"}});
  CHECK_NOTHROW(ScenarioConfig::from_json(doc, base));

  json bad = doc;
  bad["protocol"] = "teleport";
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad, base), ConfigError);

  bad = doc;
  bad["n"] = 0;
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad, base), ConfigError);

  bad = doc;
  bad["format"] = "xml";
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad, base), ConfigError);

  bad = doc;
  bad["trials"] = 0;
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad, base), ConfigError);

  bad = doc;
  bad["dj"] = {{"middle_op", "swap"}};
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad, base), ConfigError);

  bad = doc;
  bad.erase("oracle");
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad, base), ConfigError);

  bad = doc;
  bad["oracle"] = {{"n", 3}, {"f", "0011"}, {"phases", {{"kind", "zero"}}}};
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad, base), ConfigError);

  bad = doc;
  bad["oracle"] = {{"file", "does_not_exist.json"}};
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad, base), ConfigError);

  json lower{{"name", "lb"}, {"protocol", "lower_bound"}, {"n", 4}};
  CHECK_THROWS_AS(ScenarioConfig::from_json(lower, base), ConfigError);
}

TEST_CASE("a zero phase balanced scenario reports verdict B") {
  const ScenarioConfig config =
      ScenarioConfig::load(kScenarioDir / "dj_zero_phase_case_b.json");
  const ResultSet results = run_scenario(config);
  REQUIRE(results.records.size() == 1);
  CHECK(results.records[0].verdict == "B");
  CHECK(results.records[0].probability <= 1e-12);
  CHECK(results.records[0].oracle_calls == 2);
  CHECK(results.records[0].regime == "zero+sign_flip+forward_U");
  CHECK(results.mean_probability <= 1e-12);
  CHECK(results.stderr_probability == 0.0);
}

TEST_CASE("trials draw one phase profile per substream") {
  json doc = dj_doc(3, "11111111", {{"kind", "uniform_random"}});
  doc["trials"] = 3;
  doc["seed"] = 5;
  const ScenarioConfig config =
      ScenarioConfig::from_json(doc, fs::temp_directory_path());
  const ResultSet results = run_scenario(config);
  REQUIRE(results.records.size() == 3);
  for (std::uint64_t t = 0; t < 3; ++t) {
    REQUIRE(results.records[t].seed.has_value());
    CHECK(*results.records[t].seed == fold_in(5, t));
    CHECK(results.records[t].trial == t);
  }
  CHECK(results.records[0].inner != results.records[1].inner);
}

TEST_CASE("random phases without any seed are refused") {
  const json doc = dj_doc(2, "1111", {{"kind", "uniform_random"}});
  const ScenarioConfig config =
      ScenarioConfig::from_json(doc, fs::temp_directory_path());
  CHECK_THROWS_AS(run_scenario(config), ConfigError);

  RunOptions options;
  options.seed = 17;
  const ResultSet rescued = run_scenario(config, options);
  REQUIRE(rescued.records.size() == 1);
  CHECK(*rescued.records[0].seed == fold_in(17, 0));
}

TEST_CASE("an embedded phase seed pins the oracle across trials") {
  json doc = dj_doc(2, "1111", {{"kind", "uniform_random"}, {"seed", 99}});
  doc["trials"] = 2;
  const ScenarioConfig config =
      ScenarioConfig::from_json(doc, fs::temp_directory_path());
  const ResultSet results = run_scenario(config);
  REQUIRE(results.records.size() == 2);
  CHECK(results.records[0].inner == results.records[1].inner);
  CHECK_FALSE(results.records[0].seed.has_value());
}

TEST_CASE("reports are byte stable across repeated runs") {
  json doc = dj_doc(4, "1111111111111111", {{"kind", "uniform_random"}});
  doc["trials"] = 5;
  doc["seed"] = 12345;
  const ScenarioConfig config =
      ScenarioConfig::from_json(doc, fs::temp_directory_path());
  const std::string json_a = render_report(run_scenario(config), ReportFormat::json);
  const std::string json_b = render_report(run_scenario(config), ReportFormat::json);
  CHECK(json_a == json_b);
  const std::string csv_a = render_report(run_scenario(config), ReportFormat::csv);
  const std::string csv_b = render_report(run_scenario(config), ReportFormat::csv);
  CHECK(csv_a == csv_b);
}

TEST_CASE("csv reports have a header, one row per record and a summary") {
  json doc = dj_doc(2, "1111", {{"kind", "zero"}});
  doc["trials"] = 4;
  const ScenarioConfig config =
      ScenarioConfig::from_json(doc, fs::temp_directory_path());
  const std::string csv = render_report(run_scenario(config), ReportFormat::csv);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 6);
  CHECK(csv.rfind("scenario,trial,n,regime,inner_re,inner_im,probability,"
                  "verdict,oracle_calls,seed\n", 0) == 0);
  CHECK(csv.find("# summary trials=4 mean_probability=1.0 "
                 "stderr_probability=0.0") != std::string::npos);
  CHECK(csv.find("inline_dj,2,2,zero+sign_flip+forward_U,-1.0,") !=
        std::string::npos);
}

TEST_CASE("json reports mirror the record schema") {
  const ScenarioConfig config =
      ScenarioConfig::load(kScenarioDir / "dj_zero_phase_case_a.json");
  const json report = json::parse(render_report(run_scenario(config),
                                                ReportFormat::json));
  CHECK(report["scenario"] == "dj_zero_phase_case_a");
  CHECK(report["protocol"] == "dj");
  CHECK(report["n"] == 3);
  CHECK(report["summary"]["trials"] == 1);
  REQUIRE(report["records"].size() == 1);
  const json& record = report["records"][0];
  CHECK(record["protocol"] == "dj");
  CHECK(record["verdict"] == "A");
  CHECK(record["oracle_calls"] == 2);
  CHECK(record["inner"][0].get<double>() == doctest::Approx(-1.0));
  CHECK(record["probability"].get<double>() == doctest::Approx(1.0));
  CHECK_FALSE(record.contains("seed"));
  CHECK_FALSE(record.contains("state"));
}

TEST_CASE("dump_state attaches full state vectors") {
  const json doc = dj_doc(2, "1111", {{"kind", "zero"}});
  const ScenarioConfig config =
      ScenarioConfig::from_json(doc, fs::temp_directory_path());
  RunOptions options;
  options.dump_state = true;
  const ResultSet results = run_scenario(config, options);
  REQUIRE(results.records.size() == 1);
  REQUIRE(results.records[0].state.has_value());
  CHECK((*results.records[0].state)["n"] == 2);
  CHECK((*results.records[0].state)["amplitudes"].size() == 8);
}

TEST_CASE("the width cap applies to scenarios and can be raised") {
  const ScenarioConfig config =
      ScenarioConfig::load(kScenarioDir / "dj_zero_phase_case_a.json");
  RunOptions options;
  options.max_width = 2;
  CHECK_THROWS_AS(run_scenario(config, options), ConfigError);
  options.max_width = 3;
  CHECK_NOTHROW(run_scenario(config, options));
}

TEST_CASE("readout scenarios recover the hidden table") {
  const ScenarioConfig config =
      ScenarioConfig::load(kScenarioDir / "readout_small.json");
  const ResultSet results = run_scenario(config);
  CHECK(results.records.size() == 7);  // every x except z
  CHECK(results.extras["h"] == "10110100");
  CHECK(results.extras["recovered_h"] == "10110100");
  CHECK(results.extras["recovered_matches"] == true);
  CHECK(results.extras["z"] == 0);
  for (const RunRecord& record : results.records) {
    CHECK(record.oracle_calls == 1);
    CHECK((record.verdict == "0" || record.verdict == "1"));
  }
}

TEST_CASE("readout scenarios validate the reference string") {
  json doc{{"name", "bad_z"},
           {"protocol", "readout"},
           {"n", 2},
           {"z", 1},
           {"oracle",
            {{"f", "0000"},
             {"phases", {{"kind", "encode_function"}, {"h", "1010"}}}}}};
  const ScenarioConfig config =
      ScenarioConfig::from_json(doc, fs::temp_directory_path());
  CHECK_THROWS_AS(run_scenario(config), ConfigError);  // h(1) = 0

  doc["oracle"]["phases"] = {{"kind", "zero"}};
  doc.erase("z");
  const ScenarioConfig no_table =
      ScenarioConfig::from_json(doc, fs::temp_directory_path());
  CHECK_THROWS_AS(run_scenario(no_table), ConfigError);
}

TEST_CASE("table files splice into readout scenarios") {
  const ScenarioConfig config =
      ScenarioConfig::load(kScenarioDir / "readout_halting_n6.json");
  CHECK(config.oracle["phases"]["kind"] == "encode_function");
  const std::string h = config.oracle["phases"]["h"].get<std::string>();
  CHECK(h.size() == 64);
  CHECK(h[0] == '1');
  const ResultSet results = run_scenario(config);
  CHECK(results.extras["recovered_matches"] == true);
  CHECK(results.extras["recovered_h"] == h);
}

TEST_CASE("classical sweeps over encoded tables answer all zeros") {
  const ScenarioConfig config =
      ScenarioConfig::load(kScenarioDir / "classical_sweep_hidden.json");
  const ResultSet results = run_scenario(config);
  CHECK(results.records.size() == 64);
  CHECK(results.extras["all_zero"] == true);
  CHECK(results.extras["answers"] == std::string(64, '0'));
  for (const RunRecord& record : results.records) {
    CHECK(record.verdict == "0");
    CHECK(record.oracle_calls == 1);
  }
}

TEST_CASE("lower bound scenarios carry a checkable certificate") {
  const ScenarioConfig config =
      ScenarioConfig::load(kScenarioDir / "lower_bound_n3.json");
  const ResultSet results = run_scenario(config);
  CHECK(results.extras["min_queries"] == 5);
  CHECK(results.extras["quantum_oracle_calls"] == 2);
  CHECK(results.extras["certificate_valid"] == true);
  const DecisionTree tree = tree_from_json(results.extras["certificate"]);
  CHECK(tree_decides_promise(tree, 3));
  CHECK(tree.depth() == 5);
}

TEST_CASE("the halting demo recovers its table and stays classically dark") {
  const ScenarioConfig config =
      ScenarioConfig::load(kScenarioDir / "halting_demo_n6.json");
  const ResultSet results = run_scenario(config);
  CHECK(results.records.size() == 63);
  CHECK(results.extras["recovered_matches"] == true);
  CHECK(results.extras["classical_all_zero"] == true);
  const HaltingTableFile table =
      halting_table_from_json(results.extras["halting_table"]);
  CHECK(table.n == 6);
  CHECK(table.budget == 1000);
  CHECK(results.extras["recovered_h"] ==
        results.extras["halting_table"]["h"]);

  // Same run twice: the whole report must be reproducible byte for byte.
  const std::string again =
      render_report(run_scenario(config), ReportFormat::json);
  CHECK(render_report(results, ReportFormat::json) == again);
}

TEST_CASE("write_report hits the filesystem or fails loudly") {
  const ScenarioConfig config =
      ScenarioConfig::load(kScenarioDir / "dj_zero_phase_case_b.json");
  const ResultSet results = run_scenario(config);
  const fs::path out = fs::temp_directory_path() / "poq_report_test.json";
  write_report(results, out.string(), ReportFormat::json);
  std::ifstream in(out);
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  CHECK(text == render_report(results, ReportFormat::json));
  std::remove(out.string().c_str());

  CHECK_THROWS_AS(
      write_report(results, "/nonexistent-dir/poq.json", ReportFormat::json),
      ConfigError);
}
