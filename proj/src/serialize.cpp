#include "poq/serialize.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace poq {

using nlohmann::json;

namespace {

// Accepts any JSON integer holding a nonnegative value, whether the parser
// stored it signed or unsigned.
bool is_uint(const json& value) {
  return value.is_number_unsigned() ||
         (value.is_number_integer() && value.get<std::int64_t>() >= 0);
}

int require_width(const json& doc, const char* where) {
  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    throw std::invalid_argument(std::string(where) +
                                ": missing integer field \"n\"");
  }
  const int n = doc["n"].get<int>();
  if (n < 1 || n > 62) {
    throw std::invalid_argument(std::string(where) + ": width " +
                                std::to_string(n) + " out of range");
  }
  return n;
}

std::vector<std::uint8_t> bits_from_string(const std::string& bits, int n,
                                           const char* where) {
  const std::size_t want = std::size_t{1} << n;
  if (bits.size() != want) {
    throw std::invalid_argument(std::string(where) + ": bit string length " +
                                std::to_string(bits.size()) + ", want " +
                                std::to_string(want));
  }
  std::vector<std::uint8_t> values(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw std::invalid_argument(std::string(where) +
                                  ": bit strings may only contain 0 and 1");
    }
    values[i] = static_cast<std::uint8_t>(bits[i] - '0');
  }
  return values;
}

std::vector<double> angles_from_json(const json& doc, const char* key, int n) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw std::invalid_argument(std::string("explicit phases need an array \"") +
                                key + "\"");
  }
  const std::size_t want = std::size_t{1} << n;
  if (doc[key].size() != want) {
    throw std::invalid_argument(std::string("phase array \"") + key + "\" has " +
                                std::to_string(doc[key].size()) +
                                " entries, want " + std::to_string(want));
  }
  std::vector<double> angles;
  angles.reserve(want);
  for (const json& value : doc[key]) {
    if (!value.is_number()) {
      throw std::invalid_argument(std::string("phase array \"") + key +
                                  "\" must contain numbers");
    }
    angles.push_back(value.get<double>());
  }
  return angles;
}

PhaseProfile phases_from_json(const json& doc, int n) {
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw std::invalid_argument(
        "oracle \"phases\" must be an object with a string \"kind\"");
  }
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "zero") {
    return PhaseProfile::zero(n);
  }
  if (kind == "f_pi") {
    // Resolved by the caller, which owns the membership table.
    throw std::logic_error("f_pi must be resolved against the membership");
  }
  if (kind == "uniform_random") {
    if (!doc.contains("seed") || !is_uint(doc["seed"])) {
      throw std::invalid_argument(
          "phases of kind uniform_random need an unsigned \"seed\"");
    }
    return PhaseProfile::uniform_random(n, doc["seed"].get<std::uint64_t>());
  }
  if (kind == "encode_function") {
    if (!doc.contains("h") || !doc["h"].is_string()) {
      throw std::invalid_argument(
          "phases of kind encode_function need a bit string \"h\"");
    }
    const std::vector<std::uint8_t> h =
        bits_from_string(doc["h"].get<std::string>(), n, "phases.h");
    return PhaseProfile::encode_function(n, h);
  }
  if (kind == "explicit") {
    return PhaseProfile(n, angles_from_json(doc, "phi0", n),
                        angles_from_json(doc, "phi1", n));
  }
  throw std::invalid_argument(
      "unknown phase kind '" + kind +
      "', want zero, f_pi, uniform_random, encode_function or explicit");
}

}  // namespace

json state_to_json(const StateVector& state) {
  json amplitudes = json::array();
  for (const Complex& a : state.amplitudes()) {
    amplitudes.push_back(json::array({a.real(), a.imag()}));
  }
  return json{{"n", state.width()}, {"amplitudes", std::move(amplitudes)}};
}

OracleSpec oracle_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw std::invalid_argument("oracle document must be a JSON object");
  }
  const int n = require_width(doc, "oracle");
  if (!doc.contains("f") || !doc["f"].is_string()) {
    throw std::invalid_argument("oracle: missing truth table string \"f\"");
  }
  MembershipTable membership(
      n, bits_from_string(doc["f"].get<std::string>(), n, "oracle.f"));
  if (!doc.contains("phases")) {
    throw std::invalid_argument("oracle: missing \"phases\" object");
  }
  const json& phases_doc = doc["phases"];
  if (phases_doc.is_object() && phases_doc.value("kind", "") == "f_pi") {
    PhaseProfile phases = PhaseProfile::f_pi(membership);
    return OracleSpec(std::move(membership), std::move(phases));
  }
  PhaseProfile phases = phases_from_json(phases_doc, n);
  return OracleSpec(std::move(membership), std::move(phases));
}

json oracle_to_json(const OracleSpec& oracle) {
  return json{{"n", oracle.width()},
              {"f", oracle.membership().to_bit_string()},
              {"phases",
               {{"kind", "explicit"},
                {"phi0", oracle.phases().phi0()},
                {"phi1", oracle.phases().phi1()}}}};
}

json halting_table_to_json(int n, std::uint64_t budget,
                           std::span<const std::uint8_t> h) {
  std::string bits(h.size(), '0');
  for (std::size_t i = 0; i < h.size(); ++i) {
    bits[i] = h[i] ? '1' : '0';
  }
  return json{{"n", n}, {"budget", budget}, {"encoding", "v1"}, {"h", bits}};
}

HaltingTableFile halting_table_from_json(const json& doc) {
  HaltingTableFile file;
  file.n = require_width(doc, "halting table");
  if (!doc.contains("budget") || !is_uint(doc["budget"])) {
    throw std::invalid_argument("halting table: missing unsigned \"budget\"");
  }
  file.budget = doc["budget"].get<std::uint64_t>();
  file.encoding = doc.value("encoding", "");
  if (file.encoding != "v1") {
    throw std::invalid_argument("halting table: unsupported encoding '" +
                                file.encoding + "'");
  }
  if (!doc.contains("h") || !doc["h"].is_string()) {
    throw std::invalid_argument("halting table: missing bit string \"h\"");
  }
  file.h = bits_from_string(doc["h"].get<std::string>(), file.n,
                            "halting table h");
  return file;
}

namespace {

json node_to_json(const DecisionTree& tree, int index) {
  const DecisionTree::Node& node =
      tree.nodes.at(static_cast<std::size_t>(index));
  if (node.is_leaf) {
    return json{{"verdict", std::string(to_string(node.verdict))}};
  }
  return json{{"query", node.query},
              {"on0", node_to_json(tree, node.on_zero)},
              {"on1", node_to_json(tree, node.on_one)}};
}

int node_from_json(const json& doc, DecisionTree& tree) {
  if (!doc.is_object()) {
    throw std::invalid_argument("decision tree nodes must be objects");
  }
  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (doc.contains("verdict")) {
    const std::string verdict = doc["verdict"].get<std::string>();
    tree.nodes[static_cast<std::size_t>(index)].is_leaf = true;
    if (verdict == "A") {
      tree.nodes[static_cast<std::size_t>(index)].verdict = Verdict::A;
    } else if (verdict == "B") {
      tree.nodes[static_cast<std::size_t>(index)].verdict = Verdict::B;
    } else {
      throw std::invalid_argument("decision tree leaf verdict must be A or B");
    }
    return index;
  }
  if (!doc.contains("query") || !is_uint(doc["query"]) ||
      !doc.contains("on0") || !doc.contains("on1")) {
    throw std::invalid_argument(
        "decision tree internal nodes need \"query\", \"on0\" and \"on1\"");
  }
  const std::uint64_t query = doc["query"].get<std::uint64_t>();
  const int zero = node_from_json(doc["on0"], tree);
  const int one = node_from_json(doc["on1"], tree);
  DecisionTree::Node& node = tree.nodes[static_cast<std::size_t>(index)];
  node.query = query;
  node.on_zero = zero;
  node.on_one = one;
  return index;
}

}  // namespace

json tree_to_json(const DecisionTree& tree) {
  if (tree.empty()) {
    throw std::invalid_argument("cannot serialize an empty decision tree");
  }
  return node_to_json(tree, 0);
}

DecisionTree tree_from_json(const json& doc) {
  DecisionTree tree;
  node_from_json(doc, tree);
  return tree;
}

}  // namespace poq
