#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "poq/classical.hpp"
#include "poq/hilbert.hpp"
#include "poq/oracle.hpp"

namespace poq {

// {"n": n, "amplitudes": [[re, im], ...]} in basis-index order.
nlohmann::json state_to_json(const StateVector& state);

// Oracle document:
//   {"n": ..., "f": "<2^n bit string>",
//    "phases": {"kind": "zero" | "f_pi" | "uniform_random" | "encode_function"
//                        | "explicit",
//               "seed"?: ..., "h"?: "<bits>", "phi0"?: [...], "phi1"?: [...]}}
// uniform_random requires seed; encode_function requires h; explicit requires
// both angle arrays. Malformed documents raise std::invalid_argument.
OracleSpec oracle_from_json(const nlohmann::json& doc);

// Serializes with kind "explicit" so the document is self-contained.
nlohmann::json oracle_to_json(const OracleSpec& oracle);

struct HaltingTableFile {
  int n = 0;
  std::uint64_t budget = 0;
  std::string encoding;  // "v1"
  std::vector<std::uint8_t> h;
};

nlohmann::json halting_table_to_json(int n, std::uint64_t budget,
                                     std::span<const std::uint8_t> h);
HaltingTableFile halting_table_from_json(const nlohmann::json& doc);

// Nested certificate form: leaves are {"verdict": "A"|"B"}, internal nodes
// {"query": x, "on0": <node>, "on1": <node>}.
nlohmann::json tree_to_json(const DecisionTree& tree);
DecisionTree tree_from_json(const nlohmann::json& doc);

}  // namespace poq
