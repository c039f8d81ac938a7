#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "poq/protocols.hpp"

namespace poq {

// One classical call: the device evaluates f(x) and returns the bit.
// Nothing else leaves the black box; in particular the phase profile has no
// classical side channel, which is the point of the whole construction.
int classical_query(const OracleSpec& oracle, std::uint64_t x);

struct QueryRecord {
  std::uint64_t query;
  int answer;

  bool operator==(const QueryRecord&) const = default;
};

using ClassicalTranscript = std::vector<QueryRecord>;

ClassicalTranscript run_queries(const OracleSpec& oracle,
                                std::span<const std::uint64_t> queries);

// True when the two oracles answer the given query sequence identically,
// i.e. no classical experiment with these queries can tell them apart.
bool transcripts_indistinguishable(const OracleSpec& a, const OracleSpec& b,
                                   std::span<const std::uint64_t> queries);

// Adaptive classical strategy for the promise problem "f is all-ones (A) or
// exactly half-ones (B)", stored as a flat arena with the root at index 0.
// Internal nodes name the string to query; leaves carry the verdict. Along
// any root-to-leaf path the queried strings are distinct.
struct DecisionTree {
  struct Node {
    bool is_leaf = false;
    Verdict verdict = Verdict::inconclusive;  // leaves only, A or B
    std::uint64_t query = 0;                  // internal nodes only
    int on_zero = -1;
    int on_one = -1;
  };

  std::vector<Node> nodes;

  bool empty() const { return nodes.empty(); }
  int depth() const;
};

// All membership tables satisfying the promise at width n: the all-ones
// table first, then every balanced table, as bit masks (bit x = f(x)).
// Exhaustive enumeration, so n <= 4.
std::vector<std::uint64_t> promise_table_masks(int n);

// Searches exhaustively (with adversary pruning) for an adaptive strategy
// that decides the promise in at most `depth` queries on every promise
// table. Returns a witness tree, or nullopt when none exists. n <= 3.
std::optional<DecisionTree> find_promise_tree(int n, int depth);

// Smallest worst-case query count that decides the promise at width n,
// found by deepening find_promise_tree. n <= 3.
int min_classical_queries(int n);

// Independent certificate check: walks every promise table through the tree
// and confirms the leaf verdict, path-distinct queries, and in-range
// indices. Makes no use of the search code above.
bool tree_decides_promise(const DecisionTree& tree, int n);

// Two-symbol Turing machine on a blank (all zero) two-way infinite tape.
// Rules are indexed by (state, read symbol); next == kHalt stops the run.
class ToyMachine {
 public:
  static constexpr int kHalt = -1;

  struct Rule {
    std::uint8_t write = 0;
    std::int8_t move = -1;  // -1 left, +1 right
    int next = kHalt;
  };

  explicit ToyMachine(std::vector<std::array<Rule, 2>> rules,
                      int start_state = 0);

  int state_count() const { return static_cast<int>(rules_.size()); }
  int start_state() const { return start_; }
  const Rule& rule(int state, int symbol) const;

 private:
  std::vector<std::array<Rule, 2>> rules_;
  int start_;
};

struct MachineRun {
  bool halted = false;
  // Transitions executed; the halting transition counts as a step. For a
  // run that exhausts the budget this equals the budget.
  std::uint64_t steps = 0;
};

MachineRun run_machine(const ToyMachine& machine, std::uint64_t budget);

enum class MachineEncoding { v1 };

// Fixed total encoding "v1" of n-bit strings into machines. ceil(n/8)
// states, 8 bits per state, 4 bits per (state, symbol) entry taken from the
// low bits of x upward, zero padded:
//   bit 0: symbol to write
//   bit 1: move (0 left, 1 right)
//   bits 2-3: next-state code; 0 means halt, c > 0 means state c-1,
//             codes past the last state also halt
// Zero padding makes every entry beyond n a halting entry, so x = 0 decodes
// to the machine that halts on its first step.
ToyMachine decode_machine(int n, std::uint64_t x,
                          MachineEncoding encoding = MachineEncoding::v1);

// h(x) = 1 iff decode_machine(n, x) halts within the step budget. Total and
// deterministic by construction, which is what lets it be wired into the
// phase encoding downstream.
std::vector<std::uint8_t> build_halting_table(
    int n, std::uint64_t budget, MachineEncoding encoding = MachineEncoding::v1);

}  // namespace poq
