#include "poq/classical.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace poq {

int classical_query(const OracleSpec& oracle, std::uint64_t x) {
  // Only the membership table is consulted. There is no code path from a
  // classical call to the phase profile; that asymmetry is the object of
  // study, not an omission.
  return oracle.membership()(x);
}

ClassicalTranscript run_queries(const OracleSpec& oracle,
                                std::span<const std::uint64_t> queries) {
  ClassicalTranscript transcript;
  transcript.reserve(queries.size());
  for (std::uint64_t x : queries) {
    transcript.push_back(QueryRecord{x, classical_query(oracle, x)});
  }
  return transcript;
}

bool transcripts_indistinguishable(const OracleSpec& a, const OracleSpec& b,
                                   std::span<const std::uint64_t> queries) {
  if (a.width() != b.width()) {
    throw std::invalid_argument("cannot compare oracles of widths " +
                                std::to_string(a.width()) + " and " +
                                std::to_string(b.width()));
  }
  for (std::uint64_t x : queries) {
    if (classical_query(a, x) != classical_query(b, x)) return false;
  }
  return true;
}

int DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  // Iterative depth over the arena; trees are tiny, recursion would also do.
  struct Frame {
    int node;
    int depth;
  };
  std::vector<Frame> stack{{0, 0}};
  int deepest = 0;
  while (!stack.empty()) {
    const Frame frame = stack.back();
    stack.pop_back();
    const Node& node = nodes.at(static_cast<std::size_t>(frame.node));
    if (node.is_leaf) {
      deepest = std::max(deepest, frame.depth);
    } else {
      stack.push_back({node.on_zero, frame.depth + 1});
      stack.push_back({node.on_one, frame.depth + 1});
    }
  }
  return deepest;
}

namespace {

void check_search_width(int n) {
  if (n < 1 || n > 3) {
    throw std::invalid_argument(
        "exhaustive promise search is only tractable for n in [1, 3], got " +
        std::to_string(n));
  }
}

struct PromiseSearch {
  int num_strings;                      // 2^n
  std::vector<std::uint64_t> tables;    // tables[0] is the all-ones case
  DecisionTree tree;
  // Only failures are cached; successful subtrees are rebuilt along the
  // found strategy, which is linear in the size of the witness.
  std::map<std::pair<std::vector<std::uint16_t>, int>, bool> known_failures;

  int make_leaf(Verdict verdict) {
    DecisionTree::Node node;
    node.is_leaf = true;
    node.verdict = verdict;
    tree.nodes.push_back(node);
    return static_cast<int>(tree.nodes.size() - 1);
  }

  // Returns the index of a node deciding every table in `alive` within
  // `depth` further queries, or -1 when no strategy exists. `asked` is the
  // bit set of strings already queried on this path.
  int search(const std::vector<std::uint16_t>& alive, int depth,
             std::uint64_t asked) {
    const bool has_a =
        std::find(alive.begin(), alive.end(), std::uint16_t{0}) != alive.end();
    const bool has_b = alive.size() > (has_a ? 1u : 0u);
    if (!has_a || !has_b) {
      // Every surviving table shares a verdict; answer without querying.
      return make_leaf(has_a ? Verdict::A : Verdict::B);
    }
    if (depth == 0) return -1;

    const auto memo_key = std::make_pair(alive, depth);
    if (known_failures.count(memo_key) != 0) return -1;

    for (int q = 0; q < num_strings; ++q) {
      if ((asked >> q) & 1) continue;
      std::vector<std::uint16_t> on_zero, on_one;
      for (std::uint16_t t : alive) {
        if ((tables[t] >> q) & 1) {
          on_one.push_back(t);
        } else {
          on_zero.push_back(t);
        }
      }
      // The adversary picks the answer, so both halves must be decidable.
      // An empty half is unreachable and gets an arbitrary leaf.
      const std::uint64_t asked_next = asked | (std::uint64_t{1} << q);
      const int child_zero = on_zero.empty()
                                 ? make_leaf(Verdict::B)
                                 : search(on_zero, depth - 1, asked_next);
      if (child_zero < 0) continue;
      const int child_one = on_one.empty()
                                ? make_leaf(Verdict::B)
                                : search(on_one, depth - 1, asked_next);
      if (child_one < 0) continue;
      DecisionTree::Node node;
      node.query = static_cast<std::uint64_t>(q);
      node.on_zero = child_zero;
      node.on_one = child_one;
      tree.nodes.push_back(node);
      return static_cast<int>(tree.nodes.size() - 1);
    }
    known_failures.emplace(memo_key, true);
    return -1;
  }
};

// Rebuild the arena so the root lands at index 0, as documented.
DecisionTree rerooted(const DecisionTree& tree, int root) {
  DecisionTree out;
  struct Pending {
    int source;
    int target;
  };
  out.nodes.push_back(tree.nodes.at(static_cast<std::size_t>(root)));
  std::vector<Pending> stack{{root, 0}};
  while (!stack.empty()) {
    const Pending item = stack.back();
    stack.pop_back();
    const DecisionTree::Node& source =
        tree.nodes.at(static_cast<std::size_t>(item.source));
    if (source.is_leaf) continue;
    const int zero_target = static_cast<int>(out.nodes.size());
    out.nodes.push_back(tree.nodes.at(static_cast<std::size_t>(source.on_zero)));
    const int one_target = static_cast<int>(out.nodes.size());
    out.nodes.push_back(tree.nodes.at(static_cast<std::size_t>(source.on_one)));
    out.nodes[static_cast<std::size_t>(item.target)].on_zero = zero_target;
    out.nodes[static_cast<std::size_t>(item.target)].on_one = one_target;
    stack.push_back({source.on_zero, zero_target});
    stack.push_back({source.on_one, one_target});
  }
  return out;
}

}  // namespace

std::vector<std::uint64_t> promise_table_masks(int n) {
  if (n < 1 || n > 4) {
    throw std::invalid_argument(
        "promise table enumeration is exhaustive and capped at n = 4");
  }
  const int num_strings = 1 << n;
  std::vector<std::uint64_t> masks;
  masks.push_back((std::uint64_t{1} << num_strings) - 1);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << num_strings); ++mask) {
    if (std::popcount(mask) == num_strings / 2) {
      masks.push_back(mask);
    }
  }
  return masks;
}

std::optional<DecisionTree> find_promise_tree(int n, int depth) {
  check_search_width(n);
  if (depth < 0) {
    throw std::invalid_argument("depth must be nonnegative");
  }
  const std::vector<std::uint64_t> masks = promise_table_masks(n);
  PromiseSearch search;
  search.num_strings = 1 << n;
  search.tables = masks;
  std::vector<std::uint16_t> alive(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) {
    alive[i] = static_cast<std::uint16_t>(i);
  }
  const int root = search.search(alive, depth, 0);
  if (root < 0) return std::nullopt;
  return rerooted(search.tree, root);
}

int min_classical_queries(int n) {
  check_search_width(n);
  for (int depth = 0; depth <= (1 << n); ++depth) {
    if (find_promise_tree(n, depth).has_value()) return depth;
  }
  // Unreachable: querying every string decides any promise instance.
  throw std::logic_error("promise search failed to terminate");
}

bool tree_decides_promise(const DecisionTree& tree, int n) {
  if (n < 1 || n > 4 || tree.empty()) return false;
  const int num_strings = 1 << n;
  for (std::uint64_t mask : promise_table_masks(n)) {
    const bool is_case_a =
        mask == (std::uint64_t{1} << num_strings) - 1;
    int at = 0;
    std::uint64_t asked = 0;
    std::size_t hops = 0;
    while (true) {
      if (at < 0 || at >= static_cast<int>(tree.nodes.size())) return false;
      if (++hops > tree.nodes.size()) return false;  // cycle guard
      const DecisionTree::Node& node =
          tree.nodes[static_cast<std::size_t>(at)];
      if (node.is_leaf) {
        if (node.verdict != (is_case_a ? Verdict::A : Verdict::B)) return false;
        break;
      }
      if (node.query >= static_cast<std::uint64_t>(num_strings)) return false;
      if ((asked >> node.query) & 1) return false;  // repeated query on path
      asked |= std::uint64_t{1} << node.query;
      at = ((mask >> node.query) & 1) ? node.on_one : node.on_zero;
    }
  }
  return true;
}

ToyMachine::ToyMachine(std::vector<std::array<Rule, 2>> rules, int start_state)
    : rules_(std::move(rules)), start_(start_state) {
  if (rules_.empty()) {
    throw std::invalid_argument("machine needs at least one state");
  }
  if (start_ < 0 || start_ >= state_count()) {
    throw std::invalid_argument("start state out of range");
  }
  for (const auto& pair : rules_) {
    for (const Rule& rule : pair) {
      if (rule.write > 1) {
        throw std::invalid_argument("machine writes must be 0 or 1");
      }
      if (rule.move != -1 && rule.move != 1) {
        throw std::invalid_argument("machine moves must be -1 or +1");
      }
      if (rule.next != kHalt && (rule.next < 0 || rule.next >= state_count())) {
        throw std::invalid_argument("machine transition targets state " +
                                    std::to_string(rule.next) +
                                    " which does not exist");
      }
    }
  }
}

const ToyMachine::Rule& ToyMachine::rule(int state, int symbol) const {
  if (state < 0 || state >= state_count() || (symbol != 0 && symbol != 1)) {
    throw std::out_of_range("no rule for state " + std::to_string(state) +
                            ", symbol " + std::to_string(symbol));
  }
  return rules_[static_cast<std::size_t>(state)][static_cast<std::size_t>(symbol)];
}

MachineRun run_machine(const ToyMachine& machine, std::uint64_t budget) {
  std::vector<std::uint8_t> right{0};  // cells 0, 1, 2, ...
  std::vector<std::uint8_t> left;      // cells -1, -2, ...
  std::int64_t head = 0;
  int state = machine.start_state();
  for (std::uint64_t steps = 1; steps <= budget; ++steps) {
    std::uint8_t* cell;
    if (head >= 0) {
      if (static_cast<std::size_t>(head) >= right.size()) {
        right.resize(static_cast<std::size_t>(head) + 1, 0);
      }
      cell = &right[static_cast<std::size_t>(head)];
    } else {
      const std::size_t offset = static_cast<std::size_t>(-head) - 1;
      if (offset >= left.size()) {
        left.resize(offset + 1, 0);
      }
      cell = &left[offset];
    }
    const ToyMachine::Rule& rule = machine.rule(state, *cell);
    *cell = rule.write;
    head += rule.move;
    if (rule.next == ToyMachine::kHalt) {
      return MachineRun{true, steps};
    }
    state = rule.next;
  }
  return MachineRun{false, budget};
}

ToyMachine decode_machine(int n, std::uint64_t x, MachineEncoding encoding) {
  if (encoding != MachineEncoding::v1) {
    throw std::invalid_argument("unknown machine encoding");
  }
  if (n < 1 || n > 62) {
    throw std::invalid_argument("encoding width must be in [1, 62]");
  }
  if (n < 64 && (x >> n) != 0) {
    throw std::invalid_argument("encoded value " + std::to_string(x) +
                                " does not fit in " + std::to_string(n) +
                                " bits");
  }
  const int states = (n + 7) / 8;
  const auto bit = [&](int index) -> std::uint64_t {
    return index < n ? (x >> index) & 1 : 0;
  };
  std::vector<std::array<ToyMachine::Rule, 2>> rules(
      static_cast<std::size_t>(states));
  for (int s = 0; s < states; ++s) {
    for (int symbol = 0; symbol < 2; ++symbol) {
      const int base = 4 * (2 * s + symbol);
      ToyMachine::Rule rule;
      rule.write = static_cast<std::uint8_t>(bit(base));
      rule.move = bit(base + 1) ? std::int8_t{1} : std::int8_t{-1};
      const int code = static_cast<int>(bit(base + 2) | (bit(base + 3) << 1));
      rule.next = (code == 0 || code - 1 >= states) ? ToyMachine::kHalt
                                                    : code - 1;
      rules[static_cast<std::size_t>(s)][static_cast<std::size_t>(symbol)] = rule;
    }
  }
  return ToyMachine(std::move(rules));
}

std::vector<std::uint8_t> build_halting_table(int n, std::uint64_t budget,
                                              MachineEncoding encoding) {
  if (n < 1 || n > 24) {
    throw std::invalid_argument(
        "halting tables are built exhaustively; width must be in [1, 24]");
  }
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<std::uint8_t> h(count);
  for (std::uint64_t x = 0; x < count; ++x) {
    h[x] = run_machine(decode_machine(n, x, encoding), budget).halted ? 1 : 0;
  }
  return h;
}

}  // namespace poq
