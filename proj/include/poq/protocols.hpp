#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "poq/oracle.hpp"

namespace poq {

enum class MiddleOp { sign_flip, identity };
enum class SecondCall { forward_u, inverse_u };
enum class Verdict { A, B, inconclusive };

std::string_view to_string(MiddleOp op);
std::string_view to_string(SecondCall call);
std::string_view to_string(Verdict verdict);
MiddleOp middle_op_from_string(std::string_view s);
SecondCall second_call_from_string(std::string_view s);

// Thrown when a protocol's physical assumptions are violated at run time,
// e.g. a readout probability landing between the verdict bands.
class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DJConfig {
  MiddleOp middle_op = MiddleOp::sign_flip;
  SecondCall second_call = SecondCall::forward_u;
  // Free-form tag copied into result records; no semantic effect.
  std::string phase_regime;
};

struct DJOutcome {
  Complex inner;
  double probability;
  Verdict verdict;
  int oracle_calls;
};

// Flips the sign of every |x,1> component.
StateVector sign_flip(const StateVector& state);

// Maps a probability to a verdict: A above 1 - kVerdictTolerance, B below
// kVerdictTolerance, inconclusive between.
Verdict classify_probability(double probability);

// The two-call interference experiment: prepare the uniform superposition
// psi, call the oracle, apply the middle operation, make the second call
// (forward or inverse), and report |<psi|final>|^2 with its verdict.
// Always makes exactly two oracle calls.
//
// If final_state is non-null it receives the state after the second call.
DJOutcome dj_run(const OracleSpec& oracle, const DJConfig& config,
                 int max_width = kDefaultMaxWidth,
                 StateVector* final_state = nullptr);

struct ReadoutOutcome {
  Complex inner;
  double probability;
  int bit;
};

// Recovers one bit hidden in the oracle's phases. Requires f == 0 and a
// reference string z with phi0(z) = 0, i.e. h(z) = 1 under encode_function.
// Prepares (|z,0> + |x,0>)/sqrt(2), makes a single oracle call and reads
// |<psi|chi>|^2, which is 1 when h(x) = 1 and 0 when h(x) = 0. A probability
// between the verdict bands throws ProtocolViolation.
ReadoutOutcome phase_readout_outcome(const OracleSpec& oracle, std::uint64_t z,
                                     std::uint64_t x,
                                     StateVector* final_state = nullptr);

int phase_readout(const OracleSpec& oracle, std::uint64_t z, std::uint64_t x);

// Same, but validates against the intended table first: h must have the
// oracle's width and satisfy h(z) = 1. Guards against a silently inverted
// readout when z was chosen badly.
int phase_readout(const OracleSpec& oracle, std::uint64_t z, std::uint64_t x,
                  std::span<const std::uint8_t> h);

}  // namespace poq
