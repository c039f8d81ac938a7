#include "poq/protocols.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace poq {

std::string_view to_string(MiddleOp op) {
  switch (op) {
    case MiddleOp::sign_flip: return "sign_flip";
    case MiddleOp::identity: return "identity";
  }
  throw std::invalid_argument("unknown middle operation");
}

std::string_view to_string(SecondCall call) {
  switch (call) {
    case SecondCall::forward_u: return "forward_U";
    case SecondCall::inverse_u: return "inverse_U";
  }
  throw std::invalid_argument("unknown second call");
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::A: return "A";
    case Verdict::B: return "B";
    case Verdict::inconclusive: return "inconclusive";
  }
  throw std::invalid_argument("unknown verdict");
}

MiddleOp middle_op_from_string(std::string_view s) {
  if (s == "sign_flip") return MiddleOp::sign_flip;
  if (s == "identity") return MiddleOp::identity;
  throw std::invalid_argument("unknown middle operation '" + std::string(s) +
                              "', want sign_flip or identity");
}

SecondCall second_call_from_string(std::string_view s) {
  if (s == "forward_U") return SecondCall::forward_u;
  if (s == "inverse_U") return SecondCall::inverse_u;
  throw std::invalid_argument("unknown second call '" + std::string(s) +
                              "', want forward_U or inverse_U");
}

StateVector sign_flip(const StateVector& state) {
  std::vector<Complex> out(state.amplitudes());
  for (std::size_t i = 1; i < out.size(); i += 2) {
    out[i] = -out[i];
  }
  return StateVector::from_unnormalized(state.width(), std::move(out));
}

Verdict classify_probability(double probability) {
  if (!(probability >= 0.0)) {
    throw std::invalid_argument("probability must be nonnegative");
  }
  if (probability > 1.0 - kVerdictTolerance) return Verdict::A;
  if (probability < kVerdictTolerance) return Verdict::B;
  return Verdict::inconclusive;
}

DJOutcome dj_run(const OracleSpec& oracle, const DJConfig& config,
                 int max_width, StateVector* final_state) {
  const StateVector psi = uniform_superposition(oracle.width(), max_width);
  StateVector state = apply_oracle(oracle, psi);
  if (config.middle_op == MiddleOp::sign_flip) {
    state = sign_flip(state);
  }
  state = config.second_call == SecondCall::forward_u
              ? apply_oracle(oracle, state)
              : apply_inverse_oracle(oracle, state);
  const Complex inner = inner_product(psi, state);
  const double probability = std::norm(inner);
  if (final_state != nullptr) {
    *final_state = state;
  }
  return DJOutcome{inner, probability, classify_probability(probability), 2};
}

ReadoutOutcome phase_readout_outcome(const OracleSpec& oracle, std::uint64_t z,
                                     std::uint64_t x,
                                     StateVector* final_state) {
  const int n = oracle.width();
  const std::uint64_t count = oracle.membership().size();
  if (z >= count || x >= count) {
    throw std::invalid_argument("readout strings must fit in " +
                                std::to_string(n) + " bits");
  }
  if (z == x) {
    throw std::invalid_argument(
        "readout needs two distinct strings, got x == z");
  }
  if (oracle.membership().accepted_count() != 0) {
    throw std::invalid_argument(
        "phase readout requires the trivial membership table f == 0");
  }

  std::vector<Complex> amplitudes(count << 1, Complex{0.0, 0.0});
  const double weight = 1.0 / std::sqrt(2.0);
  amplitudes[static_cast<std::size_t>(z) << 1] = Complex{weight, 0.0};
  amplitudes[static_cast<std::size_t>(x) << 1] = Complex{weight, 0.0};
  const StateVector psi = StateVector::from_unnormalized(n, std::move(amplitudes));

  const StateVector chi = apply_oracle(oracle, psi);
  const Complex inner = inner_product(psi, chi);
  const double probability = std::norm(inner);
  if (final_state != nullptr) {
    *final_state = chi;
  }

  const Verdict verdict = classify_probability(probability);
  if (verdict == Verdict::inconclusive) {
    throw ProtocolViolation(
        "readout probability " + std::to_string(probability) +
        " lies between the verdict bands; the oracle phases are not a binary "
        "encoding relative to z = " + std::to_string(z));
  }
  return ReadoutOutcome{inner, probability, verdict == Verdict::A ? 1 : 0};
}

int phase_readout(const OracleSpec& oracle, std::uint64_t z, std::uint64_t x) {
  return phase_readout_outcome(oracle, z, x).bit;
}

int phase_readout(const OracleSpec& oracle, std::uint64_t z, std::uint64_t x,
                  std::span<const std::uint8_t> h) {
  if (h.size() != oracle.membership().size()) {
    throw std::invalid_argument("validation table has " +
                                std::to_string(h.size()) + " entries, want " +
                                std::to_string(oracle.membership().size()));
  }
  if (z >= h.size() || h[z] != 1) {
    throw std::invalid_argument(
        "reference string z must satisfy h(z) = 1; the readout would "
        "silently invert otherwise");
  }
  return phase_readout_outcome(oracle, z, x).bit;
}

}  // namespace poq
