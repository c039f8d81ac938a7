#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poq/hilbert.hpp"

namespace poq {

// Boolean function f: {0,1}^n -> {0,1} stored as a truth table of 2^n
// entries indexed by x.
class MembershipTable {
 public:
  MembershipTable(int n, std::vector<std::uint8_t> values);

  static MembershipTable all_zeros(int n);
  static MembershipTable all_ones(int n);
  // bits[x] is '0' or '1'; the string length fixes nothing, n does.
  static MembershipTable from_bits(int n, std::string_view bits);
  // Bit x of mask is f(x); handy for exhaustive enumeration, n <= 6.
  static MembershipTable from_mask(int n, std::uint64_t mask);

  int width() const { return n_; }
  std::size_t size() const { return values_.size(); }
  std::uint8_t operator()(std::uint64_t x) const;
  // Number of accepted strings |X| = |{x : f(x) = 1}|.
  std::size_t accepted_count() const;
  std::string to_bit_string() const;
  const std::vector<std::uint8_t>& values() const { return values_; }

  bool operator==(const MembershipTable&) const = default;

 private:
  int n_;
  std::vector<std::uint8_t> values_;
};

// Pair of phase angle tables phi0, phi1 over x: the oracle attaches
// e^{i*phi0(x)} when called with answer bit 0 and e^{i*phi1(x)} with answer
// bit 1. Angles are reduced to [0, 2*pi) at construction and the unit phase
// factors are cached so repeated applications skip the trig.
class PhaseProfile {
 public:
  PhaseProfile(int n, std::vector<double> phi0, std::vector<double> phi1);

  static PhaseProfile zero(int n);
  // phi0(x) = f(x)*pi, phi1 = 0: cancels the sign the membership bit would
  // otherwise imprint, making the standard interference protocol fail.
  static PhaseProfile f_pi(const MembershipTable& membership);
  // Independent angles uniform on [0, 2*pi), drawn with splitmix64-v1:
  // all of phi0 in order of x, then all of phi1.
  static PhaseProfile uniform_random(int n, std::uint64_t seed);
  // phi0(x) = (h(x)+1)*pi mod 2*pi, phi1 = 0: hides the table h in the
  // phases where no classical query can see it.
  static PhaseProfile encode_function(int n, std::span<const std::uint8_t> h);

  int width() const { return n_; }
  std::size_t size() const { return phi0_.size(); }
  double angle0(std::uint64_t x) const;
  double angle1(std::uint64_t x) const;
  Complex factor0(std::uint64_t x) const { return factor0_[x]; }
  Complex factor1(std::uint64_t x) const { return factor1_[x]; }
  const std::vector<double>& phi0() const { return phi0_; }
  const std::vector<double>& phi1() const { return phi1_; }

  bool operator==(const PhaseProfile& other) const;

 private:
  int n_;
  std::vector<double> phi0_, phi1_;
  std::vector<Complex> factor0_, factor1_;
};

// A membership table plus the phase decoration the oracle applies alongside
// it. Widths must agree.
class OracleSpec {
 public:
  OracleSpec(MembershipTable membership, PhaseProfile phases);

  int width() const { return membership_.width(); }
  const MembershipTable& membership() const { return membership_; }
  const PhaseProfile& phases() const { return phases_; }

 private:
  MembershipTable membership_;
  PhaseProfile phases_;
};

// One oracle call:
//   |x,0> -> e^{i*phi0(x)} |x, f(x)>
//   |x,1> -> e^{i*phi1(x)} |x, 1+f(x) mod 2>
// extended linearly. The input must be normalized.
StateVector apply_oracle(const OracleSpec& oracle, const StateVector& state);

// Exact inverse of apply_oracle.
StateVector apply_inverse_oracle(const OracleSpec& oracle,
                                 const StateVector& state);

// Result of the exhaustive oracle self-check. checked is false when the
// width exceeds the cap; the remaining flags are then meaningless.
struct FaithfulReport {
  bool checked = false;
  bool is_unitary = false;
  bool preserves_membership = false;

  bool passed() const { return checked && is_unitary && preserves_membership; }
};

// Applies the oracle to every basis state and verifies, up to kNormTolerance,
// that the resulting columns are orthonormal and that measuring the answer
// bit after a call on |x,0> yields f(x) with probability 1.
FaithfulReport verify_faithful(const OracleSpec& oracle,
                               int exhaustive_cap = 10);

}  // namespace poq
