#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace poq {

using Complex = std::complex<double>;

// Tolerance for treating a state as normalized.
inline constexpr double kNormTolerance = 1e-10;

// Half-width of the probability bands that count as a definite verdict.
inline constexpr double kVerdictTolerance = 1e-6;

// Default cap on the register width n. 2^(n+1) amplitudes at n = 20 is
// about 32 MiB; callers that know what they are doing may raise the cap.
inline constexpr int kDefaultMaxWidth = 20;

// One computational basis vector |x,y>: x is an n-bit input string and y the
// single answer bit.
struct BasisLabel {
  std::uint64_t x = 0;
  int y = 0;

  bool operator==(const BasisLabel&) const = default;
};

// Flat index of |x,y> in an n-bit register: 2x + y. The answer bit is the
// least significant bit, so the two amplitudes of a fixed x are adjacent.
std::size_t basis_index(BasisLabel label, int n);

// Inverse of basis_index.
BasisLabel basis_label(std::size_t index, int n);

// Dense state over the 2^(n+1) basis vectors of an n-bit register plus
// answer bit. Instances are immutable; operations return fresh states.
//
// Normal construction paths require unit norm within kNormTolerance. An
// unnormalized vector can be held (from_unnormalized) as an intermediate but
// must be normalized() before protocol use.
class StateVector {
 public:
  static StateVector basis_state(int n, BasisLabel label);
  static StateVector from_amplitudes(int n, std::vector<Complex> amplitudes);
  static StateVector from_unnormalized(int n, std::vector<Complex> amplitudes);

  int width() const { return n_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::size_t index) const;
  Complex amplitude(BasisLabel label) const;

  double norm() const;
  bool is_normalized(double tolerance = kNormTolerance) const;
  StateVector normalized() const;

  bool operator==(const StateVector&) const = default;

 private:
  StateVector(int n, std::vector<Complex> amplitudes);

  int n_;
  std::vector<Complex> amplitudes_;
};

// Equal weight 2^(-n/2) on every |x,0>; the answer bit starts at 0.
StateVector uniform_superposition(int n, int max_width = kDefaultMaxWidth);

// <a|b>, conjugate-linear in the first argument.
Complex inner_product(const StateVector& a, const StateVector& b);

// |<reference|state>|^2. Both states must be normalized.
double projector_probability(const StateVector& reference,
                             const StateVector& state);

// Total probability of measuring the answer bit as y.
double answer_bit_probability(const StateVector& state, int y);

}  // namespace poq
