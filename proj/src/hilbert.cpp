#include "poq/hilbert.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace poq {

namespace {

// Compensated accumulation; keeps norm and inner product errors well inside
// kNormTolerance even at the largest supported widths.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double value) {
    const double y = value - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

void check_width(int n) {
  if (n < 1 || n > 62) {
    throw std::invalid_argument("register width must be in [1, 62], got " +
                                std::to_string(n));
  }
}

std::size_t dimension_for(int n) {
  check_width(n);
  return std::size_t{1} << (n + 1);
}

}  // namespace

std::size_t basis_index(BasisLabel label, int n) {
  check_width(n);
  if (label.x >> n != 0) {
    throw std::invalid_argument("basis label x = " + std::to_string(label.x) +
                                " does not fit in " + std::to_string(n) +
                                " bits");
  }
  if (label.y != 0 && label.y != 1) {
    throw std::invalid_argument("answer bit must be 0 or 1, got " +
                                std::to_string(label.y));
  }
  return (static_cast<std::size_t>(label.x) << 1) | static_cast<unsigned>(label.y);
}

BasisLabel basis_label(std::size_t index, int n) {
  if (index >= dimension_for(n)) {
    throw std::invalid_argument("basis index " + std::to_string(index) +
                                " out of range for width " + std::to_string(n));
  }
  return BasisLabel{index >> 1, static_cast<int>(index & 1)};
}

StateVector::StateVector(int n, std::vector<Complex> amplitudes)
    : n_(n), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::basis_state(int n, BasisLabel label) {
  std::vector<Complex> amplitudes(dimension_for(n), Complex{0.0, 0.0});
  amplitudes[basis_index(label, n)] = Complex{1.0, 0.0};
  return StateVector(n, std::move(amplitudes));
}

StateVector StateVector::from_amplitudes(int n, std::vector<Complex> amplitudes) {
  if (amplitudes.size() != dimension_for(n)) {
    throw std::invalid_argument(
        "amplitude vector has " + std::to_string(amplitudes.size()) +
        " entries, want " + std::to_string(dimension_for(n)));
  }
  StateVector state(n, std::move(amplitudes));
  if (!state.is_normalized()) {
    throw std::invalid_argument(
        "amplitudes are not normalized (norm = " + std::to_string(state.norm()) +
        "); build via from_unnormalized and call normalized()");
  }
  return state;
}

StateVector StateVector::from_unnormalized(int n, std::vector<Complex> amplitudes) {
  if (amplitudes.size() != dimension_for(n)) {
    throw std::invalid_argument(
        "amplitude vector has " + std::to_string(amplitudes.size()) +
        " entries, want " + std::to_string(dimension_for(n)));
  }
  return StateVector(n, std::move(amplitudes));
}

Complex StateVector::amplitude(std::size_t index) const {
  if (index >= amplitudes_.size()) {
    throw std::out_of_range("amplitude index " + std::to_string(index) +
                            " out of range");
  }
  return amplitudes_[index];
}

Complex StateVector::amplitude(BasisLabel label) const {
  return amplitudes_[basis_index(label, n_)];
}

double StateVector::norm() const {
  KahanSum sum;
  for (const Complex& a : amplitudes_) sum.add(std::norm(a));
  return std::sqrt(sum.sum);
}

bool StateVector::is_normalized(double tolerance) const {
  return std::abs(norm() - 1.0) <= tolerance;
}

StateVector StateVector::normalized() const {
  const double length = norm();
  if (length == 0.0) {
    throw std::invalid_argument("cannot normalize the zero vector");
  }
  std::vector<Complex> scaled(amplitudes_);
  for (Complex& a : scaled) a /= length;
  return StateVector(n_, std::move(scaled));
}

StateVector uniform_superposition(int n, int max_width) {
  check_width(n);
  if (max_width < 1) {
    throw std::invalid_argument("max_width must be positive");
  }
  if (n > max_width) {
    throw std::invalid_argument("width " + std::to_string(n) +
                                " exceeds the configured cap of " +
                                std::to_string(max_width));
  }
  const std::size_t count = std::size_t{1} << n;
  const double weight = 1.0 / std::sqrt(static_cast<double>(count));
  std::vector<Complex> amplitudes(count << 1, Complex{0.0, 0.0});
  for (std::size_t x = 0; x < count; ++x) {
    amplitudes[x << 1] = Complex{weight, 0.0};
  }
  return StateVector::from_unnormalized(n, std::move(amplitudes));
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.width() != b.width()) {
    throw std::invalid_argument("inner product of states with widths " +
                                std::to_string(a.width()) + " and " +
                                std::to_string(b.width()));
  }
  KahanSum re, im;
  const auto& av = a.amplitudes();
  const auto& bv = b.amplitudes();
  for (std::size_t i = 0; i < av.size(); ++i) {
    const Complex term = std::conj(av[i]) * bv[i];
    re.add(term.real());
    im.add(term.imag());
  }
  return Complex{re.sum, im.sum};
}

double projector_probability(const StateVector& reference,
                             const StateVector& state) {
  if (reference.width() != state.width()) {
    throw std::invalid_argument("projector arguments differ in width");
  }
  if (!reference.is_normalized() || !state.is_normalized()) {
    throw std::invalid_argument(
        "projector_probability requires normalized states");
  }
  return std::norm(inner_product(reference, state));
}

double answer_bit_probability(const StateVector& state, int y) {
  if (y != 0 && y != 1) {
    throw std::invalid_argument("answer bit must be 0 or 1, got " +
                                std::to_string(y));
  }
  KahanSum sum;
  const auto& amplitudes = state.amplitudes();
  for (std::size_t i = static_cast<std::size_t>(y); i < amplitudes.size();
       i += 2) {
    sum.add(std::norm(amplitudes[i]));
  }
  return sum.sum;
}

}  // namespace poq
