#include "poq/oracle.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

#include "poq/rng.hpp"

namespace poq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_width(int n) {
  if (n < 1 || n > 62) {
    throw std::invalid_argument("oracle width must be in [1, 62], got " +
                                std::to_string(n));
  }
}

std::size_t table_size(int n) {
  check_width(n);
  return std::size_t{1} << n;
}

double reduce_angle(double angle) {
  if (!std::isfinite(angle)) {
    throw std::invalid_argument("phase angle must be finite");
  }
  double reduced = std::fmod(angle, kTwoPi);
  if (reduced < 0.0) reduced += kTwoPi;
  if (reduced >= kTwoPi) reduced = 0.0;  // fmod can land exactly on 2*pi
  return reduced;
}

}  // namespace

MembershipTable::MembershipTable(int n, std::vector<std::uint8_t> values)
    : n_(n), values_(std::move(values)) {
  if (values_.size() != table_size(n)) {
    throw std::invalid_argument("membership table has " +
                                std::to_string(values_.size()) +
                                " entries, want " + std::to_string(table_size(n)));
  }
  for (std::uint8_t v : values_) {
    if (v > 1) {
      throw std::invalid_argument("membership entries must be 0 or 1");
    }
  }
}

MembershipTable MembershipTable::all_zeros(int n) {
  return MembershipTable(n, std::vector<std::uint8_t>(table_size(n), 0));
}

MembershipTable MembershipTable::all_ones(int n) {
  return MembershipTable(n, std::vector<std::uint8_t>(table_size(n), 1));
}

MembershipTable MembershipTable::from_bits(int n, std::string_view bits) {
  if (bits.size() != table_size(n)) {
    throw std::invalid_argument("bit string has length " +
                                std::to_string(bits.size()) + ", want " +
                                std::to_string(table_size(n)));
  }
  std::vector<std::uint8_t> values(bits.size());
  for (std::size_t x = 0; x < bits.size(); ++x) {
    if (bits[x] != '0' && bits[x] != '1') {
      throw std::invalid_argument("bit string may only contain 0 and 1");
    }
    values[x] = static_cast<std::uint8_t>(bits[x] - '0');
  }
  return MembershipTable(n, std::move(values));
}

MembershipTable MembershipTable::from_mask(int n, std::uint64_t mask) {
  if (n > 6) {
    throw std::invalid_argument("from_mask supports widths up to 6");
  }
  const std::size_t count = table_size(n);
  if (count < 64 && (mask >> count) != 0) {
    throw std::invalid_argument("mask has bits beyond 2^n entries");
  }
  std::vector<std::uint8_t> values(count);
  for (std::size_t x = 0; x < count; ++x) {
    values[x] = static_cast<std::uint8_t>((mask >> x) & 1);
  }
  return MembershipTable(n, std::move(values));
}

std::uint8_t MembershipTable::operator()(std::uint64_t x) const {
  if (x >= values_.size()) {
    throw std::out_of_range("membership query " + std::to_string(x) +
                            " out of range for width " + std::to_string(n_));
  }
  return values_[x];
}

std::size_t MembershipTable::accepted_count() const {
  std::size_t count = 0;
  for (std::uint8_t v : values_) count += v;
  return count;
}

std::string MembershipTable::to_bit_string() const {
  std::string bits(values_.size(), '0');
  for (std::size_t x = 0; x < values_.size(); ++x) {
    bits[x] = static_cast<char>('0' + values_[x]);
  }
  return bits;
}

PhaseProfile::PhaseProfile(int n, std::vector<double> phi0,
                           std::vector<double> phi1)
    : n_(n), phi0_(std::move(phi0)), phi1_(std::move(phi1)) {
  const std::size_t count = table_size(n);
  if (phi0_.size() != count || phi1_.size() != count) {
    throw std::invalid_argument("phase tables must each have " +
                                std::to_string(count) + " entries");
  }
  factor0_.resize(count);
  factor1_.resize(count);
  for (std::size_t x = 0; x < count; ++x) {
    phi0_[x] = reduce_angle(phi0_[x]);
    phi1_[x] = reduce_angle(phi1_[x]);
    factor0_[x] = std::polar(1.0, phi0_[x]);
    factor1_[x] = std::polar(1.0, phi1_[x]);
  }
}

PhaseProfile PhaseProfile::zero(int n) {
  const std::size_t count = table_size(n);
  return PhaseProfile(n, std::vector<double>(count, 0.0),
                      std::vector<double>(count, 0.0));
}

PhaseProfile PhaseProfile::f_pi(const MembershipTable& membership) {
  const std::size_t count = membership.size();
  std::vector<double> phi0(count, 0.0);
  for (std::size_t x = 0; x < count; ++x) {
    if (membership(x)) phi0[x] = std::numbers::pi;
  }
  return PhaseProfile(membership.width(), std::move(phi0),
                      std::vector<double>(count, 0.0));
}

PhaseProfile PhaseProfile::uniform_random(int n, std::uint64_t seed) {
  const std::size_t count = table_size(n);
  SplitMix64 rng(seed);
  std::vector<double> phi0(count), phi1(count);
  for (std::size_t x = 0; x < count; ++x) phi0[x] = rng.next_angle();
  for (std::size_t x = 0; x < count; ++x) phi1[x] = rng.next_angle();
  return PhaseProfile(n, std::move(phi0), std::move(phi1));
}

PhaseProfile PhaseProfile::encode_function(int n,
                                           std::span<const std::uint8_t> h) {
  const std::size_t count = table_size(n);
  if (h.size() != count) {
    throw std::invalid_argument("encoded table has " + std::to_string(h.size()) +
                                " entries, want " + std::to_string(count));
  }
  std::vector<double> phi0(count);
  for (std::size_t x = 0; x < count; ++x) {
    if (h[x] > 1) {
      throw std::invalid_argument("encoded table entries must be 0 or 1");
    }
    // (h+1)*pi mod 2*pi: an accepted string gets phase 0, a rejected one pi.
    phi0[x] = h[x] ? 0.0 : std::numbers::pi;
  }
  return PhaseProfile(n, std::move(phi0), std::vector<double>(count, 0.0));
}

double PhaseProfile::angle0(std::uint64_t x) const {
  if (x >= phi0_.size()) {
    throw std::out_of_range("phase lookup out of range");
  }
  return phi0_[x];
}

double PhaseProfile::angle1(std::uint64_t x) const {
  if (x >= phi1_.size()) {
    throw std::out_of_range("phase lookup out of range");
  }
  return phi1_[x];
}

bool PhaseProfile::operator==(const PhaseProfile& other) const {
  return n_ == other.n_ && phi0_ == other.phi0_ && phi1_ == other.phi1_;
}

OracleSpec::OracleSpec(MembershipTable membership, PhaseProfile phases)
    : membership_(std::move(membership)), phases_(std::move(phases)) {
  if (membership_.width() != phases_.width()) {
    throw std::invalid_argument(
        "membership width " + std::to_string(membership_.width()) +
        " does not match phase profile width " +
        std::to_string(phases_.width()));
  }
}

namespace {

void check_call(const OracleSpec& oracle, const StateVector& state) {
  if (oracle.width() != state.width()) {
    throw std::invalid_argument("oracle width " + std::to_string(oracle.width()) +
                                " does not match state width " +
                                std::to_string(state.width()));
  }
  if (!state.is_normalized()) {
    throw std::invalid_argument("oracle calls require a normalized state");
  }
}

}  // namespace

StateVector apply_oracle(const OracleSpec& oracle, const StateVector& state) {
  check_call(oracle, state);
  const auto& in = state.amplitudes();
  const MembershipTable& f = oracle.membership();
  const PhaseProfile& phases = oracle.phases();
  std::vector<Complex> out(in.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    const std::size_t i0 = static_cast<std::size_t>(x) << 1;
    const Complex a0 = in[i0] * phases.factor0(x);
    const Complex a1 = in[i0 | 1] * phases.factor1(x);
    if (f(x)) {
      out[i0 | 1] = a0;  // |x,0> lands on |x,1>, and vice versa
      out[i0] = a1;
    } else {
      out[i0] = a0;
      out[i0 | 1] = a1;
    }
  }
  return StateVector::from_unnormalized(state.width(), std::move(out));
}

StateVector apply_inverse_oracle(const OracleSpec& oracle,
                                 const StateVector& state) {
  check_call(oracle, state);
  const auto& in = state.amplitudes();
  const MembershipTable& f = oracle.membership();
  const PhaseProfile& phases = oracle.phases();
  std::vector<Complex> out(in.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    const std::size_t i0 = static_cast<std::size_t>(x) << 1;
    const Complex from0 = f(x) ? in[i0 | 1] : in[i0];
    const Complex from1 = f(x) ? in[i0] : in[i0 | 1];
    out[i0] = from0 * std::conj(phases.factor0(x));
    out[i0 | 1] = from1 * std::conj(phases.factor1(x));
  }
  return StateVector::from_unnormalized(state.width(), std::move(out));
}

FaithfulReport verify_faithful(const OracleSpec& oracle, int exhaustive_cap) {
  FaithfulReport report;
  const int n = oracle.width();
  if (n > exhaustive_cap) {
    return report;  // stays in the unchecked state
  }
  report.checked = true;

  const std::size_t dim = std::size_t{1} << (n + 1);

  // Columns of the oracle matrix, kept sparse. Bucket the entries by row so
  // the pairwise column products only touch columns that can overlap.
  std::vector<std::vector<std::pair<std::size_t, Complex>>> rows(dim);
  bool columns_normalized = true;
  for (std::size_t j = 0; j < dim; ++j) {
    const StateVector image =
        apply_oracle(oracle, StateVector::basis_state(n, basis_label(j, n)));
    double column_norm = 0.0;
    const auto& amplitudes = image.amplitudes();
    for (std::size_t i = 0; i < dim; ++i) {
      if (amplitudes[i] != Complex{0.0, 0.0}) {
        rows[i].emplace_back(j, amplitudes[i]);
        column_norm += std::norm(amplitudes[i]);
      }
    }
    if (std::abs(column_norm - 1.0) > kNormTolerance) {
      columns_normalized = false;
    }
  }

  bool columns_orthogonal = true;
  std::unordered_map<std::uint64_t, Complex> cross;
  for (const auto& row : rows) {
    for (std::size_t a = 0; a + 1 < row.size(); ++a) {
      for (std::size_t b = a + 1; b < row.size(); ++b) {
        const std::uint64_t key =
            static_cast<std::uint64_t>(row[a].first) * dim + row[b].first;
        cross[key] += std::conj(row[a].second) * row[b].second;
      }
    }
  }
  for (const auto& [key, value] : cross) {
    if (std::abs(value) > kNormTolerance) {
      columns_orthogonal = false;
      break;
    }
  }
  report.is_unitary = columns_normalized && columns_orthogonal;

  report.preserves_membership = true;
  const MembershipTable& f = oracle.membership();
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    const StateVector image = apply_oracle(
        oracle, StateVector::basis_state(n, BasisLabel{x, 0}));
    if (std::abs(answer_bit_probability(image, f(x)) - 1.0) > kNormTolerance) {
      report.preserves_membership = false;
      break;
    }
  }
  return report;
}

}  // namespace poq
