#pragma once

// Reference implementation used only by tests. The oracle is materialized as
// a dense matrix straight from its basis-state rule and applied by plain
// matrix-vector products, so none of the optimized library paths are
// involved. Keep this file independent of apply_oracle and friends.

#include <cmath>
#include <complex>
#include <vector>

#include "poq/oracle.hpp"
#include "poq/protocols.hpp"

namespace poq::testing {

using Matrix = std::vector<std::vector<Complex>>;  // matrix[row][column]

inline Matrix dense_oracle_matrix(const OracleSpec& oracle) {
  const int n = oracle.width();
  const std::size_t dim = std::size_t{1} << (n + 1);
  Matrix matrix(dim, std::vector<Complex>(dim, Complex{0.0, 0.0}));
  for (std::size_t column = 0; column < dim; ++column) {
    const std::uint64_t x = column >> 1;
    const int y = static_cast<int>(column & 1);
    const int f = oracle.membership()(x);
    const int y_out = y == 0 ? f : 1 - f;
    const double angle =
        y == 0 ? oracle.phases().angle0(x) : oracle.phases().angle1(x);
    const std::size_t row = (static_cast<std::size_t>(x) << 1) |
                            static_cast<unsigned>(y_out);
    matrix[row][column] = std::polar(1.0, angle);
  }
  return matrix;
}

inline std::vector<Complex> apply_matrix(const Matrix& matrix,
                                         const std::vector<Complex>& v) {
  std::vector<Complex> out(matrix.size(), Complex{0.0, 0.0});
  for (std::size_t row = 0; row < matrix.size(); ++row) {
    for (std::size_t column = 0; column < v.size(); ++column) {
      out[row] += matrix[row][column] * v[column];
    }
  }
  return out;
}

inline std::vector<Complex> apply_adjoint(const Matrix& matrix,
                                          const std::vector<Complex>& v) {
  std::vector<Complex> out(matrix.size(), Complex{0.0, 0.0});
  for (std::size_t row = 0; row < matrix.size(); ++row) {
    for (std::size_t column = 0; column < v.size(); ++column) {
      out[row] += std::conj(matrix[column][row]) * v[column];
    }
  }
  return out;
}

inline std::vector<Complex> dense_sign_flip(std::vector<Complex> v) {
  for (std::size_t i = 1; i < v.size(); i += 2) v[i] = -v[i];
  return v;
}

inline Complex dense_inner(const std::vector<Complex>& a,
                           const std::vector<Complex>& b) {
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

struct DenseDJ {
  Complex inner;
  double probability;
};

inline DenseDJ dense_dj(const OracleSpec& oracle, MiddleOp middle,
                        SecondCall second) {
  const std::size_t count = std::size_t{1} << oracle.width();
  std::vector<Complex> psi(count << 1, Complex{0.0, 0.0});
  const double weight = 1.0 / std::sqrt(static_cast<double>(count));
  for (std::size_t x = 0; x < count; ++x) psi[x << 1] = Complex{weight, 0.0};

  const Matrix u = dense_oracle_matrix(oracle);
  std::vector<Complex> state = apply_matrix(u, psi);
  if (middle == MiddleOp::sign_flip) state = dense_sign_flip(std::move(state));
  state = second == SecondCall::forward_u ? apply_matrix(u, state)
                                          : apply_adjoint(u, state);
  const Complex inner = dense_inner(psi, state);
  return DenseDJ{inner, std::norm(inner)};
}

}  // namespace poq::testing
