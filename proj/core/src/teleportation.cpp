#include "cvqt/teleportation.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "cvqt/errors.hpp"

namespace cvqt {

VariableMap vbk_resource_map() {
  Matrix m(4, 2);
  // clang-format off
  m << 1,  0,
       0, -1,
       1,  0,
       0,  1;
  // clang-format on
  return {std::move(m)};
}

PolyGaussian coherent_char(Complex alpha) {
  Vector d(2);
  d << std::numbers::sqrt2 * alpha.real(), std::numbers::sqrt2 * alpha.imag();
  return from_gaussian(GaussianState(std::move(d), 0.5 * Matrix::Identity(2, 2)));
}

PolyGaussian output_char(const PolyGaussian& resource, const PolyGaussian& input, const VariableMap& resource_map) {
  if (resource.n_vars() != 4 || input.n_vars() != 2) {
    throw DimensionError(fmt::format("output_char: resource has {} variables, input {}", resource.n_vars(),
                                     input.n_vars()));
  }
  return multiply(input, substitute(resource, resource_map));
}

SuccessVerdict classify_success(double fidelity) {
  return {fidelity > 0.5 + kFidelityRoundoff, std::abs(fidelity - 0.5) < kFidelityBoundaryBand};
}

FidelityRecord fidelity(const PolyGaussian& resource, Complex alpha, const VariableMap& resource_map) {
  const PolyGaussian input = coherent_char(alpha);
  const PolyGaussian out = output_char(resource, input, resource_map);
  const PolyGaussian out_reflected = substitute(out, VariableMap{-Matrix::Identity(2, 2)});
  constexpr std::array<int, 2> kBoth = {0, 1};
  const Complex overlap = integrate_out(multiply(input, out_reflected), kBoth).value_at_origin();
  if (std::abs(overlap.imag()) > 1e-9) {
    throw NumericalError(fmt::format("fidelity has imaginary part {:.3e}", overlap.imag()));
  }
  double f = overlap.real();
  if (f < -1e-9 || f > 1.0 + 1e-9) throw NumericalError(fmt::format("fidelity {} outside [0, 1]", f));
  f = std::clamp(f, 0.0, 1.0);
  return {f, alpha, classify_success(f)};
}

FidelityRecord fidelity(const NGState& resource, Complex alpha) { return fidelity(resource.chi, alpha); }

FidelityRecord fidelity(const GaussianState& resource, Complex alpha) {
  return fidelity(from_gaussian(resource), alpha);
}

}  // namespace cvqt
