#pragma once

#include "cvqt/charfn.hpp"
#include "cvqt/gaussian.hpp"
#include "cvqt/nongaussian.hpp"

namespace cvqt {

/// Unit-gain VBK output rule: the resource enters as chi_res(tau, -sigma, tau, sigma), i.e.
/// the 4 x 2 map Lambda_res = M (tau, sigma).
VariableMap vbk_resource_map();

/// Characteristic function of the coherent state |alpha>, d = sqrt(2) (Re alpha, Im alpha).
PolyGaussian coherent_char(Complex alpha);

/// chi_out(tau, sigma) = chi_in(tau, sigma) * chi_res(M (tau, sigma)).
PolyGaussian output_char(const PolyGaussian& resource, const PolyGaussian& input,
                         const VariableMap& resource_map = vbk_resource_map());

/// |F - 1/2| below this sets the boundary flag.
inline constexpr double kFidelityBoundaryBand = 1e-9;
/// F within this of 1/2 counts as 1/2, so the vacuum resource is never a success.
inline constexpr double kFidelityRoundoff = 1e-12;

struct SuccessVerdict {
  bool success = false;  ///< F > 1/2 + kFidelityRoundoff, the classical coherent-state bound
  bool near_boundary = false;
};

SuccessVerdict classify_success(double fidelity);

struct FidelityRecord {
  double fidelity = 0.0;
  Complex input_alpha{};
  SuccessVerdict verdict;
};

/// F = (1/2pi) Int d^2Lambda chi_in(Lambda) chi_out(-Lambda) for a coherent input. The
/// imaginary part must vanish to 1e-9; values within 1e-9 outside [0, 1] are clamped, larger
/// excursions throw NumericalError.
FidelityRecord fidelity(const PolyGaussian& resource, Complex alpha,
                        const VariableMap& resource_map = vbk_resource_map());
FidelityRecord fidelity(const NGState& resource, Complex alpha = {});
FidelityRecord fidelity(const GaussianState& resource, Complex alpha = {});

}  // namespace cvqt
