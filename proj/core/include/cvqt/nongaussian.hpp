#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "cvqt/charfn.hpp"
#include "cvqt/gaussian.hpp"

namespace cvqt {

enum class ArmOperation { Subtraction, Addition, Catalysis };

/// "PS", "PA" or "PC".
std::string_view to_string(ArmOperation op);

/// Ancilla photon numbers m_i, detected photon numbers n_i and the common beam-splitter
/// transmissivity T of the heralded scheme. Arm i performs subtraction when m_i < n_i,
/// addition when m_i > n_i and catalysis when m_i == n_i.
struct OperationSpec {
  int m1 = 0;
  int n1 = 0;
  int m2 = 0;
  int n2 = 0;
  double transmissivity = 0.9;

  static OperationSpec subtraction(double t) { return {0, 1, 0, 1, t}; }
  static OperationSpec addition(double t) { return {1, 0, 1, 0, t}; }
  static OperationSpec catalysis(double t) { return {1, 1, 1, 1, t}; }

  /// "m1,n1,m2,n2".
  std::string photon_string() const;
};

std::pair<ArmOperation, ArmOperation> classify(const OperationSpec& spec);

enum class SeedFamily { TMSV, TMST };

std::string_view to_string(SeedFamily family);
SeedFamily parse_family(std::string_view name);

/// Which Gaussian resource fed the scheme. kappa is ignored for TMSV.
struct SeedDescriptor {
  SeedFamily family = SeedFamily::TMSV;
  double r = 0.0;
  double kappa = 0.5;

  GaussianState state() const;
};

/// P_NG below this is treated as an analytic zero.
inline constexpr double kMinSuccessProbability = 1e-15;

/// Normalized characteristic function (variables tau1, sigma1, tau2, sigma2 of modes A1, A2)
/// of a heralded non-Gaussian two-mode state, with the heralding probability.
struct NGState {
  PolyGaussian chi;
  double p_success;
  OperationSpec spec;
  SeedDescriptor seed;
};

/// Mixes each mode of a zero-mean two-mode seed with a Fock ancilla |m_i> on a
/// transmissivity-T beam splitter and projects the ancilla outputs onto |n_i>.
///
/// The joint function lives on (Lambda1, Lambda3, Lambda2, Lambda4) = (A1, F1, A2, F2); the
/// beam splitters act as B_{A1F1}(T) (+) B_{A2F2}(T) and enter through chi(S^{-1} Lambda).
/// The projection integrates against chi_{|n>}(Lambda) rather than chi_{|n>}(-Lambda); Fock
/// characteristic functions are even, so the two agree.
///
/// Throws DomainError for T outside (0, 1) or a displaced seed, MeasureZeroOutcome when
/// P_NG < kMinSuccessProbability.
NGState build_ng_state(const GaussianState& seed, const OperationSpec& spec, const SeedDescriptor& descriptor);
NGState build_ng_state(const SeedDescriptor& seed, const OperationSpec& spec);

}  // namespace cvqt
