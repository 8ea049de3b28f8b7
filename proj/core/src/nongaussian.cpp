#include "cvqt/nongaussian.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "cvqt/errors.hpp"

namespace cvqt {

std::string_view to_string(ArmOperation op) {
  switch (op) {
    case ArmOperation::Subtraction: return "PS";
    case ArmOperation::Addition: return "PA";
    case ArmOperation::Catalysis: return "PC";
  }
  return "?";
}

std::string OperationSpec::photon_string() const { return fmt::format("{},{},{},{}", m1, n1, m2, n2); }

std::pair<ArmOperation, ArmOperation> classify(const OperationSpec& spec) {
  const auto arm = [](int m, int n) {
    if (m < n) return ArmOperation::Subtraction;
    if (m > n) return ArmOperation::Addition;
    return ArmOperation::Catalysis;
  };
  return {arm(spec.m1, spec.n1), arm(spec.m2, spec.n2)};
}

std::string_view to_string(SeedFamily family) { return family == SeedFamily::TMSV ? "TMSV" : "TMST"; }

SeedFamily parse_family(std::string_view name) {
  if (name == "TMSV" || name == "tmsv") return SeedFamily::TMSV;
  if (name == "TMST" || name == "tmst") return SeedFamily::TMST;
  throw DomainError(fmt::format("unknown seed family '{}'", name));
}

GaussianState SeedDescriptor::state() const {
  return family == SeedFamily::TMSV ? make_tmsv(r) : make_tmst(r, kappa);
}

NGState build_ng_state(const GaussianState& seed, const OperationSpec& spec, const SeedDescriptor& descriptor) {
  if (seed.n_modes() != 2) throw DimensionError("build_ng_state: seed must have two modes");
  if (!(spec.transmissivity > 0.0 && spec.transmissivity < 1.0)) {
    throw DomainError(fmt::format("transmissivity {} outside (0, 1)", spec.transmissivity));
  }
  if (spec.m1 < 0 || spec.n1 < 0 || spec.m2 < 0 || spec.n2 < 0) {
    throw DomainError("photon numbers must be non-negative");
  }
  if (seed.mean().cwiseAbs().maxCoeff() != 0.0) throw DomainError("build_ng_state: seed must be zero-mean");
  if (!is_physical(seed)) throw DomainError("build_ng_state: seed is not a physical state");

  // Joint order (A1, F1, A2, F2).
  constexpr int kVars = 8;
  constexpr std::array<int, 4> kSeedVars = {0, 1, 4, 5};
  constexpr std::array<int, 2> kF1 = {2, 3};
  constexpr std::array<int, 2> kF2 = {6, 7};

  PolyGaussian joint = substitute(from_gaussian(seed), VariableMap::selection(kVars, kSeedVars));
  joint = multiply(joint, substitute(fock_char(spec.m1), VariableMap::selection(kVars, kF1)));
  joint = multiply(joint, substitute(fock_char(spec.m2), VariableMap::selection(kVars, kF2)));

  const double t = spec.transmissivity;
  const SymplecticMatrix mixers = beam_splitter(4, 0, 1, t) * beam_splitter(4, 2, 3, t);
  joint = substitute(joint, VariableMap{mixers.inverse().matrix()});

  joint = multiply(joint, substitute(fock_char(spec.n1), VariableMap::selection(kVars, kF1)));
  joint = multiply(joint, substitute(fock_char(spec.n2), VariableMap::selection(kVars, kF2)));
  constexpr std::array<int, 4> kAncillas = {2, 3, 6, 7};
  PolyGaussian conditioned = integrate_out(joint, kAncillas);

  const Complex p = conditioned.value_at_origin();
  if (std::abs(p.imag()) > 1e-9 * std::max(1.0, std::abs(p))) {
    throw NumericalError(fmt::format("success probability has imaginary part {:.3e}", p.imag()));
  }
  if (!(p.real() >= kMinSuccessProbability)) {
    throw MeasureZeroOutcome(fmt::format("heralding outcome ({}) has probability {:.3e}", spec.photon_string(), p.real()));
  }
  if (p.real() > 1.0 + 1e-9) throw NumericalError(fmt::format("success probability {} exceeds 1", p.real()));
  return NGState{conditioned.scaled(1.0 / p.real()), std::min(p.real(), 1.0), spec, descriptor};
}

NGState build_ng_state(const SeedDescriptor& seed, const OperationSpec& spec) {
  return build_ng_state(seed.state(), spec, seed);
}

}  // namespace cvqt
