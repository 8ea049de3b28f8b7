#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cvqt/gaussian.hpp"

namespace cvqt {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;

/// Exponent multi-index packed 8 bits per variable (variable i in bits [8i, 8i + 8)).
using Exponents = std::uint64_t;

inline constexpr int kMaxVars = 8;
inline constexpr int kMaxExponent = 255;

constexpr int exponent_of(Exponents e, int var) { return static_cast<int>((e >> (8 * var)) & 0xffu); }
constexpr Exponents unit_exponent(int var) { return Exponents{1} << (8 * var); }
int total_degree(Exponents e);
Exponents pack_exponents(std::span<const int> powers);

/// Sparse polynomial: exponent multi-index -> complex coefficient.
using Polynomial = std::map<Exponents, Complex>;

/// A function of real variables Lambda = (tau1, sigma1, tau2, sigma2, ...) of the form
///
///   f(Lambda) = P(Lambda) * exp(-1/2 Lambda^T G Lambda + l^T Lambda)
///
/// with a real symmetric kernel G, a complex linear phase l and a sparse complex polynomial P.
/// Wigner characteristic functions of Gaussian states, Fock states and every state obtained
/// from them by Gaussian unitaries and photon-number projections have this form exactly.
///
/// At most kMaxVars variables are supported. A 0-variable function is a scalar.
class PolyGaussian {
 public:
  /// The constant function 1 over n_vars variables.
  explicit PolyGaussian(int n_vars);
  PolyGaussian(Matrix kernel, CVector linear_phase, Polynomial poly);

  int n_vars() const { return static_cast<int>(kernel_.rows()); }
  const Matrix& kernel() const { return kernel_; }
  const CVector& linear_phase() const { return phase_; }
  const Polynomial& poly() const { return poly_; }

  /// Value at Lambda = 0, the constant coefficient.
  Complex value_at_origin() const;
  int degree() const;

  PolyGaussian scaled(Complex factor) const;

 private:
  Matrix kernel_;
  CVector phase_;
  Polynomial poly_;
};

/// Linear change of variables Lambda_old = M Lambda_new. M is n_old x n_new and need not be
/// square.
struct VariableMap {
  Matrix matrix;

  static VariableMap identity(int n_vars);
  /// Lift an n_old-variable function into n_new variables: old variable k becomes new
  /// variable indices[k].
  static VariableMap selection(int n_new, std::span<const int> indices);
};

/// exp(-1/2 Lambda^T (Omega V Omega^T) Lambda - i (Omega d)^T Lambda).
PolyGaussian from_gaussian(const GaussianState& g);

/// Fock state |n>: exp(-(tau^2 + sigma^2)/4) L_n((tau^2 + sigma^2)/2).
PolyGaussian fock_char(int n);

/// Pointwise product of functions over the same variables.
PolyGaussian multiply(const PolyGaussian& a, const PolyGaussian& b);

/// g(Lambda_new) = f(M Lambda_new).
PolyGaussian substitute(const PolyGaussian& f, const VariableMap& map);

/// Integrate the listed variables over R^k, with a factor 1/(2 pi) per integrated pair, so
/// that (1/2pi) Int d^2x exp(-a |x|^2 / 2) = 1/a. The number of variables must be even and
/// the kernel block over them positive definite (NonConvergentIntegral otherwise). The
/// remaining variables keep their relative order.
PolyGaussian integrate_out(const PolyGaussian& f, std::span<const int> vars);

/// Exact partial derivative d^{o_1} ... d^{o_n} f at Lambda = 0.
Complex derivative_at_zero(const PolyGaussian& f, std::span<const int> orders);

Complex evaluate(const PolyGaussian& f, std::span<const double> point);

namespace poly {

Polynomial multiply(const Polynomial& a, const Polynomial& b);
void add_scaled(Polynomial& acc, const Polynomial& p, Complex factor);
/// Drop exact zeros. Small coefficients are kept: heralded states with P_NG near 1e-9 are
/// differences of O(1) terms, and a relative cut loses them.
void prune(Polynomial& p);

}  // namespace poly

}  // namespace cvqt
