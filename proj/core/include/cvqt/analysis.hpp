#pragma once

#include <cstdint>

#include "cvqt/charfn.hpp"
#include "cvqt/gaussian.hpp"
#include "cvqt/nongaussian.hpp"

namespace cvqt {

/// Powers (r1, s1, r2, s2) of the symmetrically ordered product q1^r1 p1^s1 q2^r2 p2^s2.
struct MomentRequest {
  int q1 = 0;
  int p1 = 0;
  int q2 = 0;
  int p2 = 0;
};

/// <{q1^r1 p1^s1 q2^r2 p2^s2}_sym> = (1/i)^{r1+r2} (1/-i)^{s1+s2} d^{r1}_{sigma1} d^{s1}_{tau1}
/// d^{r2}_{sigma2} d^{s2}_{tau2} chi |_0. An imaginary residue above 1e-9 signals a convention
/// bug and throws NumericalError.
double symmetric_moment(const PolyGaussian& chi, const MomentRequest& req);

/// States closer than this to lambda_min = 1/2 carry a boundary flag.
inline constexpr double kBoundaryBand = 1e-9;
/// lambda_min within this of 1/2 counts as 1/2 (round-off on the vacuum and coherent states).
inline constexpr double kBoundaryRoundoff = 1e-12;

struct SqueezingReport {
  Matrix cov;
  Vector mean;
  double lambda_min = 0.0;
  /// lambda_min < 1/2 - kBoundaryRoundoff. lambda_min == 1/2 counts as not squeezed.
  bool squeezed = false;
  bool near_boundary = false;
};

/// U(n)-invariant squeezing verdict of a covariance matrix: the smallest eigenvalue against 1/2.
SqueezingReport squeezing_report(Matrix cov, Vector mean);

/// First moments and covariance V_ij = <{xi_i, xi_j}>/2 - d_i d_j of a normalized two-mode
/// characteristic function.
SqueezingReport covariance_from_char(const PolyGaussian& chi);
SqueezingReport covariance_of(const NGState& state);

/// Passive (orthogonal and symplectic) two-mode transform K(X, Y) for the unitary X - iY,
/// in (q1, p1, q2, p2) ordering.
SymplecticMatrix passive_from_unitary(const Eigen::Matrix2cd& u);

/// Reproducible Haar-random passive transform; the same seed always gives the same matrix.
SymplecticMatrix random_passive(std::uint64_t seed);

}  // namespace cvqt
