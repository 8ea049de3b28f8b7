#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cvqt/charfn.hpp"
#include "cvqt/nongaussian.hpp"

namespace cvqt::oracle {

// Brute-force truncated Fock-space model of the heralded scheme. Independent of the
// characteristic-function calculus; used to cross-check it.

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

/// Population allowed outside the truncated space before CutoffTooSmall is raised.
inline constexpr double kMaxTailPopulation = 1e-10;
inline constexpr int kDefaultCutoff = 30;
inline constexpr int kDefaultPadding = 10;
inline constexpr int kMaxCutoff = 200;

/// Annihilation operator on {|0>, ..., |cutoff>}.
RMatrix annihilation(int cutoff);

/// exp[r (a^2 - a^dag^2) / 2], exponentiated on cutoff + padding levels and cropped.
RMatrix squeeze_operator(double r, int cutoff, int padding = kDefaultPadding);

/// exp[theta (a_i^dag a_j - a_i a_j^dag)] restricted to total photon number `total`, in the
/// basis |k, total - k>, k = 0..total (k counts photons in mode i). Exact: the generator
/// conserves total photon number.
RMatrix beam_splitter_block(double theta, int total);

/// Displacement operator matrix elements <m|D(beta)|n>, 0 <= m, n <= cutoff, from the closed
/// Laguerre form (no truncation error in the returned entries). The matrix-element recurrence
/// is unstable beyond a few tens of levels.
CMatrix displacement(Complex beta, int cutoff);

/// Two-mode density operator that commutes with n1 - n2, stored as one dense block per
/// photon-number difference D = n1 - n2. Block D has basis |a, a - D> for a in
/// [max(0, D), min(N, N + D)], with N the per-mode cutoff.
class BlockDensity {
 public:
  explicit BlockDensity(int cutoff);

  int cutoff() const { return cutoff_; }
  int first_index(int diff) const;
  int block_size(int diff) const;
  CMatrix& block(int diff) { return blocks_[diff + cutoff_]; }
  const CMatrix& block(int diff) const { return blocks_[diff + cutoff_]; }

  /// Accumulate weight * |psi><psi| keeping only entries inside the blocks. psi is indexed
  /// psi(n1, n2).
  void add_pure(const CMatrix& psi, double weight);

  double trace() const;
  double min_eigenvalue() const;
  /// Tr[rho (A (x) B)] for single-mode operators on the truncated space.
  Complex expect(const CMatrix& a, const CMatrix& b) const;
  /// Full (N+1)^2 dense matrix, row index n1 * (N + 1) + n2.
  CMatrix to_dense() const;

 private:
  int cutoff_;
  std::vector<CMatrix> blocks_;
};

struct FockSeed {
  BlockDensity rho;
  /// 1 - Tr(rho): population lost to the truncation.
  double tail;
};

/// Two-mode squeezer exp[r (a^dag b^dag - a b)] applied to thermal states (kappa = <n> + 1/2)
/// on both modes, block by block in n1 - n2. kappa = 1/2 gives the TMSV. Throws
/// CutoffTooSmall when the tail exceeds kMaxTailPopulation.
FockSeed oracle_seed(const SeedDescriptor& seed, int cutoff, int padding = kDefaultPadding);

/// oracle_seed, raising the cutoff in steps of 10 from `initial_cutoff` until the tail
/// check passes.
FockSeed oracle_seed_auto(const SeedDescriptor& seed, int initial_cutoff = kDefaultCutoff);

/// sqrt(1 - l^2) sum_n l^n |n, n>, l = tanh r, as psi(n1, n2).
CMatrix tmsv_schmidt_state(double r, int cutoff);

/// Kraus operator <n|_F U_BS(T) |m>_F acting on the signal mode, (cutoff+1)^2.
RMatrix heralding_kraus(int m, int n, double transmissivity, int cutoff);

struct FockNG {
  BlockDensity rho;  ///< normalized
  double p_success;
};

/// Heralded state: Fock ancillas |m_i>, transmissivity-T beam splitters, projection on |n_i>.
/// Throws MeasureZeroOutcome when the probability is below 1e-15.
FockNG oracle_ng(const BlockDensity& seed, const OperationSpec& spec);

/// Mean (q1, p1, q2, p2).
Vector oracle_mean(const BlockDensity& rho);
/// Covariance 1/2 <{dxi_i, dxi_j}>.
Matrix oracle_covariance(const BlockDensity& rho);
/// Tr[rho exp(-i Lambda^T Omega xi)] with Lambda = (tau1, sigma1, tau2, sigma2).
Complex oracle_char(const BlockDensity& rho, std::span<const double, 4> lambda);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int nodes_per_axis = 0;
};

struct QuadratureOptions {
  double tolerance = 1e-10;
  int max_nodes = 160;
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Teleportation fidelity of a coherent input through the VBK output rule, with the
/// resource's characteristic function taken from the Fock model. Tensor Gauss-Legendre rule
/// on [-L, L]^2 (Gaussian envelope below 1e-12 at the edge), node count raised until two
/// successive rules agree to `tolerance`. Throws NumericalError on non-convergence.
QuadratureResult oracle_fidelity(const BlockDensity& resource, Complex alpha, const QuadratureOptions& options = {});

}  // namespace cvqt::oracle
