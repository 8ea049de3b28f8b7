#pragma once

#include <Eigen/Dense>

namespace cvqt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Tolerance for S Omega S^T = Omega, scaled by max(1, |S|^2).
inline constexpr double kSymplecticTolerance = 1e-12;
/// Minimum eigenvalue of V + i Omega / 2 allowed for a physical state.
inline constexpr double kPhysicalityTolerance = -1e-10;

/// Block-diagonal symplectic form Omega = (+) [[0, 1], [-1, 0]] in (q1, p1, q2, p2, ...) order.
Matrix symplectic_form(int n_modes);

/// A real 2n x 2n matrix that preserves the symplectic form.
///
/// Construction validates S Omega S^T = Omega and throws DomainError otherwise, so every
/// instance in circulation is symplectic.
class SymplecticMatrix {
 public:
  explicit SymplecticMatrix(Matrix m);

  static SymplecticMatrix identity(int n_modes);

  int n_modes() const { return static_cast<int>(m_.rows() / 2); }
  const Matrix& matrix() const { return m_; }

  SymplecticMatrix inverse() const;

  friend SymplecticMatrix operator*(const SymplecticMatrix& a, const SymplecticMatrix& b);

 private:
  Matrix m_;
};

/// a (+) b acting on the modes of a followed by the modes of b.
SymplecticMatrix direct_sum(const SymplecticMatrix& a, const SymplecticMatrix& b);

/// Single-mode squeezer diag(e^{-r}, e^{r}).
SymplecticMatrix squeezer(double r);

/// Beam splitter of power transmissivity T = cos^2(theta) between modes i and j of an
/// n-mode system:
///   [[ cos 1,  sin 1],
///    [-sin 1,  cos 1]]
/// on (q_i, p_i, q_j, p_j). Throws DomainError unless 0 < T <= 1 and i != j.
SymplecticMatrix beam_splitter(int n_modes, int i, int j, double transmissivity);

/// Mean vector and covariance matrix of an n-mode Gaussian state, hbar = 1 (vacuum
/// variance 1/2), quadratures ordered (q1, p1, ..., qn, pn).
class GaussianState {
 public:
  GaussianState(Vector mean, Matrix cov);

  static GaussianState vacuum(int n_modes);
  /// Single-mode thermal state with kappa = <n> + 1/2, i.e. V = kappa * 1.
  static GaussianState thermal(double kappa);

  int n_modes() const { return static_cast<int>(mean_.size() / 2); }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }

 private:
  Vector mean_;
  Matrix cov_;
};

/// Tensor product of two Gaussian states (modes of a first).
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// d -> S d, V -> S V S^T.
GaussianState apply(const SymplecticMatrix& s, const GaussianState& g);

/// Two-mode squeezed vacuum, closed form:
///   V = 1/2 [[ch, 0, sh, 0], [0, ch, 0, -sh], [sh, 0, ch, 0], [0, -sh, 0, ch]]
/// with ch = cosh 2r, sh = sinh 2r.
GaussianState make_tmsv(double r);

/// Two-mode squeezed thermal state seeded with kappa = <n> + 1/2 >= 1/2. The diagonal is
/// kappa cosh 2r and the off-diagonal +-kappa sinh 2r in the TMSV pattern; kappa = 1/2 is
/// the TMSV.
GaussianState make_tmst(double r, double kappa);

/// Smallest eigenvalue of the Hermitian matrix V + i Omega / 2.
double min_uncertainty_eigenvalue(const GaussianState& g);
/// Same check on a bare covariance matrix.
double min_uncertainty_eigenvalue(const Matrix& cov);

bool is_physical(const GaussianState& g);

}  // namespace cvqt
