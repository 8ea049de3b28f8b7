#include "cvqt/gaussian.hpp"

#include <cmath>
#include <complex>

#include <fmt/format.h>

#include "cvqt/errors.hpp"

namespace cvqt {

Matrix symplectic_form(int n_modes) {
  if (n_modes <= 0) throw DomainError("symplectic_form: n_modes must be positive");
  Matrix omega = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

SymplecticMatrix::SymplecticMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0 || m_.rows() % 2 != 0) {
    throw DimensionError(fmt::format("symplectic matrix must be 2n x 2n, got {}x{}", m_.rows(),
                                     m_.cols()));
  }
  const Matrix omega = symplectic_form(static_cast<int>(m_.rows() / 2));
  const double scale = std::max(1.0, m_.squaredNorm() / static_cast<double>(m_.rows()));
  const double dev = (m_ * omega * m_.transpose() - omega).cwiseAbs().maxCoeff();
  if (dev > kSymplecticTolerance * scale) {
    throw DomainError(fmt::format("matrix is not symplectic (deviation {:.3e})", dev));
  }
}

SymplecticMatrix SymplecticMatrix::identity(int n_modes) {
  return SymplecticMatrix(Matrix::Identity(2 * n_modes, 2 * n_modes));
}

SymplecticMatrix SymplecticMatrix::inverse() const {
  // S^{-1} = -Omega S^T Omega.
  const Matrix omega = symplectic_form(n_modes());
  return SymplecticMatrix(-omega * m_.transpose() * omega);
}

SymplecticMatrix operator*(const SymplecticMatrix& a, const SymplecticMatrix& b) {
  if (a.m_.rows() != b.m_.rows()) throw DimensionError("symplectic product: mode count mismatch");
  return SymplecticMatrix(a.m_ * b.m_);
}

SymplecticMatrix direct_sum(const SymplecticMatrix& a, const SymplecticMatrix& b) {
  const auto na = a.matrix().rows();
  const auto nb = b.matrix().rows();
  Matrix m = Matrix::Zero(na + nb, na + nb);
  m.topLeftCorner(na, na) = a.matrix();
  m.bottomRightCorner(nb, nb) = b.matrix();
  return SymplecticMatrix(std::move(m));
}

SymplecticMatrix squeezer(double r) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::exp(-r);
  m(1, 1) = std::exp(r);
  return SymplecticMatrix(std::move(m));
}

SymplecticMatrix beam_splitter(int n_modes, int i, int j, double transmissivity) {
  if (!(transmissivity > 0.0 && transmissivity <= 1.0)) {
    throw DomainError(fmt::format("beam splitter transmissivity {} outside (0, 1]", transmissivity));
  }
  if (i == j || i < 0 || j < 0 || i >= n_modes || j >= n_modes) {
    throw DomainError(fmt::format("beam splitter modes ({}, {}) invalid for {} modes", i, j, n_modes));
  }
  const double c = std::sqrt(transmissivity);
  const double s = std::sqrt(1.0 - transmissivity);
  Matrix m = Matrix::Identity(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < 2; ++k) {
    m(2 * i + k, 2 * i + k) = c;
    m(2 * j + k, 2 * j + k) = c;
    m(2 * i + k, 2 * j + k) = s;
    m(2 * j + k, 2 * i + k) = -s;
  }
  return SymplecticMatrix(std::move(m));
}

GaussianState::GaussianState(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() == 0 || mean_.size() % 2 != 0) {
    throw DimensionError("Gaussian state mean must have even, positive length");
  }
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
    throw DimensionError(fmt::format("covariance is {}x{} but mean has length {}", cov_.rows(),
                                     cov_.cols(), mean_.size()));
  }
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, cov_.cwiseAbs().maxCoeff())) {
    throw DomainError("covariance matrix is not symmetric");
  }
}

GaussianState GaussianState::vacuum(int n_modes) {
  return GaussianState(Vector::Zero(2 * n_modes), 0.5 * Matrix::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState GaussianState::thermal(double kappa) {
  if (!(kappa >= 0.5)) throw DomainError(fmt::format("thermal seed kappa = {} < 1/2", kappa));
  return GaussianState(Vector::Zero(2), kappa * Matrix::Identity(2, 2));
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const auto na = a.mean().size();
  const auto nb = b.mean().size();
  Vector d(na + nb);
  d << a.mean(), b.mean();
  Matrix v = Matrix::Zero(na + nb, na + nb);
  v.topLeftCorner(na, na) = a.cov();
  v.bottomRightCorner(nb, nb) = b.cov();
  return GaussianState(std::move(d), std::move(v));
}

GaussianState apply(const SymplecticMatrix& s, const GaussianState& g) {
  if (s.matrix().rows() != g.mean().size()) {
    throw DimensionError(fmt::format("cannot apply {}-mode transform to {}-mode state", s.n_modes(),
                                     g.n_modes()));
  }
  Matrix v = s.matrix() * g.cov() * s.matrix().transpose();
  v = 0.5 * (v + v.transpose()).eval();
  return GaussianState(s.matrix() * g.mean(), std::move(v));
}

GaussianState make_tmsv(double r) { return make_tmst(r, 0.5); }

GaussianState make_tmst(double r, double kappa) {
  if (!(kappa >= 0.5)) throw DomainError(fmt::format("TMST requires kappa >= 1/2, got {}", kappa));
  if (!std::isfinite(r) || r < 0.0) throw DomainError(fmt::format("squeezing r = {} must be >= 0", r));
  const double b = kappa * std::cosh(2.0 * r);
  const double c = kappa * std::sinh(2.0 * r);
  Matrix v(4, 4);
  // clang-format off
  v << b,  0,  c,  0,
       0,  b,  0, -c,
       c,  0,  b,  0,
       0, -c,  0,  b;
  // clang-format on
  return GaussianState(Vector::Zero(4), std::move(v));
}

double min_uncertainty_eigenvalue(const Matrix& cov) {
  const int n = static_cast<int>(cov.rows() / 2);
  const Eigen::MatrixXcd h =
      cov.cast<std::complex<double>>() + std::complex<double>(0.0, 0.5) * symplectic_form(n).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double min_uncertainty_eigenvalue(const GaussianState& g) { return min_uncertainty_eigenvalue(g.cov()); }

bool is_physical(const GaussianState& g) { return min_uncertainty_eigenvalue(g) >= kPhysicalityTolerance; }

}  // namespace cvqt
