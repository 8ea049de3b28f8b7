#include "cvqt/analysis.hpp"

#include <array>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "cvqt/errors.hpp"

namespace cvqt {

namespace {

constexpr double kImaginaryTolerance = 1e-9;

}  // namespace

double symmetric_moment(const PolyGaussian& chi, const MomentRequest& req) {
  if (chi.n_vars() != 4) throw DimensionError("symmetric_moment expects a two-mode function");
  if (req.q1 < 0 || req.p1 < 0 || req.q2 < 0 || req.p2 < 0) throw DomainError("negative moment power");
  // q_i pairs with sigma_i, p_i with tau_i; variables are (tau1, sigma1, tau2, sigma2).
  const std::array<int, 4> orders = {req.p1, req.q1, req.p2, req.q2};
  const Complex d = derivative_at_zero(chi, orders);
  const int nq = req.q1 + req.q2;
  const int np = req.p1 + req.p2;
  // (1/i)^nq (1/-i)^np = (-i)^nq (i)^np = i^(np - nq)
  static constexpr std::array<Complex, 4> kPowersOfI = {Complex{1, 0}, Complex{0, 1}, Complex{-1, 0}, Complex{0, -1}};
  const Complex value = d * kPowersOfI[((np - nq) % 4 + 4) % 4];
  if (std::abs(value.imag()) > kImaginaryTolerance * std::max(1.0, std::abs(value.real()))) {
    throw NumericalError(fmt::format("moment ({},{},{},{}) has imaginary part {:.3e}", req.q1, req.p1, req.q2,
                                     req.p2, value.imag()));
  }
  return value.real();
}

SqueezingReport squeezing_report(Matrix cov, Vector mean) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov, Eigen::EigenvaluesOnly);
  SqueezingReport report;
  report.lambda_min = es.eigenvalues().minCoeff();
  report.squeezed = report.lambda_min < 0.5 - kBoundaryRoundoff;
  report.near_boundary = std::abs(report.lambda_min - 0.5) < kBoundaryBand;
  report.cov = std::move(cov);
  report.mean = std::move(mean);
  return report;
}

SqueezingReport covariance_from_char(const PolyGaussian& chi) {
  if (chi.n_vars() != 4) throw DimensionError("covariance_from_char expects a two-mode function");
  const auto unit = [](int k) {
    std::array<int, 4> powers{};
    powers[k] = 1;
    return powers;
  };
  // xi = (q1, p1, q2, p2)
  Vector mean(4);
  for (int k = 0; k < 4; ++k) {
    const auto u = unit(k);
    mean(k) = symmetric_moment(chi, {u[0], u[1], u[2], u[3]});
  }
  Matrix cov(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      std::array<int, 4> powers = unit(i);
      powers[j] += 1;
      const double second = symmetric_moment(chi, {powers[0], powers[1], powers[2], powers[3]});
      cov(i, j) = cov(j, i) = second - mean(i) * mean(j);
    }
  }
  return squeezing_report(std::move(cov), std::move(mean));
}

SqueezingReport covariance_of(const NGState& state) { return covariance_from_char(state.chi); }

SymplecticMatrix passive_from_unitary(const Eigen::Matrix2cd& u) {
  if ((u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DomainError("passive_from_unitary: matrix is not unitary");
  }
  const Eigen::Matrix2d x = u.real();
  const Eigen::Matrix2d y = -u.imag();
  // K = [[X, Y], [-Y, X]] on (q1, q2, p1, p2); permute to (q1, p1, q2, p2).
  Matrix block(4, 4);
  block << x, y, -y, x;
  const std::array<int, 4> order = {0, 2, 1, 3};
  Matrix k(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) k(i, j) = block(order[i], order[j]);
  }
  return SymplecticMatrix(std::move(k));
}

SymplecticMatrix random_passive(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::Matrix2cd z;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) z(i, j) = Complex(normal(rng), normal(rng));
  }
  // Haar measure: QR of a complex Ginibre matrix with the phases of R's diagonal removed.
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
  Eigen::Matrix2cd q = qr.householderQ();
  const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 2; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return passive_from_unitary(q);
}

}  // namespace cvqt
