#include "cvqt/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "cvqt/errors.hpp"

namespace cvqt::oracle {

RMatrix annihilation(int cutoff) {
  RMatrix a = RMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

RMatrix squeeze_operator(double r, int cutoff, int padding) {
  const RMatrix a = annihilation(cutoff + padding);
  const RMatrix a2 = a * a;
  const RMatrix generator = 0.5 * r * (a2 - a2.transpose());
  const RMatrix u = generator.exp();
  return u.topLeftCorner(cutoff + 1, cutoff + 1);
}

RMatrix beam_splitter_block(double theta, int total) {
  RMatrix g = RMatrix::Zero(total + 1, total + 1);
  for (int k = 0; k <= total; ++k) {
    // a_i^dag a_j |k, t-k> = sqrt((k+1)(t-k)) |k+1, t-k-1>
    if (k < total) g(k + 1, k) += theta * std::sqrt(static_cast<double>(k + 1) * (total - k));
    // a_i a_j^dag |k, t-k> = sqrt(k (t-k+1)) |k-1, t-k+1>
    if (k > 0) g(k - 1, k) -= theta * std::sqrt(static_cast<double>(k) * (total - k + 1));
  }
  return g.exp();
}

CMatrix displacement(Complex beta, int cutoff) {
  // <m|D|n> = sqrt(n!/m!) beta^{m-n} e^{-|beta|^2/2} L_n^{(m-n)}(|beta|^2) for m >= n, and
  // <n|D|m> = (-1)^{m-n} conj(<m|D|n>). Each diagonal k = m - n runs the forward Laguerre
  // recurrence in n; magnitudes are combined in log space.
  const int dim = cutoff + 1;
  const double x = std::norm(beta);
  const double modulus = std::abs(beta);
  const double log_modulus = modulus > 0.0 ? std::log(modulus) : 0.0;
  const Complex phase = modulus > 0.0 ? beta / modulus : Complex{1.0};
  std::vector<double> log_fact(dim);
  for (int n = 0; n < dim; ++n) log_fact[n] = std::lgamma(n + 1.0);
  CMatrix d(dim, dim);
  Complex phase_k{1.0};
  for (int k = 0; k < dim; ++k, phase_k *= phase) {
    if (k > 0 && modulus == 0.0) {
      for (int n = 0; n + k < dim; ++n) d(n + k, n) = d(n, n + k) = 0.0;
      continue;
    }
    double prev = 0.0;
    double lag = 1.0;  // L_0^{(k)}
    for (int n = 0; n + k < dim; ++n) {
      if (n == 1) {
        prev = lag;
        lag = 1.0 + k - x;
      } else if (n > 1) {
        const double next = ((2.0 * (n - 1) + 1.0 + k - x) * lag - (n - 1.0 + k) * prev) / n;
        prev = lag;
        lag = next;
      }
      const int m = n + k;
      const double log_mag = 0.5 * (log_fact[n] - log_fact[m]) + k * log_modulus - 0.5 * x;
      const Complex v = std::exp(log_mag) * lag * phase_k;
      d(m, n) = v;
      if (k > 0) d(n, m) = ((k % 2 == 0) ? 1.0 : -1.0) * std::conj(v);
    }
  }
  return d;
}

BlockDensity::BlockDensity(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 1) throw DomainError(fmt::format("cutoff {} must be positive", cutoff));
  blocks_.reserve(2 * cutoff + 1);
  for (int diff = -cutoff; diff <= cutoff; ++diff) {
    const int s = cutoff + 1 - std::abs(diff);
    blocks_.push_back(CMatrix::Zero(s, s));
  }
}

int BlockDensity::first_index(int diff) const { return std::max(0, diff); }

int BlockDensity::block_size(int diff) const { return cutoff_ + 1 - std::abs(diff); }

void BlockDensity::add_pure(const CMatrix& psi, double weight) {
  if (psi.rows() != cutoff_ + 1 || psi.cols() != cutoff_ + 1) throw DimensionError("add_pure: psi shape");
  Eigen::VectorXcd slice;
  for (int diff = -cutoff_; diff <= cutoff_; ++diff) {
    const int first = first_index(diff);
    const int s = block_size(diff);
    slice.resize(s);
    for (int i = 0; i < s; ++i) slice(i) = psi(first + i, first + i - diff);
    block(diff).noalias() += weight * slice * slice.adjoint();
  }
}

double BlockDensity::trace() const {
  double t = 0.0;
  for (const auto& b : blocks_) t += b.trace().real();
  return t;
}

double BlockDensity::min_eigenvalue() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks_) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(b, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

Complex BlockDensity::expect(const CMatrix& a, const CMatrix& b) const {
  Complex total{};
  for (int diff = -cutoff_; diff <= cutoff_; ++diff) {
    const int first = first_index(diff);
    const int s = block_size(diff);
    // Tr[rho X] = sum_ij rho(i, j) X(j, i), X(j, i) = A(a_j, a_i) B(b_j, b_i), b = a - diff.
    const auto a_sub = a.block(first, first, s, s);
    const auto b_sub = b.block(first - diff, first - diff, s, s);
    total += (block(diff).array() * a_sub.cwiseProduct(b_sub).transpose().array()).sum();
  }
  return total;
}

CMatrix BlockDensity::to_dense() const {
  const int dim = cutoff_ + 1;
  CMatrix rho = CMatrix::Zero(dim * dim, dim * dim);
  for (int diff = -cutoff_; diff <= cutoff_; ++diff) {
    const int first = first_index(diff);
    const int s = block_size(diff);
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) {
        const int ai = first + i, aj = first + j;
        rho(ai * dim + (ai - diff), aj * dim + (aj - diff)) = block(diff)(i, j);
      }
    }
  }
  return rho;
}

namespace {

// exp[r (a^dag b^dag - a b)] restricted to the chain |n + d, n> (d >= 0) or |n, n + |d|> (d < 0).
RMatrix two_mode_squeeze_block(double r, int diff, int length) {
  const int d = std::abs(diff);
  RMatrix g = RMatrix::Zero(length, length);
  for (int n = 0; n + 1 < length; ++n) {
    const double e = r * std::sqrt(static_cast<double>(n + d + 1) * (n + 1));
    g(n + 1, n) = e;
    g(n, n + 1) = -e;
  }
  return g.exp();
}

}  // namespace

FockSeed oracle_seed(const SeedDescriptor& seed, int cutoff, int padding) {
  const double kappa = seed.family == SeedFamily::TMSV ? 0.5 : seed.kappa;
  if (!(kappa >= 0.5)) throw DomainError(fmt::format("oracle_seed: kappa = {} < 1/2", kappa));
  if (!(seed.r >= 0.0)) throw DomainError(fmt::format("oracle_seed: r = {} < 0", seed.r));
  if (cutoff < 1 || cutoff > kMaxCutoff) throw DomainError(fmt::format("cutoff {} out of range", cutoff));
  // TMST = S2(r) (thermal x thermal) with nbar = kappa - 1/2 per mode. S2 conserves n1 - n2.
  const double nbar = kappa - 0.5;
  const double q = nbar / (1.0 + nbar);

  BlockDensity rho(cutoff);
  for (int diff = -cutoff; diff <= cutoff; ++diff) {
    const int d = std::abs(diff);
    const int s = rho.block_size(diff);
    const int length = s + padding;
    // Input |n + d, n> carries weight (1 - q)^2 q^(2n + d).
    Eigen::VectorXd w = Eigen::VectorXd::Zero(length);
    double qn = (1 - q) * (1 - q) * std::pow(q, d);
    for (int n = 0; n < length && qn > 0.0; ++n, qn *= q * q) w(n) = qn;
    if (w.maxCoeff() < 1e-300) continue;
    const RMatrix u = two_mode_squeeze_block(seed.r, diff, length).topRows(s);
    rho.block(diff) = (u * w.asDiagonal() * u.transpose()).cast<Complex>();
  }
  const double tail = 1.0 - rho.trace();
  if (tail > kMaxTailPopulation) {
    throw CutoffTooSmall(fmt::format("cutoff {} leaves tail population {:.3e} (r = {}, kappa = {})", cutoff, tail,
                                     seed.r, kappa));
  }
  return FockSeed{std::move(rho), tail};
}

FockSeed oracle_seed_auto(const SeedDescriptor& seed, int initial_cutoff) {
  for (int cutoff = initial_cutoff; cutoff <= kMaxCutoff; cutoff += 10) {
    try {
      return oracle_seed(seed, cutoff);
    } catch (const CutoffTooSmall&) {
    }
  }
  throw CutoffTooSmall(fmt::format("no cutoff up to {} suffices for r = {}", kMaxCutoff, seed.r));
}

CMatrix tmsv_schmidt_state(double r, int cutoff) {
  const double l = std::tanh(r);
  CMatrix psi = CMatrix::Zero(cutoff + 1, cutoff + 1);
  double amp = std::sqrt(1.0 - l * l);
  for (int n = 0; n <= cutoff; ++n, amp *= l) psi(n, n) = amp;
  return psi;
}

RMatrix heralding_kraus(int m, int n, double transmissivity, int cutoff) {
  if (!(transmissivity > 0.0 && transmissivity <= 1.0)) {
    throw DomainError(fmt::format("transmissivity {} outside (0, 1]", transmissivity));
  }
  const double theta = std::acos(std::sqrt(transmissivity));
  RMatrix k = RMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int a = 0; a <= cutoff; ++a) {
    const int total = a + m;
    const int out = total - n;
    if (out < 0 || out > cutoff) continue;
    // <out, n| U |a, m>, signal photons index the block basis.
    k(out, a) = beam_splitter_block(theta, total)(out, a);
  }
  return k;
}

FockNG oracle_ng(const BlockDensity& seed, const OperationSpec& spec) {
  const int cutoff = seed.cutoff();
  const RMatrix k1 = heralding_kraus(spec.m1, spec.n1, spec.transmissivity, cutoff);
  const RMatrix k2 = heralding_kraus(spec.m2, spec.n2, spec.transmissivity, cutoff);
  const int s1 = spec.m1 - spec.n1;
  const int s2 = spec.m2 - spec.n2;
  const auto amp1 = [&](int a) { return (a + s1 < 0 || a + s1 > cutoff) ? 0.0 : k1(a + s1, a); };
  const auto amp2 = [&](int b) { return (b + s2 < 0 || b + s2 > cutoff) ? 0.0 : k2(b + s2, b); };

  BlockDensity out(cutoff);
  for (int diff = -cutoff; diff <= cutoff; ++diff) {
    const int new_diff = diff + s1 - s2;
    if (std::abs(new_diff) > cutoff) continue;
    const int first = seed.first_index(diff);
    const int s = seed.block_size(diff);
    const int new_first = out.first_index(new_diff);
    const int new_s = out.block_size(new_diff);
    Eigen::VectorXd factor(s);
    Eigen::VectorXi target(s);
    for (int i = 0; i < s; ++i) {
      const int a = first + i;
      const int b = a - diff;
      factor(i) = amp1(a) * amp2(b);
      target(i) = a + s1 - new_first;
      if (target(i) < 0 || target(i) >= new_s) factor(i) = 0.0;
    }
    const CMatrix& src = seed.block(diff);
    CMatrix& dst = out.block(new_diff);
    for (int i = 0; i < s; ++i) {
      if (factor(i) == 0.0) continue;
      for (int j = 0; j < s; ++j) {
        if (factor(j) == 0.0) continue;
        dst(target(i), target(j)) += factor(i) * factor(j) * src(i, j);
      }
    }
  }
  const double p = out.trace();
  if (!(p >= kMinSuccessProbability)) {
    throw MeasureZeroOutcome(fmt::format("oracle: heralding outcome ({}) has probability {:.3e}",
                                         spec.photon_string(), p));
  }
  for (int diff = -cutoff; diff <= cutoff; ++diff) out.block(diff) /= p;
  return FockNG{std::move(out), p};
}

namespace {

struct Quadratures {
  CMatrix q, p, qq, pp, qp_sym;
};

Quadratures quadrature_operators(int cutoff) {
  // Products are formed two levels above the cutoff and cropped.
  const int big = cutoff + 2;
  const CMatrix a = annihilation(big).cast<Complex>();
  const CMatrix ad = a.adjoint();
  const double r2 = std::numbers::sqrt2;
  const CMatrix q = (a + ad) / r2;
  const CMatrix p = (a - ad) / Complex(0.0, r2);
  const int d = cutoff + 1;
  Quadratures out;
  out.q = q.topLeftCorner(d, d);
  out.p = p.topLeftCorner(d, d);
  out.qq = (q * q).topLeftCorner(d, d);
  out.pp = (p * p).topLeftCorner(d, d);
  out.qp_sym = (0.5 * (q * p + p * q)).topLeftCorner(d, d);
  return out;
}

}  // namespace

Vector oracle_mean(const BlockDensity& rho) {
  const auto ops = quadrature_operators(rho.cutoff());
  const CMatrix id = CMatrix::Identity(rho.cutoff() + 1, rho.cutoff() + 1);
  Vector d(4);
  d << rho.expect(ops.q, id).real(), rho.expect(ops.p, id).real(), rho.expect(id, ops.q).real(),
      rho.expect(id, ops.p).real();
  return d;
}

Matrix oracle_covariance(const BlockDensity& rho) {
  const auto ops = quadrature_operators(rho.cutoff());
  const CMatrix id = CMatrix::Identity(rho.cutoff() + 1, rho.cutoff() + 1);
  const Vector d = oracle_mean(rho);
  const CMatrix* single[2] = {&ops.q, &ops.p};
  Matrix second(4, 4);
  // same-mode blocks
  for (int mode = 0; mode < 2; ++mode) {
    const auto ex = [&](const CMatrix& op) {
      return (mode == 0 ? rho.expect(op, id) : rho.expect(id, op)).real();
    };
    const int o = 2 * mode;
    second(o, o) = ex(ops.qq);
    second(o + 1, o + 1) = ex(ops.pp);
    second(o, o + 1) = second(o + 1, o) = ex(ops.qp_sym);
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      second(i, 2 + j) = second(2 + j, i) = rho.expect(*single[i], *single[j]).real();
    }
  }
  return second - d * d.transpose();
}

Complex oracle_char(const BlockDensity& rho, std::span<const double, 4> lambda) {
  const double r2 = std::numbers::sqrt2;
  const CMatrix d1 = displacement(Complex(lambda[0], lambda[1]) / r2, rho.cutoff());
  const CMatrix d2 = displacement(Complex(lambda[2], lambda[3]) / r2, rho.cutoff());
  return rho.expect(d1, d2);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  RMatrix jacobi = RMatrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> es(jacobi);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()(i);
    weights[i] = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
}

QuadratureResult oracle_fidelity(const BlockDensity& resource, Complex alpha, const QuadratureOptions& options) {
  // chi_in(L) chi_in(-L) <= exp(-|L|^2 / 2) and |chi_res| <= 1.
  const double half_width = std::sqrt(2.0 * std::log(1e12));
  const double r2 = std::numbers::sqrt2;
  const int cutoff = resource.cutoff();
  const auto coherent = [&](Complex beta) {
    return std::exp(-0.5 * std::norm(beta) + beta * std::conj(alpha) - std::conj(beta) * alpha);
  };
  // g(-L) = conj(g(L)), so F = 2 Re of the integral over tau > 0.
  const auto integrand = [&](double tau, double sigma) {
    const Complex beta(tau, sigma);
    const Complex b_res = Complex(-tau, sigma) / r2;  // resource at (-tau, sigma, -tau, -sigma)
    const CMatrix d1 = displacement(b_res, cutoff);
    const CMatrix d2 = d1.conjugate();
    return coherent(beta / r2) * coherent(-beta / r2) * resource.expect(d1, d2) / (2.0 * std::numbers::pi);
  };

  std::vector<double> nodes, weights;
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int n = 24; n <= options.max_nodes; n = n * 4 / 3 + (n * 4 / 3) % 2) {
    gauss_legendre(n, nodes, weights);
    Complex sum{};
    for (int i = 0; i < n; ++i) {
      if (nodes[i] <= 0.0) continue;
      const double tau = half_width * nodes[i];
      for (int j = 0; j < n; ++j) {
        sum += weights[i] * weights[j] * integrand(tau, half_width * nodes[j]);
      }
    }
    const double value = 2.0 * sum.real() * half_width * half_width;
    if (std::abs(value - previous) < options.tolerance) return {value, std::abs(value - previous), n};
    previous = value;
  }
  throw NumericalError(fmt::format("oracle_fidelity: quadrature did not converge within {} nodes", options.max_nodes));
}

}  // namespace cvqt::oracle
