#include "cvqt/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "cvqt/errors.hpp"

namespace cvqt {

int total_degree(Exponents e) {
  int d = 0;
  for (int v = 0; v < kMaxVars; ++v) d += exponent_of(e, v);
  return d;
}

Exponents pack_exponents(std::span<const int> powers) {
  if (powers.size() > static_cast<std::size_t>(kMaxVars)) {
    throw DimensionError(fmt::format("at most {} variables supported, got {}", kMaxVars, powers.size()));
  }
  Exponents e = 0;
  for (std::size_t v = 0; v < powers.size(); ++v) {
    if (powers[v] < 0 || powers[v] > kMaxExponent) {
      throw DomainError(fmt::format("exponent {} out of range", powers[v]));
    }
    e |= static_cast<Exponents>(powers[v]) << (8 * v);
  }
  return e;
}

namespace poly {

namespace {

int max_exponent(const Polynomial& p, int var) {
  int m = 0;
  for (const auto& [e, c] : p) m = std::max(m, exponent_of(e, var));
  return m;
}

}  // namespace

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  for (int v = 0; v < kMaxVars; ++v) {
    if (max_exponent(a, v) + max_exponent(b, v) > kMaxExponent) {
      throw DomainError("polynomial product exceeds the per-variable exponent range");
    }
  }
  Polynomial out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) out[ea + eb] += ca * cb;
  }
  prune(out);
  return out;
}

void add_scaled(Polynomial& acc, const Polynomial& p, Complex factor) {
  for (const auto& [e, c] : p) acc[e] += factor * c;
}

void prune(Polynomial& p) {
  std::erase_if(p, [](const auto& kv) { return kv.second == Complex{}; });
}

}  // namespace poly

PolyGaussian::PolyGaussian(int n_vars)
    : kernel_(Matrix::Zero(n_vars, n_vars)), phase_(CVector::Zero(n_vars)), poly_{{0, Complex{1.0}}} {
  if (n_vars < 0 || n_vars > kMaxVars) {
    throw DimensionError(fmt::format("PolyGaussian supports 0..{} variables, got {}", kMaxVars, n_vars));
  }
}

PolyGaussian::PolyGaussian(Matrix kernel, CVector linear_phase, Polynomial poly)
    : kernel_(std::move(kernel)), phase_(std::move(linear_phase)), poly_(std::move(poly)) {
  const auto n = kernel_.rows();
  if (kernel_.cols() != n || phase_.size() != n || n > kMaxVars) {
    throw DimensionError(fmt::format("PolyGaussian: kernel {}x{}, phase {}", kernel_.rows(),
                                     kernel_.cols(), phase_.size()));
  }
  if (n > 0 && (kernel_ - kernel_.transpose()).cwiseAbs().maxCoeff() >
                   1e-12 * std::max(1.0, kernel_.cwiseAbs().maxCoeff())) {
    throw DomainError("PolyGaussian kernel is not symmetric");
  }
  kernel_ = (0.5 * (kernel_ + kernel_.transpose())).eval();
  for (const auto& [e, c] : poly_) {
    if (n < kMaxVars && (e >> (8 * n)) != 0) {
      throw DimensionError("polynomial references variables beyond n_vars");
    }
  }
  poly::prune(poly_);
}

Complex PolyGaussian::value_at_origin() const {
  const auto it = poly_.find(0);
  return it == poly_.end() ? Complex{} : it->second;
}

int PolyGaussian::degree() const {
  int d = 0;
  for (const auto& [e, c] : poly_) d = std::max(d, total_degree(e));
  return d;
}

PolyGaussian PolyGaussian::scaled(Complex factor) const {
  Polynomial p = poly_;
  for (auto& [e, c] : p) c *= factor;
  return PolyGaussian(kernel_, phase_, std::move(p));
}

VariableMap VariableMap::identity(int n_vars) { return {Matrix::Identity(n_vars, n_vars)}; }

VariableMap VariableMap::selection(int n_new, std::span<const int> indices) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(indices.size()), n_new);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 0 || indices[k] >= n_new) {
      throw DimensionError(fmt::format("selection index {} outside 0..{}", indices[k], n_new - 1));
    }
    m(static_cast<Eigen::Index>(k), indices[k]) = 1.0;
  }
  return {std::move(m)};
}

PolyGaussian from_gaussian(const GaussianState& g) {
  const Matrix omega = symplectic_form(g.n_modes());
  Matrix kernel = omega * g.cov() * omega.transpose();
  CVector phase = Complex(0.0, -1.0) * (omega * g.mean()).cast<Complex>();
  return PolyGaussian(std::move(kernel), std::move(phase), Polynomial{{0, Complex{1.0}}});
}

PolyGaussian fock_char(int n) {
  if (n < 0 || 2 * n > kMaxExponent) throw DomainError(fmt::format("fock_char: n = {} unsupported", n));
  // L_n(x) = sum_k (-1)^k C(n,k) x^k / k!,  x = (tau^2 + sigma^2) / 2.
  Polynomial p;
  double binom_nk = 1.0;  // C(n, k)
  double k_fact = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      binom_nk *= static_cast<double>(n - k + 1) / k;
      k_fact *= k;
    }
    const double lag = ((k % 2 == 0) ? 1.0 : -1.0) * binom_nk / k_fact / std::ldexp(1.0, k);
    double binom_kj = 1.0;  // C(k, j)
    for (int j = 0; j <= k; ++j) {
      if (j > 0) binom_kj *= static_cast<double>(k - j + 1) / j;
      const int powers[2] = {2 * j, 2 * (k - j)};
      p[pack_exponents(powers)] += lag * binom_kj;
    }
  }
  return PolyGaussian(0.5 * Matrix::Identity(2, 2), CVector::Zero(2), std::move(p));
}

PolyGaussian multiply(const PolyGaussian& a, const PolyGaussian& b) {
  if (a.n_vars() != b.n_vars()) {
    throw DimensionError(fmt::format("multiply: {} vs {} variables", a.n_vars(), b.n_vars()));
  }
  return PolyGaussian(a.kernel() + b.kernel(), a.linear_phase() + b.linear_phase(),
                      poly::multiply(a.poly(), b.poly()));
}

PolyGaussian substitute(const PolyGaussian& f, const VariableMap& map) {
  const Matrix& m = map.matrix;
  if (m.rows() != f.n_vars()) {
    throw DimensionError(fmt::format("substitute: map has {} outputs, function has {} variables",
                                     m.rows(), f.n_vars()));
  }
  const int n_new = static_cast<int>(m.cols());
  if (n_new > kMaxVars) throw DimensionError("substitute: too many new variables");

  // powers[i][k] = (sum_j M_ij y_j)^k
  std::vector<std::vector<Polynomial>> powers(f.n_vars());
  for (int i = 0; i < f.n_vars(); ++i) {
    int max_pow = 0;
    for (const auto& [e, c] : f.poly()) max_pow = std::max(max_pow, exponent_of(e, i));
    Polynomial linear;
    for (int j = 0; j < n_new; ++j) {
      if (m(i, j) != 0.0) linear[unit_exponent(j)] = m(i, j);
    }
    powers[i].push_back(Polynomial{{0, Complex{1.0}}});
    for (int k = 1; k <= max_pow; ++k) powers[i].push_back(poly::multiply(powers[i].back(), linear));
  }

  Polynomial out;
  for (const auto& [e, c] : f.poly()) {
    Polynomial term{{0, c}};
    for (int i = 0; i < f.n_vars(); ++i) {
      const int k = exponent_of(e, i);
      if (k > 0) term = poly::multiply(term, powers[i][k]);
    }
    poly::add_scaled(out, term, 1.0);
  }
  poly::prune(out);

  Matrix kernel = m.transpose() * f.kernel() * m;
  CVector phase = m.cast<Complex>().transpose() * f.linear_phase();
  return PolyGaussian(std::move(kernel), std::move(phase), std::move(out));
}

namespace {

// Moments E[X^a] of X ~ N(mu(y), Sigma) where mu is affine in the kept variables y. Each
// moment is a polynomial in y. Reduction: E[X_i X^b] = mu_i E[X^b] + sum_j Sigma_ij b_j E[X^{b - e_j}].
class GaussianMoments {
 public:
  GaussianMoments(std::vector<Polynomial> mean, Matrix sigma)
      : mean_(std::move(mean)), sigma_(std::move(sigma)) {
    cache_.emplace(0, Polynomial{{0, Complex{1.0}}});
  }

  const Polynomial& moment(Exponents a) {
    if (auto it = cache_.find(a); it != cache_.end()) return it->second;
    const int k = static_cast<int>(mean_.size());
    int i = 0;
    while (exponent_of(a, i) == 0) ++i;
    const Exponents rest = a - unit_exponent(i);
    Polynomial result = poly::multiply(mean_[i], moment(rest));
    for (int j = 0; j < k; ++j) {
      const int bj = exponent_of(rest, j);
      if (bj == 0 || sigma_(i, j) == 0.0) continue;
      poly::add_scaled(result, moment(rest - unit_exponent(j)), sigma_(i, j) * bj);
    }
    poly::prune(result);
    return cache_.emplace(a, std::move(result)).first->second;
  }

 private:
  std::vector<Polynomial> mean_;
  Matrix sigma_;
  std::map<Exponents, Polynomial> cache_;
};

}  // namespace

PolyGaussian integrate_out(const PolyGaussian& f, std::span<const int> vars) {
  const int n = f.n_vars();
  std::vector<int> xs(vars.begin(), vars.end());
  std::sort(xs.begin(), xs.end());
  if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
    throw DimensionError("integrate_out: repeated variable");
  }
  if (xs.empty() || xs.size() % 2 != 0) {
    throw DimensionError("integrate_out: need a non-empty, even number of variables");
  }
  if (xs.front() < 0 || xs.back() >= n) throw DimensionError("integrate_out: variable index out of range");
  std::vector<int> ys;
  for (int v = 0; v < n; ++v) {
    if (!std::binary_search(xs.begin(), xs.end(), v)) ys.push_back(v);
  }
  const int k = static_cast<int>(xs.size());
  const int m = static_cast<int>(ys.size());

  Matrix a(k, k), c(k, m), q(m, m);
  CVector lx(k), ly(m);
  for (int i = 0; i < k; ++i) {
    lx(i) = f.linear_phase()(xs[i]);
    for (int j = 0; j < k; ++j) a(i, j) = f.kernel()(xs[i], xs[j]);
    for (int j = 0; j < m; ++j) c(i, j) = f.kernel()(xs[i], ys[j]);
  }
  for (int i = 0; i < m; ++i) {
    ly(i) = f.linear_phase()(ys[i]);
    for (int j = 0; j < m; ++j) q(i, j) = f.kernel()(ys[i], ys[j]);
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.eigenvalues().minCoeff() <= 1e-12) {
    throw NonConvergentIntegral(fmt::format(
        "integrate_out: kernel block not positive definite (min eigenvalue {:.3e})", es.eigenvalues().minCoeff()));
  }
  const Matrix sigma = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                       es.eigenvectors().transpose();
  const Matrix sigma_c = sigma * c;
  const CVector sigma_lx = sigma.cast<Complex>() * lx;

  // Mean of the integrated variables: mu(y) = Sigma (l_x - C y).
  std::vector<Polynomial> mean(k);
  for (int i = 0; i < k; ++i) {
    if (sigma_lx(i) != Complex{}) mean[i][0] = sigma_lx(i);
    for (int j = 0; j < m; ++j) {
      if (sigma_c(i, j) != 0.0) mean[i][unit_exponent(j)] = -sigma_c(i, j);
    }
  }
  GaussianMoments moments(std::move(mean), sigma);

  Polynomial out;
  for (const auto& [e, coef] : f.poly()) {
    Exponents ex = 0, ey = 0;
    for (int i = 0; i < k; ++i) ex |= static_cast<Exponents>(exponent_of(e, xs[i])) << (8 * i);
    for (int j = 0; j < m; ++j) ey |= static_cast<Exponents>(exponent_of(e, ys[j])) << (8 * j);
    for (const auto& [em, cm] : moments.moment(ex)) out[em + ey] += coef * cm;
  }

  // (2 pi)^{k/2} det(A)^{-1/2} from the Gaussian integral, times (2 pi)^{-k/2} normalization.
  const Complex scalar =
      std::exp(0.5 * (lx.transpose() * sigma_lx)(0)) / std::sqrt(es.eigenvalues().prod());
  for (auto& [e, cf] : out) cf *= scalar;
  poly::prune(out);

  Matrix kernel = q - c.transpose() * sigma_c;
  CVector phase = ly - sigma_c.transpose().cast<Complex>() * lx;
  return PolyGaussian(std::move(kernel), std::move(phase), std::move(out));
}

Complex derivative_at_zero(const PolyGaussian& f, std::span<const int> orders) {
  const int n = f.n_vars();
  if (static_cast<int>(orders.size()) != n) {
    throw DimensionError(fmt::format("derivative_at_zero: {} orders for {} variables", orders.size(), n));
  }
  const Exponents target = pack_exponents(orders);
  const int total = total_degree(target);
  const auto fits = [&](Exponents e) {
    for (int v = 0; v < n; ++v) {
      if (exponent_of(e, v) > orders[v]) return false;
    }
    return true;
  };
  const auto truncated_product = [&](const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [ea, ca] : a) {
      for (const auto& [eb, cb] : b) {
        if (fits(ea + eb)) out[ea + eb] += ca * cb;
      }
    }
    return out;
  };

  // Exponent h = -1/2 x^T G x + l^T x as a polynomial, restricted to the needed monomials.
  Polynomial h;
  for (int i = 0; i < n; ++i) {
    if (f.linear_phase()(i) != Complex{} && fits(unit_exponent(i))) h[unit_exponent(i)] += f.linear_phase()(i);
    for (int j = i; j < n; ++j) {
      const double g = f.kernel()(i, j);
      const Exponents e = unit_exponent(i) + unit_exponent(j);
      if (g != 0.0 && fits(e)) h[e] += (i == j) ? -0.5 * g : -g;
    }
  }
  // exp(h) truncated at total degree `total`; h has no constant term.
  Polynomial exp_h{{0, Complex{1.0}}};
  Polynomial h_pow{{0, Complex{1.0}}};
  double fact = 1.0;
  for (int p = 1; p <= total; ++p) {
    h_pow = truncated_product(h_pow, h);
    if (h_pow.empty()) break;
    fact *= p;
    poly::add_scaled(exp_h, h_pow, 1.0 / fact);
  }
  Polynomial p_trunc;
  for (const auto& [e, c] : f.poly()) {
    if (fits(e)) p_trunc[e] = c;
  }
  const Polynomial series = truncated_product(p_trunc, exp_h);
  const auto it = series.find(target);
  if (it == series.end()) return {};
  double multiplier = 1.0;
  for (int v = 0; v < n; ++v) {
    for (int k = 2; k <= orders[v]; ++k) multiplier *= k;
  }
  return it->second * multiplier;
}

Complex evaluate(const PolyGaussian& f, std::span<const double> point) {
  const int n = f.n_vars();
  if (static_cast<int>(point.size()) != n) {
    throw DimensionError(fmt::format("evaluate: point has {} entries, function {} variables", point.size(), n));
  }
  const Eigen::Map<const Vector> x(point.data(), n);
  Complex p{};
  for (const auto& [e, c] : f.poly()) {
    Complex term = c;
    for (int v = 0; v < n; ++v) {
      const int k = exponent_of(e, v);
      if (k > 0) term *= std::pow(x(v), k);
    }
    p += term;
  }
  if (n == 0) return p;
  const Complex exponent =
      -0.5 * x.dot(f.kernel() * x) + (f.linear_phase().transpose() * x.cast<Complex>())(0);
  return p * std::exp(exponent);
}

}  // namespace cvqt
