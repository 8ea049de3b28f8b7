#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cvqt/charfn.hpp"
#include "cvqt/errors.hpp"
#include "cvqt/gaussian.hpp"

using namespace cvqt;

namespace {

std::mt19937_64& rng() {
  static std::mt19937_64 g(2024);
  return g;
}

double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

Matrix random_pd(int n, double floor) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = uniform(-0.5, 0.5);
  }
  return a * a.transpose() + floor * Matrix::Identity(n, n);
}

PolyGaussian random_function(int n, int max_degree) {
  CVector phase(n);
  for (int i = 0; i < n; ++i) phase(i) = Complex(uniform(-0.2, 0.2), uniform(-1, 1));
  Polynomial p;
  std::uniform_int_distribution<int> deg(0, max_degree);
  for (int term = 0; term < 6; ++term) {
    std::vector<int> powers(n);
    int total = 0;
    for (int i = 0; i < n; ++i) {
      powers[i] = total < max_degree ? std::min(deg(rng()), max_degree - total) : 0;
      total += powers[i];
    }
    p[pack_exponents(powers)] += Complex(uniform(-1, 1), uniform(-1, 1));
  }
  return PolyGaussian(random_pd(n, 1.0), phase, p);
}

std::vector<double> random_point(int n, double scale = 1.0) {
  std::vector<double> x(n);
  for (auto& v : x) v = uniform(-scale, scale);
  return x;
}

// Trapezoid rule on [-L, L]^2; exponentially accurate for Gaussian-decaying integrands.
template <class F>
Complex trapezoid2(F&& f, double half_width, int n) {
  const double h = 2 * half_width / n;
  Complex sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double w = (i == 0 || i == n ? 0.5 : 1.0) * (j == 0 || j == n ? 0.5 : 1.0);
      sum += w * f(-half_width + i * h, -half_width + j * h);
    }
  }
  return sum * h * h;
}

}  // namespace

TEST(Exponents, PackAndUnpack) {
  const std::array<int, 4> powers = {3, 0, 7, 1};
  const Exponents e = pack_exponents(powers);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(exponent_of(e, i), powers[i]);
  EXPECT_EQ(total_degree(e), 11);
  EXPECT_EQ(unit_exponent(2), pack_exponents(std::array<int, 3>{0, 0, 1}));
}

TEST(PolyGaussian, ConstantOne) {
  const PolyGaussian one(3);
  EXPECT_EQ(one.value_at_origin(), Complex(1.0));
  const std::array<double, 3> x = {0.3, -1.0, 2.0};
  EXPECT_EQ(evaluate(one, x), Complex(1.0));
  EXPECT_THROW(PolyGaussian(kMaxVars + 1), DimensionError);
}

TEST(FromGaussian, MatchesClosedFormCharacteristicFunction) {
  // Single-mode displaced squeezed thermal state.
  Matrix v(2, 2);
  v << 1.3, 0.2, 0.2, 0.6;
  Vector d(2);
  d << 0.7, -0.4;
  const PolyGaussian chi = from_gaussian(GaussianState(d, v));
  const Matrix o = symplectic_form(1);
  for (int k = 0; k < 10; ++k) {
    const auto x = random_point(2, 2.0);
    const Eigen::Vector2d lam(x[0], x[1]);
    const double quad = lam.dot(o * v * o.transpose() * lam);
    const Complex expected = std::exp(Complex(-0.5 * quad, -lam.dot(o * d)));
    EXPECT_LT(std::abs(evaluate(chi, x) - expected), 1e-14);
  }
}

TEST(FockChar, MatchesLaguerreClosedForm) {
  for (int n = 0; n <= 6; ++n) {
    const PolyGaussian chi = fock_char(n);
    for (int k = 0; k < 5; ++k) {
      const auto x = random_point(2, 3.0);
      const double s = x[0] * x[0] + x[1] * x[1];
      const double expected = std::exp(-s / 4) * std::laguerre(n, s / 2);
      EXPECT_NEAR(evaluate(chi, x).real(), expected, 1e-13) << "n = " << n;
      EXPECT_NEAR(evaluate(chi, x).imag(), 0.0, 1e-15);
    }
  }
}

TEST(Multiply, IsPointwise) {
  for (int trial = 0; trial < 10; ++trial) {
    const PolyGaussian a = random_function(4, 3);
    const PolyGaussian b = random_function(4, 2);
    const PolyGaussian ab = multiply(a, b);
    const auto x = random_point(4);
    EXPECT_LT(std::abs(evaluate(ab, x) - evaluate(a, x) * evaluate(b, x)), 1e-12 * (1 + std::abs(evaluate(ab, x))));
  }
  EXPECT_THROW(multiply(PolyGaussian(2), PolyGaussian(4)), DimensionError);
}

TEST(Substitute, IsComposition) {
  for (int trial = 0; trial < 10; ++trial) {
    const PolyGaussian f = random_function(4, 3);
    Matrix m(4, 6);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 6; ++j) m(i, j) = uniform(-1, 1);
    }
    const PolyGaussian g = substitute(f, VariableMap{m});
    const auto y = random_point(6, 0.5);
    const Eigen::VectorXd x = m * Eigen::Map<const Eigen::VectorXd>(y.data(), 6);
    const std::vector<double> xv(x.data(), x.data() + 4);
    EXPECT_LT(std::abs(evaluate(g, y) - evaluate(f, xv)), 1e-11 * (1 + std::abs(evaluate(f, xv))));
  }
}

TEST(Substitute, SelectionLiftsVariables) {
  const PolyGaussian f = fock_char(2);
  const std::array<int, 2> idx = {3, 1};
  const PolyGaussian g = substitute(f, VariableMap::selection(4, idx));
  const std::array<double, 4> y = {9.0, 0.4, -7.0, 1.1};
  const std::array<double, 2> x = {1.1, 0.4};
  EXPECT_LT(std::abs(evaluate(g, y) - evaluate(f, x)), 1e-15);
}

TEST(IntegrateOut, MatchesDirectQuadrature) {
  for (int trial = 0; trial < 6; ++trial) {
    const PolyGaussian f = random_function(4, 4);
    const std::array<int, 2> vars = {0, 2};
    const PolyGaussian g = integrate_out(f, vars);
    ASSERT_EQ(g.n_vars(), 2);
    const auto y = random_point(2, 0.8);
    const Complex direct = trapezoid2(
        [&](double a, double b) {
          const std::array<double, 4> x = {a, y[0], b, y[1]};
          return evaluate(f, x);
        },
        12.0, 240) / (2 * std::numbers::pi);
    EXPECT_LT(std::abs(evaluate(g, y) - direct), 1e-10 * (1 + std::abs(direct))) << "trial " << trial;
  }
}

TEST(IntegrateOut, OrderIndependent) {
  const PolyGaussian f = random_function(6, 4);
  const std::array<int, 2> first = {0, 1};
  const std::array<int, 2> then = {0, 1};
  const std::array<int, 2> other_first = {2, 3};
  const std::array<int, 4> all = {0, 1, 2, 3};
  // {0,1} then the original {2,3}, versus {2,3} then the original {0,1}, versus all at once.
  const PolyGaussian a = integrate_out(integrate_out(f, first), then);
  const PolyGaussian b = integrate_out(integrate_out(f, other_first), first);
  const PolyGaussian c = integrate_out(f, all);
  const auto y = random_point(2);
  EXPECT_LT(std::abs(evaluate(a, y) - evaluate(b, y)), 1e-12 * (1 + std::abs(evaluate(a, y))));
  EXPECT_LT(std::abs(evaluate(a, y) - evaluate(c, y)), 1e-12 * (1 + std::abs(evaluate(a, y))));
}

TEST(IntegrateOut, GaussianNormalization) {
  // (1/2pi) Int exp(-a |x|^2 / 2) = 1/a.
  const double a = 1.7;
  const PolyGaussian f(a * Matrix::Identity(2, 2), CVector::Zero(2), Polynomial{{0, Complex(1.0)}});
  const std::array<int, 2> vars = {0, 1};
  EXPECT_NEAR(integrate_out(f, vars).value_at_origin().real(), 1 / a, 1e-15);
}

TEST(IntegrateOut, Errors) {
  const PolyGaussian f = random_function(4, 2);
  const std::array<int, 1> odd = {0};
  EXPECT_THROW(integrate_out(f, odd), DimensionError);
  Matrix k = Matrix::Identity(4, 4);
  k(0, 0) = -1.0;
  const PolyGaussian divergent(k, CVector::Zero(4), Polynomial{{0, Complex(1.0)}});
  const std::array<int, 2> vars = {0, 1};
  EXPECT_THROW(integrate_out(divergent, vars), NonConvergentIntegral);
}

TEST(DerivativeAtZero, MatchesFiniteDifferences) {
  const PolyGaussian f = random_function(4, 3);
  const double h = 1e-3;
  const auto at = [&](std::array<double, 4> x) { return evaluate(f, x); };
  // First derivatives.
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> p{}, m{};
    p[i] = h;
    m[i] = -h;
    std::array<int, 4> orders{};
    orders[i] = 1;
    const Complex fd = (at(p) - at(m)) / (2 * h);
    EXPECT_LT(std::abs(derivative_at_zero(f, orders) - fd), 1e-5);
  }
  // Mixed second derivative d^2 / dx0 dx2.
  const Complex fd = (at({h, 0, h, 0}) - at({h, 0, -h, 0}) - at({-h, 0, h, 0}) + at({-h, 0, -h, 0})) / (4 * h * h);
  const std::array<int, 4> mixed = {1, 0, 1, 0};
  EXPECT_LT(std::abs(derivative_at_zero(f, mixed) - fd), 1e-5);
  // Pure second derivative.
  const Complex fd2 = (at({0, h, 0, 0}) - 2.0 * at({0, 0, 0, 0}) + at({0, -h, 0, 0})) / (h * h);
  const std::array<int, 4> pure = {0, 2, 0, 0};
  EXPECT_LT(std::abs(derivative_at_zero(f, pure) - fd2), 1e-4);
}

TEST(DerivativeAtZero, GaussianMomentsExact) {
  // chi = exp(-1/2 G lam^2): d^4/dlam^4 at 0 = 3 G^2.
  const double g = 0.8;
  const PolyGaussian f(g * Matrix::Identity(1, 1), CVector::Zero(1), Polynomial{{0, Complex(1.0)}});
  const std::array<int, 1> four = {4};
  EXPECT_NEAR(derivative_at_zero(f, four).real(), 3 * g * g, 1e-14);
  const std::array<int, 1> three = {3};
  EXPECT_NEAR(std::abs(derivative_at_zero(f, three)), 0.0, 1e-15);
}

TEST(Hermiticity, PhysicalCharacteristicFunctions) {
  // chi(-Lambda) = conj chi(Lambda) for any Hermitian rho.
  Matrix v(2, 2);
  v << 0.9, 0.1, 0.1, 0.4;
  Vector d(2);
  d << 0.3, 0.2;
  for (const PolyGaussian& chi : {from_gaussian(GaussianState(d, v)), fock_char(3)}) {
    for (int k = 0; k < 5; ++k) {
      const auto x = random_point(2, 2.0);
      const std::vector<double> mx = {-x[0], -x[1]};
      EXPECT_LT(std::abs(evaluate(chi, mx) - std::conj(evaluate(chi, x))), 1e-14);
    }
  }
}

TEST(PolyGaussian, ScaledAndDegree) {
  const PolyGaussian f = fock_char(3);
  EXPECT_EQ(f.degree(), 6);
  const PolyGaussian g = f.scaled(Complex(0.0, 2.0));
  EXPECT_EQ(g.value_at_origin(), Complex(0.0, 2.0));
}
