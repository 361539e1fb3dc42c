#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "finslab/errors.hpp"
#include "finslab/field.hpp"
#include "oracles.hpp"

using namespace finslab;
using finslab::ad::Jet2;
using finslab::ad::JetSpan;
using finslab::testing::fd_gradient;
using finslab::testing::fd_hessian;
using finslab::testing::rel;

namespace {

std::vector<Vec> axes(int n) {
  std::vector<Vec> s;
  for (int i = 0; i < n; ++i) s.push_back(Vec::Unit(n, i));
  return s;
}

double plain(const ad::ScalarField& f, const Vec& x) { return f.eval(ad::constant_point(x)).value(); }

void expect_matches_fd(const ad::ScalarField& f, const Vec& x, double tol1, double tol2) {
  const auto seeds = axes(f.dim);
  const Jet2 j = ad::jet_eval(f, x, seeds);
  auto fx = [&](const Vec& p) { return plain(f, p); };
  const Vec g = fd_gradient(fx, x, 1e-5);
  const Mat H = fd_hessian(fx, x, 1e-4);
  for (int i = 0; i < f.dim; ++i) {
    EXPECT_LT(rel(j.grad(static_cast<std::size_t>(i)), g(i), 1e-3), tol1) << "grad " << i;
    for (int k = 0; k < f.dim; ++k)
      EXPECT_LT(rel(j.hess(static_cast<std::size_t>(i), static_cast<std::size_t>(k)), H(i, k), 1e-3), tol2)
          << "hess " << i << "," << k;
  }
}

}  // namespace

TEST(JetEval, BilinearProduct) {
  const ad::ScalarField f{2, [](JetSpan x) { return x[0] * x[1]; }};
  const Jet2 j = ad::jet_eval(f, Eigen::Vector2d(3, 5), axes(2));
  EXPECT_EQ(j.value(), 15.0);
  EXPECT_EQ(j.grad(0), 5.0);
  EXPECT_EQ(j.grad(1), 3.0);
  EXPECT_EQ(j.hess(0, 1), 1.0);
  EXPECT_EQ(j.hess(0, 0), 0.0);
  EXPECT_EQ(j.hess(1, 1), 0.0);
}

TEST(JetEval, SquaredNorm) {
  const ad::ScalarField f{2, [](JetSpan x) { return x[0] * x[0] + x[1] * x[1]; }};
  const Jet2 j = ad::jet_eval(f, Eigen::Vector2d(1, 2), axes(2));
  EXPECT_EQ(j.grad(0), 2.0);
  EXPECT_EQ(j.grad(1), 4.0);
  EXPECT_EQ(j.hess(0, 0), 2.0);
  EXPECT_EQ(j.hess(1, 1), 2.0);
  EXPECT_EQ(j.hess(0, 1), 0.0);
}

TEST(JetEval, ExpSinMatchesCentralDifferences) {
  const ad::ScalarField f{2, [](JetSpan x) { return ad::exp(x[0]) * ad::sin(x[1]); }};
  expect_matches_fd(f, Eigen::Vector2d(0.3, 0.7), 1e-7, 1e-6);
}

TEST(JetEval, HessianIsBitSymmetric) {
  const ad::ScalarField f{3, [](JetSpan x) { return ad::log(1.0 + x[0] * x[0]) * ad::cos(x[1] * x[2]) / (2.0 + x[2]); }};
  const Jet2 j = ad::jet_eval(f, Eigen::Vector3d(0.4, -1.1, 0.9), axes(3));
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(j.hess(a, b), j.hess(b, a));
}

TEST(JetEval, EveryElementaryFunctionMatchesDifferences) {
  const std::vector<std::pair<const char*, std::function<Jet2(JetSpan)>>> cases{
      {"reciprocal", [](JetSpan x) { return ad::reciprocal(1.5 + x[0] * x[1]); }},
      {"sqrt", [](JetSpan x) { return ad::sqrt(2.0 + x[0] * x[0] + x[1]); }},
      {"log", [](JetSpan x) { return ad::log(3.0 + x[0] - x[1] * x[1]); }},
      {"pow", [](JetSpan x) { return ad::pow(2.0 + x[0] * x[1], -1.5); }},
      {"cos", [](JetSpan x) { return ad::cos(x[0] * x[1] + x[1]); }},
      {"quotient", [](JetSpan x) { return (x[0] - x[1]) / (4.0 + x[0] * x[0]); }},
      {"square", [](JetSpan x) { return ad::square(ad::sin(x[0]) + x[1]); }},
  };
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (const auto& [name, fn] : cases) {
    SCOPED_TRACE(name);
    for (int k = 0; k < 20; ++k) expect_matches_fd({2, fn}, Eigen::Vector2d(u(rng), u(rng)), 1e-6, 1e-4);
  }
}

// Oracle for the chain rule: f is a random quadratic in x, g a random
// polynomial or rational function of one variable, both differentiated by
// hand here.
TEST(JetEval, ChainRuleOnRandomCompositions) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 3;
  for (int trial = 0; trial < 1000; ++trial) {
    const double c0 = u(rng);
    const Vec c1 = Vec::NullaryExpr(n, [&] { return u(rng); });
    Mat C2 = Mat::NullaryExpr(n, n, [&] { return u(rng); });
    C2 = (0.5 * (C2 + C2.transpose())).eval();
    const Vec x = Vec::NullaryExpr(n, [&] { return u(rng); });
    const double fv = c0 + c1.dot(x) + 0.5 * x.dot(C2 * x);
    const Vec fg = c1 + C2 * x;

    const bool rational = trial % 2 == 1;
    std::array<double, 5> p{};
    for (double& a : p) a = u(rng);
    double g, dg, d2g;
    if (rational) {
      // g = 1 / (1 + u^2)
      const double d = 1.0 + fv * fv;
      g = 1.0 / d;
      dg = -2.0 * fv / (d * d);
      d2g = (6.0 * fv * fv - 2.0) / (d * d * d);
    } else {
      g = p[0] + fv * (p[1] + fv * (p[2] + fv * (p[3] + fv * p[4])));
      dg = p[1] + fv * (2.0 * p[2] + fv * (3.0 * p[3] + fv * 4.0 * p[4]));
      d2g = 2.0 * p[2] + fv * (6.0 * p[3] + fv * 12.0 * p[4]);
    }

    const ad::ScalarField comp{n, [&](JetSpan xs) {
                                 Jet2 f(c0);
                                 for (int i = 0; i < n; ++i) {
                                   f += c1(i) * xs[static_cast<std::size_t>(i)];
                                   for (int k = 0; k < n; ++k)
                                     f += 0.5 * C2(i, k) * xs[static_cast<std::size_t>(i)] *
                                          xs[static_cast<std::size_t>(k)];
                                 }
                                 if (rational) return ad::reciprocal(1.0 + f * f);
                                 return p[0] + f * (p[1] + f * (p[2] + f * (p[3] + f * p[4])));
                               }};
    const Jet2 j = ad::jet_eval(comp, x, axes(n));
    const Mat H = d2g * fg * fg.transpose() + dg * C2;
    ASSERT_LT(rel(j.value(), g, 1e-300), 1e-12) << trial;
    const double scale_g = std::max(1.0, (dg * fg).norm());
    const double scale_h = std::max(1.0, H.norm());
    for (int i = 0; i < n; ++i) {
      ASSERT_LT(std::abs(j.grad(static_cast<std::size_t>(i)) - dg * fg(i)) / scale_g, 1e-12) << trial;
      for (int k = 0; k < n; ++k)
        ASSERT_LT(std::abs(j.hess(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) - H(i, k)) / scale_h,
                  1e-12)
            << trial;
    }
  }
}

TEST(JetEval, DomainFaultsCarryThePoint) {
  const ad::ScalarField f{2, [](JetSpan x) { return ad::reciprocal(x[0] - x[1]); }};
  try {
    ad::jet_eval(f, Eigen::Vector2d(0.5, 0.5), axes(2));
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.reason(), "division by zero");
    ASSERT_EQ(e.point().size(), 2u);
    EXPECT_EQ(e.point()[0], 0.5);
  }
  EXPECT_THROW(ad::sqrt(Jet2(-1.0)), DomainError);
  EXPECT_THROW(ad::log(Jet2(0.0)), DomainError);
  EXPECT_THROW(ad::pow(Jet2(-2.0), 0.5), DomainError);
  EXPECT_THROW(ad::pow(Jet2(0.0), -1.0), DomainError);
  EXPECT_NO_THROW(ad::pow(Jet2(-2.0), 3.0));
}

TEST(JetEval, SeedLimit) {
  const ad::ScalarField f{2, [](JetSpan x) { return x[0]; }};
  std::vector<Vec> five(5, Vec::Unit(2, 0));
  EXPECT_THROW(ad::jet_eval(f, Eigen::Vector2d(0, 0), five), ConfigurationError);
}

TEST(MixedXY, BilinearEntry) {
  const ad::TwoArgField F{2, [](JetSpan x, JetSpan y) { return x[0] * y[1]; }};
  const ad::XYDerivatives d = ad::mixed_xy_derivatives(F, Eigen::Vector2d(0.3, -2), Eigen::Vector2d(1.5, 0.25));
  Mat expected = Mat::Zero(2, 2);
  expected(0, 1) = 1.0;
  EXPECT_EQ(d.dxdy, expected);
  EXPECT_EQ(d.dx(0), 0.25);
  EXPECT_EQ(d.dy(1), 0.3);
}

TEST(MixedXY, XIndependentFieldHasZeroMixedBlock) {
  const ad::TwoArgField F{3, [](JetSpan, JetSpan y) { return ad::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]); }};
  const ad::XYDerivatives d = ad::mixed_xy_derivatives(F, Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(0.2, -0.4, 1));
  EXPECT_EQ(d.dxdy.norm(), 0.0);
  EXPECT_EQ(d.dx.norm(), 0.0);
}

TEST(MixedXY, ConformalKropinaMatchesDifferences) {
  // F = alpha^2 / beta, alpha = e^{x1}|y|, beta = y1 + 0.3 y2
  auto value = [](const Vec& x, const Vec& y) {
    return std::exp(2.0 * x(0)) * y.squaredNorm() / (y(0) + 0.3 * y(1));
  };
  const ad::TwoArgField F{2, [](JetSpan x, JetSpan y) {
                            return ad::exp(2.0 * x[0]) * (y[0] * y[0] + y[1] * y[1]) / (y[0] + 0.3 * y[1]);
                          }};
  const Vec x = Eigen::Vector2d(0.2, -0.1), y = Eigen::Vector2d(0.8, 0.5);
  const ad::XYDerivatives d = ad::mixed_xy_derivatives(F, x, y);
  const double h = 1e-4;
  for (int m = 0; m < 2; ++m)
    for (int l = 0; l < 2; ++l) {
      auto at = [&](double sm, double sl) {
        Vec xp = x, yp = y;
        xp(m) += sm * h;
        yp(l) += sl * h;
        return value(xp, yp);
      };
      const double fd = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
      EXPECT_LT(rel(d.dxdy(m, l), fd, 1e-3), 1e-6) << m << "," << l;
    }
}
