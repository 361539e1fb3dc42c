#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "finslab/classify.hpp"
#include "finslab/constructions.hpp"
#include "finslab/errors.hpp"
#include "finslab/lsq.hpp"
#include "oracles.hpp"

using namespace finslab;
using namespace finslab::classify;
using alphabeta::AlphaBetaMetric;
using alphabeta::PhiFamily;
using constructions::EtaProfile;
using finslab::ad::JetSpan;
using finslab::testing::rel;

namespace {

Vec vec3(double a, double b, double c) { return Eigen::Vector3d(a, b, c); }

AlphaBetaMetric minkowski(PhiFamily phi = PhiFamily::m_kropina(2.0)) {
  return {riemann::euclidean(3), riemann::constant_form(vec3(0.5, 0, 0)), phi, "minkowski"};
}

AlphaBetaMetric example() {
  return constructions::example_metric(1.0, 1.0, Vec::Unit(3, 0), 2.0, EtaProfile::one_plus_square());
}

AlphaBetaMetric case2(const EtaProfile& eta = EtaProfile::affine_x1(0.0, 1.0)) {
  return constructions::local_structure_metric(1.0, 2.0, eta, constructions::flat_base(3));
}

/// b = (1, x1, 0) on Euclidean space: not closed.
AlphaBetaMetric twisted() {
  return {riemann::euclidean(3),
          riemann::OneFormField(3, "(1, x1, 0)", [](JetSpan x) { return ad::JetVec{1.0, x[0], 0.0}; }),
          PhiFamily::m_kropina(2.0), "twisted"};
}

/// dx1^2 + e^{2 sigma(x2, x3)} (dx2^2 + dx3^2) with beta = dx1, which is
/// parallel, so the spray is that of alpha: quadratic in y.
AlphaBetaMetric berwald() {
  riemann::MetricField a(3, "product", [](JetSpan x) {
    const ad::Jet2 w = ad::exp(2.0 * (0.3 * x[1] + ad::sin(x[2])));
    return ad::JetVec{1.0, 0.0, 0.0, 0.0, w, 0.0, 0.0, 0.0, w};
  });
  return {a, riemann::constant_form(vec3(1, 0, 0)), PhiFamily::sqrt_pure(2.0, 1.0), "berwald"};
}

AlphaBetaMetric kropina_plus(double c) {
  Mat S(3, 3);
  S << 0.5, 0.1, 0, 0.1, -0.3, 0.2, 0, 0.2, 0.4;
  return {riemann::conformal_exp(vec3(0.3, -0.1, 0.2)),
          constructions::integrable_form(vec3(0.2, -0.1, 0.3), vec3(1, 0.5, -0.2), S), PhiFamily::kropina_plus(c),
          "kropina-plus"};
}

const Vec kExampleX = vec3(0.1, -0.2, 0.15);
const Vec kCase2X = vec3(1.0, 0.0, 0.0);

ProbeSet probes(const AlphaBetaMetric& M, const Vec& x, std::size_t count = 0) {
  return make_probe_set(M, x, {.count = count});
}

}  // namespace

TEST(FitTensorAnsatz, ExactMembership) {
  const Vec b = vec3(1.0, -0.5, 2.0);
  const Mat a = Mat::Identity(3, 3) + 0.1 * Mat::Ones(3, 3);
  const double b2 = b.dot(a.inverse() * b);
  const std::vector<Mat> basis{b2 * a, b * b.transpose()};
  const AnsatzFit f = fit_tensor_ansatz(3.0 * basis[0] - 5.0 * basis[1], basis);
  EXPECT_NEAR(f.coefficients(0), 3.0, 1e-12);
  EXPECT_NEAR(f.coefficients(1), -5.0, 1e-12);
  EXPECT_LT(f.residual, 1e-14);
}

TEST(FitTensorAnsatz, SmallNoise) {
  const Vec b = vec3(1.0, -0.5, 2.0);
  const std::vector<Mat> basis{b.squaredNorm() * Mat::Identity(3, 3), b * b.transpose()};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Mat N = Mat::NullaryExpr(3, 3, [&] { return g(rng); });
  N = (0.5 * (N + N.transpose())).eval();
  N *= 1e-8 * basis[0].norm() / N.norm();
  const AnsatzFit f = fit_tensor_ansatz(basis[0] + N, basis);
  EXPECT_NEAR(f.coefficients(0), 1.0, 1e-7);
  EXPECT_NEAR(f.coefficients(1), 0.0, 1e-7);
  EXPECT_GT(f.residual, 1e-10);
  EXPECT_LT(f.residual, 1e-8);
}

TEST(FitTensorAnsatz, OrthogonalTarget) {
  const std::vector<Mat> basis{Mat::Identity(3, 3), Vec::Unit(3, 0) * Vec::Unit(3, 0).transpose()};
  Mat T = Mat::Zero(3, 3);
  T(0, 1) = T(1, 0) = 1.0;
  T(2, 2) = 1.0;
  T(1, 1) = -1.0;
  const AnsatzFit f = fit_tensor_ansatz(T, basis);
  EXPECT_LT(f.coefficients.norm(), 1e-14);
  EXPECT_NEAR(f.residual, 1.0, 1e-14);
}

TEST(FitTensorAnsatz, Idempotent) {
  const Vec b = vec3(0.3, 1.0, -0.7);
  const std::vector<Mat> basis{Mat::Identity(3, 3), b * b.transpose(), Mat::Ones(3, 3)};
  Mat T = Mat::Random(3, 3);
  T = (T + T.transpose()).eval();
  const AnsatzFit f = fit_tensor_ansatz(T, basis);
  Mat recon = Mat::Zero(3, 3);
  for (std::size_t k = 0; k < basis.size(); ++k) recon += f.coefficients(static_cast<Eigen::Index>(k)) * basis[k];
  const AnsatzFit g = fit_tensor_ansatz(recon, basis);
  EXPECT_LT((g.coefficients - f.coefficients).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(g.residual, 1e-14);
}

TEST(FitTensorAnsatz, DependentBasisIsRejected) {
  const std::vector<Mat> basis{Mat::Identity(3, 3), 2.0 * Mat::Identity(3, 3)};
  EXPECT_THROW(fit_tensor_ansatz(Mat::Identity(3, 3), basis), ConfigurationError);
}

TEST(HomogeneousFit, MonomialCounts) {
  EXPECT_EQ(cubic_monomial_count(3), 10u);
  EXPECT_EQ(homogeneous_monomials(3, 3).size(), 10u);
  EXPECT_EQ(homogeneous_monomials(2, 2).size(), 3u);
  EXPECT_EQ(default_probe_count(3), 40u);
}

TEST(Verdict, HysteresisBand) {
  EXPECT_EQ(verdict_for(1e-9, 1e-8), Verdict::Yes);
  EXPECT_EQ(verdict_for(5e-8, 1e-8), Verdict::Inconclusive);
  EXPECT_EQ(verdict_for(1e-7, 1e-8), Verdict::Inconclusive);
  EXPECT_EQ(verdict_for(2e-7, 1e-8), Verdict::No);
  EXPECT_EQ(to_string(Verdict::Inconclusive), "inconclusive");
}

TEST(Probes, RespectSingularMargin) {
  const AlphaBetaMetric M = example();
  const ProbeSet P = probes(M, kExampleX, 200);
  ASSERT_EQ(P.count(), 200u);
  const alphabeta::PointData pd = alphabeta::point_data(M, kExampleX);
  for (const Vec& y : P.directions) {
    const alphabeta::Slope sl = alphabeta::slope(pd.pkg, y);
    EXPECT_GE(sl.s / std::sqrt(sl.b2), 0.05);
    EXPECT_NEAR(y.norm(), 1.0, 1e-14);
  }
}

TEST(Probes, ReproducibleForAFixedSeed) {
  const AlphaBetaMetric M = example();
  const ProbeSet a = probes(M, kExampleX), b = probes(M, kExampleX);
  ASSERT_EQ(a.count(), b.count());
  for (std::size_t i = 0; i < a.count(); ++i) EXPECT_EQ(a.directions[i], b.directions[i]);
  const ProbeSet c = make_probe_set(M, kExampleX, {.seed = 99});
  EXPECT_NE(a.directions.front(), c.directions.front());
}

TEST(Douglas, LocallyMinkowskiIsZero) {
  const AlphaBetaMetric M = minkowski();
  EXPECT_EQ(douglas_residual(M, probes(M, vec3(0.2, 0.1, -0.1))), 0.0);
}

TEST(Douglas, BerwaldSprayIsCubicExactly) {
  const AlphaBetaMetric M = berwald();
  const ProbeSet P = probes(M, vec3(0.1, 0.4, -0.3));
  EXPECT_LT(douglas_residual(M, P), 1e-9);
  EXPECT_LT(douglas_residual(M, P, SprayRoute::Definitional), 1e-9);
}

TEST(Douglas, KropinaPlusWithIntegrableForm) {
  for (double c : {0.0, 1.0}) {
    const AlphaBetaMetric M = kropina_plus(c);
    const ProbeSet P = probes(M, vec3(0.3, -0.2, 0.5));
    EXPECT_LT(douglas_residual(M, P), 1e-8) << c;
    EXPECT_LT(douglas_residual_direct(M, P), 1e-8) << c;
  }
}

TEST(Douglas, NonClosedFormIsNotDouglas) {
  const AlphaBetaMetric M = twisted();
  const ProbeSet P = probes(M, vec3(0.3, -0.2, 0.5));
  EXPECT_GT(douglas_residual(M, P), 1e-3);
  EXPECT_GT(douglas_residual_direct(M, P), 1e-3);
}

TEST(Douglas, ExampleIsDouglasByBothRoutes) {
  const AlphaBetaMetric M = example();
  const ProbeSet P = probes(M, kExampleX);
  EXPECT_LT(douglas_residual(M, P), 1e-8);
  EXPECT_LT(douglas_residual(M, P, SprayRoute::Definitional), 1e-8);
  EXPECT_LT(douglas_residual_direct(M, P), 1e-8);
  EXPECT_LT(spray_route_discrepancy(M, P), 1e-7);
}

TEST(Douglas, InvariantUnderProbeRescaling) {
  for (const AlphaBetaMetric& M : {twisted(), example()}) {
    const Vec x = M.label == "twisted" ? vec3(0.3, -0.2, 0.5) : kExampleX;
    ProbeSet P = probes(M, x);
    const double r1 = douglas_residual(M, P);
    for (Vec& y : P.directions) y *= 3.7;
    EXPECT_NEAR(douglas_residual(M, P), r1, 1e-10);
  }
}

TEST(Douglas, UnderdeterminedFitIsRejected) {
  const AlphaBetaMetric M = example();
  ProbeSet P = probes(M, kExampleX);
  P.directions.resize(9);
  EXPECT_THROW(douglas_residual(M, P), ConfigurationError);
}

TEST(Hamel, LocallyMinkowskiIsZero) {
  const AlphaBetaMetric M = minkowski();
  const ProbeSet P = probes(M, vec3(0.2, 0.1, -0.1));
  EXPECT_EQ(hamel_residual(M, P), 0.0);
  EXPECT_EQ(hamel_residual(alphabeta::metric_field(M), P), 0.0);
  EXPECT_EQ(projective_factor(M, P.x, P.directions.front()), 0.0);
}

TEST(Hamel, Case2IsProjectivelyFlat) {
  const AlphaBetaMetric M = case2();
  const ProbeSet P = probes(M, kCase2X);
  EXPECT_LT(hamel_residual(M, P), 1e-8);
  EXPECT_LT(hamel_residual(alphabeta::metric_field(M), P), 1e-8);
  EXPECT_LT(hamel_residual_direct(M, P), 1e-8);
}

TEST(Hamel, ExampleIsNotProjectivelyFlat) {
  const AlphaBetaMetric M = example();
  const ProbeSet P = probes(M, kExampleX);
  EXPECT_GT(hamel_residual(M, P), 1e-3);
  EXPECT_GT(hamel_residual_direct(M, P), 1e-3);
}

TEST(Hamel, FlatnessImpliesSprayAlongY) {
  const AlphaBetaMetric M = case2();
  const ProbeSet P = probes(M, kCase2X);
  for (const Vec& y : P.directions) {
    const Vec G = alphabeta::spray_generic(M, P.x, y);
    const double P_y = projective_factor(M, P.x, y);
    EXPECT_LT((G - P_y * y).cwiseAbs().maxCoeff() / y.squaredNorm(), 1e-7);
    const double cosine = G.dot(y) / (G.norm() * y.norm());
    EXPECT_LT(std::acos(std::min(1.0, std::abs(cosine))), 1e-6);
  }
}

TEST(ProjectiveFactor, Case2ClosedForm) {
  const Vec y = vec3(1, 1, 0);
  const EtaProfile eta = EtaProfile::affine_x1(0.0, 1.0);
  const double P = projective_factor(case2(), kCase2X, y);
  EXPECT_NEAR(P, constructions::case2_projective_factor(1.0, 2.0, eta, kCase2X, y), 1e-9);
  // by hand: F = 1 + 1/sqrt(2), P = 1 / (2F)
  EXPECT_NEAR(P, 1.0 / (2.0 + std::sqrt(2.0)), 1e-12);
}

TEST(FlagCurvature, Case2ClosedForm) {
  const Vec y = vec3(1, 1, 0);
  const EtaProfile eta = EtaProfile::affine_x1(0.0, 1.0);
  const double K = flag_curvature_projective(case2(), kCase2X, y);
  EXPECT_NEAR(K, constructions::case2_flag_curvature(1.0, 2.0, eta, kCase2X, y), 1e-8);
  const double F = 1.0 + 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(K, 3.0 / (4.0 * std::pow(F, 4)), 1e-8);
  EXPECT_NEAR(K, 0.0883117545685783, 1e-12);
}

TEST(FlagCurvature, ClosedFormAwayFromSpotValue) {
  const EtaProfile eta = EtaProfile::exp_x1(0.7);
  const AlphaBetaMetric M = case2(eta);
  const Vec x = vec3(0.3, -0.4, 0.2), y = vec3(0.8, -0.3, 0.5);
  EXPECT_NEAR(flag_curvature_projective(M, x, y), constructions::case2_flag_curvature(1.0, 2.0, eta, x, y), 1e-8);
  EXPECT_NEAR(projective_factor(M, x, y), constructions::case2_projective_factor(1.0, 2.0, eta, x, y), 1e-9);
}

TEST(FlagCurvature, LocallyMinkowskianBranches) {
  EXPECT_LT(std::abs(flag_curvature_projective(case2(EtaProfile::constant(2.0)), kCase2X, vec3(1, 1, 0))), 1e-10);
  const AlphaBetaMetric pure =
      constructions::local_structure_metric(0.0, 3.0, EtaProfile::one_plus_square(), constructions::flat_base(3));
  EXPECT_LT(std::abs(flag_curvature_projective(pure, vec3(0.2, 0.1, -0.3), vec3(1, 0.2, 0.1))), 1e-8);
}

TEST(FlagCurvature, RequiresProjectiveFlatness) {
  EXPECT_THROW(flag_curvature_projective(example(), kExampleX, vec3(1, 0.2, 0.1)), PreconditionError);
}

TEST(ClassifyMetric, ExampleReport) {
  const AlphaBetaMetric M = example();
  const ClassificationReport r = classify_metric(M, probes(M, kExampleX));
  EXPECT_EQ(r.is_douglas, Verdict::Yes);
  EXPECT_EQ(r.is_proj_flat, Verdict::No);
  EXPECT_EQ(r.probe_count, default_probe_count(3));
  EXPECT_EQ(r.probe_seed, 20130601u);
  for (const char* key : {"douglas", "douglas_direct", "hamel", "hamel_direct"}) EXPECT_TRUE(r.residuals.contains(key));
}

TEST(ClassifyMetric, NegativeControl) {
  const AlphaBetaMetric M = twisted();
  const ClassificationReport r = classify_metric(M, probes(M, vec3(0.3, -0.2, 0.5)));
  EXPECT_EQ(r.is_douglas, Verdict::No);
  EXPECT_EQ(r.is_proj_flat, Verdict::No);
}
