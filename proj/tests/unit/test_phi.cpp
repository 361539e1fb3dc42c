#include <gtest/gtest.h>

#include <cmath>

#include "finslab/errors.hpp"
#include "finslab/phi.hpp"
#include "oracles.hpp"

using namespace finslab;
using namespace finslab::alphabeta;
using finslab::testing::rel;

namespace {

std::vector<double> samples_in(double lo, double hi, int count) {
  std::vector<double> s;
  for (int i = 0; i < count; ++i) s.push_back(lo + (hi - lo) * (i + 0.5) / count);
  return s;
}

std::vector<std::pair<std::string, PhiFamily>> families() {
  return {
      {"series", PhiFamily::power_series(0.7, 2.0, {0.1, -0.2, 0.05, 0.01})},
      {"mkropina2", PhiFamily::m_kropina(2.0)},
      {"mkropina-half", PhiFamily::m_kropina(0.5)},
      {"mkropina-3", PhiFamily::m_kropina(-3.0)},
      {"kropina", PhiFamily::kropina_plus(0.0)},
      {"kropina-plus", PhiFamily::kropina_plus(1.0)},
      {"sqrt-mixed", PhiFamily::sqrt_mixed(0.5, 3.0, 0.4)},
      {"sqrt-pure", PhiFamily::sqrt_pure(2.0, 1.0)},
  };
}

}  // namespace

TEST(PhiJet, SquareByHand) {
  const PhiJet j = phi_jet(PhiFamily::m_kropina(2.0), 0.5);
  EXPECT_DOUBLE_EQ(j.phi, 0.25);
  EXPECT_DOUBLE_EQ(j.d1, 1.0);
  EXPECT_DOUBLE_EQ(j.d2, 2.0);
}

TEST(PhiJet, ReciprocalByHand) {
  const PhiJet j = phi_jet(PhiFamily::kropina_plus(0.0), 0.5);
  EXPECT_DOUBLE_EQ(j.phi, 2.0);
  EXPECT_DOUBLE_EQ(j.d1, -4.0);
  EXPECT_DOUBLE_EQ(j.d2, 16.0);
}

TEST(PhiJet, SqrtPureMatchesDifferences) {
  auto f = [](double s) { return s * s * std::pow(1.0 + s * s, -0.5); };
  const double s = 0.3, h = 1e-4;
  const PhiJet j = phi_jet(PhiFamily::sqrt_pure(2.0, 1.0), s);
  EXPECT_NEAR(j.phi, f(s), 1e-15);
  EXPECT_NEAR(j.d1, (f(s + h) - f(s - h)) / (2 * h), 1e-8);
  EXPECT_NEAR(j.d2, (f(s + h) - 2 * f(s) + f(s - h)) / (h * h), 1e-7);
}

TEST(PhiJet, EveryFamilyMatchesDifferences) {
  for (const auto& [name, phi] : families()) {
    SCOPED_TRACE(name);
    for (double s : samples_in(0.1, 0.9, 20)) {
      const double h = 1e-5;
      const PhiJet j = phi_jet(phi, s), p = phi_jet(phi, s + h), m = phi_jet(phi, s - h);
      EXPECT_LT(rel(j.d1, (p.phi - m.phi) / (2 * h), 1e-3), 1e-7);
      EXPECT_LT(rel(j.d2, (p.d1 - m.d1) / (2 * h), 1e-3), 1e-7);
    }
  }
}

TEST(PhiJet, SingularArgumentIsADomainError) {
  EXPECT_THROW(phi_jet(PhiFamily::kropina_plus(1.0), 0.0), DomainError);
  EXPECT_THROW(phi_jet(PhiFamily::m_kropina(-2.0), 0.0), DomainError);
  EXPECT_THROW(phi_jet(PhiFamily::sqrt_pure(2.0, -4.0), 0.6), DomainError);
}

TEST(PhiFamily, Validation) {
  EXPECT_THROW(PhiFamily::m_kropina(1.0).validate(), ConfigurationError);
  EXPECT_THROW(PhiFamily::m_kropina(0.0).validate(), ConfigurationError);
  EXPECT_THROW(PhiFamily::power_series(1.0, -2.0, {}).validate(), ConfigurationError);
  EXPECT_NO_THROW(PhiFamily::power_series(0.0, -2.0, {}).validate());
  EXPECT_NO_THROW(PhiFamily::kropina_plus(1.0).validate());
  EXPECT_EQ(PhiFamily::kropina_plus(1.0).exponent(), -1.0);
  EXPECT_EQ(PhiFamily::sqrt_mixed(0.5, 3.0, 0.4).linear_coefficient(), 0.5);
}

TEST(SprayInvariants, MKropinaSpotValues) {
  const SprayInvariants inv = spray_invariants(PhiFamily::m_kropina(2.0), 0.5, 1.0);
  EXPECT_NEAR(inv.Q, -4.0, 1e-14);
  EXPECT_NEAR(inv.Psi, 0.8, 1e-14);
}

TEST(SprayInvariants, KropinaClosedForms) {
  for (double b2 : {0.5, 1.0, 2.5})
    for (double s : {0.2, 0.45, 0.7}) {
      const SprayInvariants inv = spray_invariants(PhiFamily::kropina_plus(0.0), s, b2);
      EXPECT_LT(rel(inv.Q, -1.0 / (2.0 * s)), 1e-14);
      EXPECT_LT(rel(inv.Psi, 1.0 / (2.0 * b2)), 1e-13);
    }
}

TEST(SprayInvariants, PsiClosedFormForMKropina) {
  for (double m : {2.0, 3.0, -2.0, 0.5})
    for (double b2 : {1.0, 1.7})
      for (double s : samples_in(0.1, 0.9, 25)) {
        const double expected = m / (2.0 * (m * b2 - (m + 1.0) * s * s));
        EXPECT_LT(rel(spray_invariants(PhiFamily::m_kropina(m), s, b2).Psi, expected), 1e-10) << m << " " << s;
      }
}

TEST(SprayInvariants, DefinitionalRelations) {
  for (const auto& [name, phi] : families()) {
    SCOPED_TRACE(name);
    for (double s : samples_in(0.1, 0.9, 30)) {
      const double b2 = 1.3;
      const PhiJet j = phi_jet(phi, s);
      SprayInvariants inv;
      try {
        inv = spray_invariants(phi, s, b2);
      } catch (const DomainError&) {
        continue;  // Delta-singular direction
      }
      EXPECT_LT(rel((j.phi - s * j.d1) * inv.Q, j.d1, 1e-300), 1e-12);
      EXPECT_LT(rel(inv.Delta, 1.0 + s * inv.Q + (b2 - s * s) * inv.dQ), 1e-12);
      EXPECT_LT(rel(inv.Theta, (inv.Q - s * inv.dQ) / (2.0 * inv.Delta)), 1e-12);
      EXPECT_LT(rel(inv.Psi, inv.dQ / (2.0 * inv.Delta)), 1e-12);
      // the PhiJet overload is the same computation with Q' by quotient rule
      const SprayInvariants viaJet = spray_invariants(j, s, b2);
      EXPECT_LT(rel(viaJet.Psi, inv.Psi), 1e-10);
    }
  }
}

TEST(SprayInvariants, AnalyticDerivativeOfQ) {
  for (const auto& [name, phi] : families()) {
    SCOPED_TRACE(name);
    for (double s : samples_in(0.15, 0.85, 10)) {
      const double h = 1e-5;
      const double q_plus = spray_invariants(phi_jet(phi, s + h), s + h, 4.0).Q;
      const double q_minus = spray_invariants(phi_jet(phi, s - h), s - h, 4.0).Q;
      EXPECT_LT(rel(spray_invariants(phi, s, 4.0).dQ, (q_plus - q_minus) / (2 * h), 1e-3), 1e-7);
    }
  }
}

TEST(SprayInvariants, RandersDegenerateDirection) {
  // phi = s: phi - s phi' = 0
  PhiJet linear{0.5, 1.0, 0.0};
  EXPECT_THROW(spray_invariants(linear, 0.5, 1.0), DomainError);
}

TEST(OdeCertification, SqrtMixed) {
  for (const auto& [k1, m, k2] : {std::tuple{0.5, 3.0, 0.4}, {1.0, 2.0, -0.5}, {0.0, -2.0, 0.8}}) {
    const PhiFamily phi = PhiFamily::sqrt_mixed(k1, m, k2);
    double worst = 0.0;
    for (double s : samples_in(0.1, 0.9, 200)) {
      const PhiJet j = phi_jet(phi, s);
      worst = std::max(worst, std::abs(j.d2 * (1.0 + k2 * s * s) * s * s + (m - k2 * s * s) * (j.phi - s * j.d1)));
    }
    EXPECT_LT(worst, 1e-9) << k1 << " " << m << " " << k2;
  }
}

TEST(OdeCertification, SqrtPure) {
  for (const auto& [m, k] : {std::pair{2.0, 1.0}, {3.0, -0.5}, {-2.0, 0.3}}) {
    const PhiFamily phi = PhiFamily::sqrt_pure(m, k);
    double worst = 0.0;
    for (double s : samples_in(0.1, 0.9, 200))
      worst = std::max(worst, std::abs(spray_invariants(phi, s, 2.0).Q + (m + k * s * s) / ((m - 1.0) * s)));
    EXPECT_LT(worst, 1e-10) << m << " " << k;
  }
}

TEST(OdeCertification, RiemannianSquareRootHasConstantQOverS) {
  for (const auto& [c, k] : {std::pair{1.0, 0.5}, {2.0, -0.7}, {0.3, 1.5}}) {
    double lo = INFINITY, hi = -INFINITY;
    for (double s : samples_in(0.1, 0.7, 200)) {
      const double r = std::sqrt(1.0 + k * s * s);
      const PhiJet j{c * r, c * k * s / r, c * k / (r * r * r)};
      const double q_over_s = spray_invariants(j, s, 1.0).Q / s;
      lo = std::min(lo, q_over_s);
      hi = std::max(hi, q_over_s);
    }
    EXPECT_LT(hi - lo, 1e-10);
    EXPECT_NEAR(lo, k, 1e-10);
  }
}
