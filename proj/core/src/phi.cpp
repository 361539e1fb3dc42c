#include "finslab/phi.hpp"

#include <cmath>

#include "finslab/errors.hpp"

namespace finslab::alphabeta {

namespace {

bool is_integer(double v) { return std::nearbyint(v) == v; }

[[noreturn]] void singular(double s) { throw DomainError("phi singular at s = " + std::to_string(s)); }

/// s^m with its first two derivatives.
PhiJet power(double s, double m) {
  if (!is_integer(m) && s <= 0.0) singular(s);
  if (s == 0.0) {
    if (m < 2.0 && m != 0.0 && m != 1.0) singular(s);
    if (m == 0.0) return {1.0, 0.0, 0.0};
    if (m == 1.0) return {0.0, 1.0, 0.0};
    if (m == 2.0) return {0.0, 0.0, 2.0};
    return {0.0, 0.0, 0.0};
  }
  const double v = std::pow(s, m);
  return {v, m * v / s, m * (m - 1.0) * v / (s * s)};
}

PhiJet product(const PhiJet& f, const PhiJet& g) {
  return {f.phi * g.phi, f.d1 * g.phi + f.phi * g.d1, f.d2 * g.phi + 2.0 * f.d1 * g.d1 + f.phi * g.d2};
}

/// (1 + k s^2)^((1 - m) / 2)
PhiJet sqrt_factor(double s, double k, double m) {
  const double q = 1.0 + k * s * s;
  if (q <= 0.0) singular(s);
  const double p = 0.5 * (1.0 - m);
  const double h = std::pow(q, p);
  const double d1 = 2.0 * k * p * s * h / q;
  const double d2 = 2.0 * k * p * h / q + 4.0 * k * k * p * (p - 1.0) * s * s * h / (q * q);
  return {h, d1, d2};
}

}  // namespace

std::string to_string(PhiVariant v) {
  switch (v) {
    case PhiVariant::PowerSeries: return "power_series";
    case PhiVariant::MKropina: return "m_kropina";
    case PhiVariant::KropinaPlus: return "kropina_plus";
    case PhiVariant::SqrtMixed: return "sqrt_mixed";
    case PhiVariant::SqrtPure: return "sqrt_pure";
  }
  return "unknown";
}

PhiVariant phi_variant_from_string(const std::string& name) {
  if (name == "power_series") return PhiVariant::PowerSeries;
  if (name == "m_kropina") return PhiVariant::MKropina;
  if (name == "kropina_plus") return PhiVariant::KropinaPlus;
  if (name == "sqrt_mixed") return PhiVariant::SqrtMixed;
  if (name == "sqrt_pure") return PhiVariant::SqrtPure;
  throw ConfigurationError("unknown phi family '" + name + "'");
}

PhiFamily PhiFamily::power_series(double c, double m, std::array<double, 4> a) {
  PhiFamily p;
  p.variant = PhiVariant::PowerSeries;
  p.c = c;
  p.m = m;
  p.series = a;
  p.validate();
  return p;
}

PhiFamily PhiFamily::m_kropina(double m) {
  PhiFamily p;
  p.variant = PhiVariant::MKropina;
  p.m = m;
  p.validate();
  return p;
}

PhiFamily PhiFamily::kropina_plus(double c) {
  PhiFamily p;
  p.variant = PhiVariant::KropinaPlus;
  p.c = c;
  p.m = -1.0;
  p.validate();
  return p;
}

PhiFamily PhiFamily::sqrt_mixed(double k1, double m, double k2) {
  PhiFamily p;
  p.variant = PhiVariant::SqrtMixed;
  p.k1 = k1;
  p.m = m;
  p.k2 = k2;
  p.validate();
  return p;
}

PhiFamily PhiFamily::sqrt_pure(double m, double k) {
  PhiFamily p;
  p.variant = PhiVariant::SqrtPure;
  p.m = m;
  p.k = k;
  p.validate();
  return p;
}

double PhiFamily::exponent() const { return variant == PhiVariant::KropinaPlus ? -1.0 : m; }

double PhiFamily::linear_coefficient() const {
  switch (variant) {
    case PhiVariant::PowerSeries:
    case PhiVariant::KropinaPlus: return c;
    case PhiVariant::SqrtMixed: return k1;
    default: return 0.0;
  }
}

bool PhiFamily::singular_at_zero() const {
  const double e = exponent();
  if (is_integer(e)) return e < 0.0;
  return e < 2.0;
}

void PhiFamily::validate() const {
  // KropinaPlus is c s + s^-1 (1 + 0 s + 0 s^2): its c is not the linear
  // coefficient of the normalized form, so only the m check applies to it.
  if (variant == PhiVariant::KropinaPlus) return;
  if (m == 0.0 || m == 1.0) throw ConfigurationError("phi exponent m must differ from 0 and 1");
  if (m < 0.0 && is_integer(m) && linear_coefficient() != 0.0)
    throw ConfigurationError("linear coefficient must be 0 when m is a negative integer");
}

PhiJet phi_jet(const PhiFamily& f, double s) {
  switch (f.variant) {
    case PhiVariant::PowerSeries: {
      const auto& a = f.series;
      const PhiJet poly{1.0 + s * (a[0] + s * (a[1] + s * (a[2] + s * a[3]))),
                        a[0] + s * (2.0 * a[1] + s * (3.0 * a[2] + s * 4.0 * a[3])),
                        2.0 * a[1] + s * (6.0 * a[2] + s * 12.0 * a[3])};
      PhiJet r = product(power(s, f.m), poly);
      r.phi += f.c * s;
      r.d1 += f.c;
      return r;
    }
    case PhiVariant::MKropina: return power(s, f.m);
    case PhiVariant::KropinaPlus: {
      if (s == 0.0) singular(s);
      const double inv = 1.0 / s;
      return {f.c * s + inv, f.c - inv * inv, 2.0 * inv * inv * inv};
    }
    case PhiVariant::SqrtMixed: {
      PhiJet r = product(power(s, f.m), sqrt_factor(s, f.k2, f.m));
      r.phi += f.k1 * s;
      r.d1 += f.k1;
      return r;
    }
    case PhiVariant::SqrtPure: return product(power(s, f.m), sqrt_factor(s, f.k, f.m));
  }
  throw ConfigurationError("unknown phi variant");
}

ad::Jet2 apply_phi(const PhiFamily& phi, const ad::Jet2& s) {
  const PhiJet pj = phi_jet(phi, s.value());
  return s.chain(pj.phi, pj.d1, pj.d2);
}

SprayInvariants spray_invariants(const PhiJet& pj, double s, double b2) {
  const double den = pj.phi - s * pj.d1;
  if (std::abs(den) <= 1e-13 * (std::abs(pj.phi) + std::abs(s * pj.d1)) || den == 0.0)
    throw DomainError("Randers-degenerate direction (phi - s phi' = 0)");
  SprayInvariants inv;
  inv.Q = pj.d1 / den;
  // Q' = phi phi'' / (phi - s phi')^2
  inv.dQ = pj.phi * pj.d2 / (den * den);
  const double t1 = s * inv.Q, t2 = (b2 - s * s) * inv.dQ;
  inv.Delta = 1.0 + t1 + t2;
  if (std::abs(inv.Delta) <= 1e-13 * (1.0 + std::abs(t1) + std::abs(t2)))
    throw DomainError("Delta-singular direction");
  inv.Theta = (inv.Q - s * inv.dQ) / (2.0 * inv.Delta);
  inv.Psi = inv.dQ / (2.0 * inv.Delta);
  return inv;
}

SprayInvariants spray_invariants(const PhiFamily& phi, double s, double b2) {
  return spray_invariants(phi_jet(phi, s), s, b2);
}

}  // namespace finslab::alphabeta
