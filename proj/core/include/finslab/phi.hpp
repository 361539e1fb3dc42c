#pragma once

#include <array>
#include <string>

#include "finslab/jet.hpp"

namespace finslab::alphabeta {

enum class PhiVariant { PowerSeries, MKropina, KropinaPlus, SqrtMixed, SqrtPure };

std::string to_string(PhiVariant v);
PhiVariant phi_variant_from_string(const std::string& name);

/// Closed-form description of phi(s) for F = alpha * phi(beta / alpha).
///
///   PowerSeries  phi = c s + s^m (1 + a1 s + a2 s^2 + a3 s^3 + a4 s^4)
///   MKropina     phi = s^m
///   KropinaPlus  phi = c s + 1/s
///   SqrtMixed    phi = k1 s + s^m (1 + k2 s^2)^((1-m)/2)
///   SqrtPure     phi = s^m (1 + k s^2)^((1-m)/2)
///
/// The series is truncated after a4; for non-polynomial phi it is an
/// approximation of that order.
struct PhiFamily {
  PhiVariant variant = PhiVariant::MKropina;
  double c = 0.0;
  double m = 2.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k = 0.0;
  std::array<double, 4> series{};

  static PhiFamily power_series(double c, double m, std::array<double, 4> a);
  static PhiFamily m_kropina(double m);
  static PhiFamily kropina_plus(double c);
  static PhiFamily sqrt_mixed(double k1, double m, double k2);
  static PhiFamily sqrt_pure(double m, double k);

  /// Exponent of the leading singular power (-1 for KropinaPlus).
  double exponent() const;
  /// Coefficient of the linear term c s (k1 for SqrtMixed, 0 when absent).
  double linear_coefficient() const;
  /// True when phi or one of its first two derivatives blows up at s = 0.
  bool singular_at_zero() const;

  /// Throws ConfigurationError for m in {0, 1}, or a non-zero linear
  /// coefficient next to a negative integer m.
  void validate() const;
};

struct PhiJet {
  double phi = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// phi, phi', phi'' from the closed form.
PhiJet phi_jet(const PhiFamily& phi, double s);

/// phi composed with a jet argument.
ad::Jet2 apply_phi(const PhiFamily& phi, const ad::Jet2& s);

/// Q, Theta, Psi, Delta at (s, b^2), plus Q' which they are built from.
struct SprayInvariants {
  double Q = 0.0;
  double dQ = 0.0;
  double Theta = 0.0;
  double Psi = 0.0;
  double Delta = 0.0;
};

SprayInvariants spray_invariants(const PhiFamily& phi, double s, double b2);
/// Same, for a phi given only through its jet at s.
SprayInvariants spray_invariants(const PhiJet& pj, double s, double b2);

}  // namespace finslab::alphabeta
