#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "finslab/alphabeta.hpp"

namespace finslab::constructions {

/// Product of intervals [lo_i, hi_i]: the neighbourhood a local construction
/// is claimed on.
struct ChartBox {
  Vec lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& x) const;
  Vec center() const { return 0.5 * (lo + hi); }
  /// The 2^n corners, the centre, then `interior` uniform interior points.
  std::vector<Vec> samples(std::size_t interior = 16, std::uint64_t seed = 1) const;
};

/// Throws ConfigurationError unless lo < hi componentwise.
ChartBox make_chart(const Vec& lo, const Vec& hi);

/// A Riemannian metric with a 1-form on the same chart.
struct FormPair {
  riemann::MetricField alpha;
  riemann::OneFormField beta;
};

/// u(x) = -2(lambda + <e, x>) x + |x|^2 e + q x + f, q antisymmetric.
/// Every such u solves du^i/dx^j + du^j/dx^i = 0 (i != j),
/// du^i/dx^i = du^j/dx^j.
struct UField {
  double lambda = 0.0;
  Vec e, f;
  Mat q;

  int dim() const { return static_cast<int>(f.size()); }
  ad::JetVec eval(ad::JetSpan x) const;
  Vec value(const Vec& x) const;
  /// du^i/dx^j by AD.
  Mat jacobian(const Vec& x) const;
  /// Largest violation of the conformal Killing system at x.
  double pde_residual(const Vec& x) const;
};

UField make_ufield(double lambda, const Vec& e, const Vec& f, const Mat& q);

/// The specialization e = t f, q = 0. Requires t f != 0 and
/// lambda^2 + t |f|^2 != 0.
UField example_ufield(double lambda, double t, const Vec& f);

/// alpha~ = |y| / |u|, beta~ = <u, y> / |u|^2. With a chart, u != 0 is
/// checked on its samples up front; otherwise evaluation at a zero of u
/// raises DomainError.
FormPair conformal_pair_from_u(const UField& u, const ChartBox* chart = nullptr);

/// alpha~ = b^m alpha, beta~ = b^(m-1) beta with b = |beta|_alpha, so that
/// |beta~|_alpha~ = 1 and beta^m alpha^(1-m) is unchanged.
FormPair deform(const riemann::MetricField& alpha, const riemann::OneFormField& beta, double m,
                const ChartBox* chart = nullptr);

/// Constant-curvature metric
///   sqrt((1 + mu|x|^2)|y|^2 - mu<x, y>^2) / (1 + mu|x|^2).
riemann::MetricField space_form(int n, double mu);

/// The closed conformal form on the space form,
///   b_i = (k x^i + (1 + mu|x|^2) e_i - mu<e, x> x^i) / (1 + mu|x|^2)^(3/2).
riemann::OneFormField conformal_form_on_space_form(double mu, double k, const Vec& e);

/// |b|^2 on the space form from the closed expression
///   |e|^2 + (k^2|x|^2 + 2k<e, x> - mu<e, x>^2) / (1 + mu|x|^2).
double space_form_b2_closed(double mu, double k, const Vec& e, const Vec& x);
/// The same quantity by inverting the metric numerically.
double space_form_b2_numeric(double mu, double k, const Vec& e, const Vec& x);
/// Whether the conformal form has unit length at x.
bool space_form_unit_length(double mu, double k, const Vec& e, const Vec& x, double tol = 1e-12);

/// Positive scalar eta(x) with closed-form derivatives along x^1.
struct EtaProfile {
  std::string name;
  /// True when eta depends on x^1 alone.
  bool x1_only = false;
  std::function<ad::Jet2(ad::JetSpan x)> eval;
  std::function<double(const Vec& x)> value;
  std::function<double(const Vec& x)> d1;
  std::function<double(const Vec& x)> d11;

  static EtaProfile constant(double v);
  /// a0 + a1 x^1.
  static EtaProfile affine_x1(double a0, double a1);
  /// 1 + |x|^2.
  static EtaProfile one_plus_square();
  /// exp(rate x^1).
  static EtaProfile exp_x1(double rate = 1.0);
};

/// alpha~ = |y|, beta~ = y^1.
FormPair flat_base(int n);

/// F = c eta beta~ + beta~^m alpha~^(1-m) written over
///   alpha = eta^(m/(m-1)) alpha~, beta = eta beta~,
/// i.e. as alpha phi(beta/alpha) with phi = c s + s^m. Requires m != 0, +-1,
/// and eta = eta(x^1) when c != 0. With a chart, eta > 0 is checked on it.
alphabeta::AlphaBetaMetric local_structure_metric(double c, double m, const EtaProfile& eta, const FormPair& base,
                                                  const ChartBox* chart = nullptr, std::string label = {});

/// tau carried by the local-structure pair over a base with parallel unit
/// beta~: tau = b~^k eta_k / (2 (m - 1) eta^2), b~^k raised with alpha~.
double planted_tau(const EtaProfile& eta, const FormPair& base, double m, const Vec& x);

/// P = c eta_1 (y^1)^2 / (2F) for the flat-base local structure.
double case2_projective_factor(double c, double m, const EtaProfile& eta, const Vec& x, const Vec& y);
/// K = c (y^1)^3 / (2F^3) {3 c eta_1^2 y^1 / (2F) - eta_11} for the same metric.
double case2_flag_curvature(double c, double m, const EtaProfile& eta, const Vec& x, const Vec& y);

/// beta = exp(<p, x>) (q + S x) with S symmetric: h dg for
/// g = <q, x> + x^T S x / 2, hence beta ^ d beta = 0.
riemann::OneFormField integrable_form(const Vec& p, const Vec& q, const Mat& S);

/// The m-Kropina metric of the conformal Killing example:
/// u from example_ufield, the pair from conformal_pair_from_u, lifted by eta.
alphabeta::AlphaBetaMetric example_metric(double lambda, double t, const Vec& f, double m, const EtaProfile& eta,
                                          const ChartBox* chart = nullptr);

}  // namespace finslab::constructions
