#pragma once

#include <string>

#include "finslab/field.hpp"
#include "finslab/phi.hpp"
#include "finslab/riemann.hpp"

namespace finslab::alphabeta {

/// F = alpha * phi(beta / alpha).
struct AlphaBetaMetric {
  riemann::MetricField alpha;
  riemann::OneFormField beta;
  PhiFamily phi;
  std::string label;

  int dim() const { return alpha.dim(); }
};

/// F over jets. Throws DomainError on alpha(y) = 0, on the cone beta(y) = 0
/// for families singular at s = 0, and outside phi's domain.
ad::Jet2 metric_jet(const AlphaBetaMetric& M, ad::JetSpan x, ad::JetSpan y);

ad::TwoArgField metric_field(const AlphaBetaMetric& M);
ad::TwoArgField metric_squared_field(const AlphaBetaMetric& M);

double metric_value(const AlphaBetaMetric& M, const Vec& x, const Vec& y);

/// Point data shared by every spray evaluation at a fixed x.
struct PointData {
  Vec x;
  riemann::Christoffel gamma;
  riemann::CovariantPackage pkg;
};

PointData point_data(const AlphaBetaMetric& M, const Vec& x);

/// The closed assembly
///   G^i = G^i_alpha + alpha Q s^i_0 + alpha^-1 Theta (-2 alpha Q s_0 + r_00) y^i
///         + Psi (-2 alpha Q s_0 + r_00) b^i.
Vec spray_full(const AlphaBetaMetric& M, const Vec& x, const Vec& y);
Vec spray_full(const AlphaBetaMetric& M, const PointData& pd, const Vec& y);

/// g_ij = 1/2 [F^2]_{y^i y^j}.
Mat fundamental_tensor(const AlphaBetaMetric& M, const Vec& x, const Vec& y);

/// G^i = 1/4 g^{il} ([F^2]_{x^k y^l} y^k - [F^2]_{x^l}), by AD on F^2 alone.
Vec spray_generic(const AlphaBetaMetric& M, const Vec& x, const Vec& y);
/// The same definition for an arbitrary Finsler function F(x, y).
Vec spray_generic(const ad::TwoArgField& F, const Vec& x, const Vec& y);

/// s = beta/alpha and b^2 at (x, y).
struct Slope {
  double alpha = 0.0;
  double beta = 0.0;
  double s = 0.0;
  double b2 = 0.0;
};
Slope slope(const riemann::CovariantPackage& pkg, const Vec& y);

}  // namespace finslab::alphabeta
