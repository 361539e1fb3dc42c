#include "finslab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "finslab/errors.hpp"
#include "finslab/lsq.hpp"

namespace finslab::classify {

namespace {

double ratio(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 0.0 : num / std::numeric_limits<double>::min();
  return num / den;
}

/// Fits every antisymmetric component pair by cubics; values[p](i, j) holds
/// the pair quantity at probe p, scale[p](i, j) its magnitude reference.
double antisymmetric_cubic_residual(const ProbeSet& P, const std::vector<Mat>& values,
                                    const std::vector<Mat>& scale) {
  const HomogeneousFit fit(P.directions, 3);
  const auto n = static_cast<int>(P.x.size());
  const auto N = static_cast<Eigen::Index>(P.count());
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec v(N), w(N);
      for (Eigen::Index p = 0; p < N; ++p) {
        v(p) = values[static_cast<std::size_t>(p)](i, j);
        w(p) = scale[static_cast<std::size_t>(p)](i, j);
      }
      worst = std::max(worst, ratio(fit.residual_norm(v), w.norm()));
    }
  return worst;
}

/// Componentwise bound on the terms the closed spray is assembled from; the
/// reference size of G when the terms cancel.
Vec spray_magnitude(const alphabeta::AlphaBetaMetric& M, const alphabeta::PointData& pd, const Vec& y) {
  const auto& pkg = pd.pkg;
  const alphabeta::Slope sl = alphabeta::slope(pkg, y);
  const alphabeta::SprayInvariants inv = alphabeta::spray_invariants(M.phi, sl.s, sl.b2);
  const double w = std::abs(2.0 * sl.alpha * inv.Q * pkg.s0(y)) + std::abs(pkg.r00(y));
  return riemann::spray_from_christoffel(pd.gamma, y).cwiseAbs() +
         std::abs(sl.alpha * inv.Q) * pkg.s_up0(y).cwiseAbs() + (std::abs(inv.Theta) * w / sl.alpha) * y.cwiseAbs() +
         (std::abs(inv.Psi) * w) * pkg.b_up.cwiseAbs();
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict verdict_for(double residual, double tol) {
  if (residual < tol) return Verdict::Yes;
  if (residual > 10.0 * tol) return Verdict::No;
  return Verdict::Inconclusive;
}

double douglas_residual(const alphabeta::AlphaBetaMetric& M, const ProbeSet& P, SprayRoute route) {
  if (P.count() < cubic_monomial_count(M.dim()))
    throw ConfigurationError("underdetermined Douglas fit: need at least " +
                             std::to_string(cubic_monomial_count(M.dim())) + " probes");
  std::vector<Mat> values, scale;
  values.reserve(P.count());
  scale.reserve(P.count());
  const alphabeta::PointData pd = alphabeta::point_data(M, P.x);
  for (const Vec& y : P.directions) {
    const Vec G = route == SprayRoute::Closed ? alphabeta::spray_full(M, pd, y)
                                              : alphabeta::spray_generic(M, P.x, y);
    const Mat Gy = G * y.transpose();
    const Mat Sy = spray_magnitude(M, pd, y).cwiseMax(G.cwiseAbs()) * y.cwiseAbs().transpose();
    values.push_back(Gy - Gy.transpose());
    scale.push_back(Sy + Sy.transpose());
  }
  return antisymmetric_cubic_residual(P, values, scale);
}

double douglas_residual_direct(const alphabeta::AlphaBetaMetric& M, const ProbeSet& P) {
  if (P.count() < cubic_monomial_count(M.dim()))
    throw ConfigurationError("underdetermined Douglas fit: need at least " +
                             std::to_string(cubic_monomial_count(M.dim())) + " probes");
  const riemann::CovariantPackage pkg = riemann::covariant_package(M.alpha, M.beta, P.x);
  std::vector<Mat> values, scale;
  for (const Vec& y : P.directions) {
    const alphabeta::Slope sl = alphabeta::slope(pkg, y);
    const alphabeta::SprayInvariants inv = alphabeta::spray_invariants(M.phi, sl.s, sl.b2);
    const double w = -2.0 * sl.alpha * inv.Q * pkg.s0(y) + pkg.r00(y);
    const Mat A = (sl.alpha * inv.Q) * pkg.s_up0(y) * y.transpose();
    const Mat B = (inv.Psi * w) * pkg.b_up * y.transpose();
    values.push_back(A - A.transpose() + B - B.transpose());
    scale.push_back(A.cwiseAbs() + A.transpose().cwiseAbs() + B.cwiseAbs() + B.transpose().cwiseAbs());
  }
  return antisymmetric_cubic_residual(P, values, scale);
}

double hamel_residual(const ad::TwoArgField& F, const ProbeSet& P) {
  double num = 0.0, den = 0.0;
  for (const Vec& y : P.directions) {
    const ad::XYDerivatives d = ad::mixed_xy_derivatives(F, P.x, y);
    num += (d.dxdy.transpose() * y - d.dx).squaredNorm();
    den += d.dx.squaredNorm();
  }
  return ratio(std::sqrt(num), std::sqrt(den));
}

double hamel_residual(const alphabeta::AlphaBetaMetric& M, const ProbeSet& P) {
  const ad::TwoArgField F = alphabeta::metric_field(M);
  const ad::TwoArgField alpha = riemann::norm_field(M.alpha);
  const ad::TwoArgField beta{M.dim(), [b = M.beta](ad::JetSpan x, ad::JetSpan y) {
                               const ad::JetVec c = b.eval(x);
                               ad::Jet2 acc;
                               for (std::size_t i = 0; i < y.size(); ++i) acc += c[i] * y[i];
                               return acc;
                             }};
  double num = 0.0, den = 0.0;
  for (const Vec& y : P.directions) {
    const ad::XYDerivatives d = ad::mixed_xy_derivatives(F, P.x, y);
    const ad::XYDerivatives da = ad::mixed_xy_derivatives(alpha, P.x, y);
    const ad::XYDerivatives db = ad::mixed_xy_derivatives(beta, P.x, y);
    const double s = db.value / da.value;
    const alphabeta::PhiJet pj = alphabeta::phi_jet(M.phi, s);
    // F_x = (phi - s phi') alpha_x + phi' beta_x
    const Vec ingredients = std::abs(pj.phi - s * pj.d1) * da.dx.cwiseAbs() + std::abs(pj.d1) * db.dx.cwiseAbs();
    num += (d.dxdy.transpose() * y - d.dx).squaredNorm();
    den += ingredients.cwiseMax(d.dx.cwiseAbs()).squaredNorm();
  }
  return ratio(std::sqrt(num), std::sqrt(den));
}

double hamel_residual_direct(const alphabeta::AlphaBetaMetric& M, const ProbeSet& P) {
  const alphabeta::PointData pd = alphabeta::point_data(M, P.x);
  const auto& pkg = pd.pkg;
  double num = 0.0, den = 0.0;
  for (const Vec& y : P.directions) {
    const alphabeta::Slope sl = alphabeta::slope(pkg, y);
    const alphabeta::SprayInvariants inv = alphabeta::spray_invariants(M.phi, sl.s, sl.b2);
    const double alpha2 = sl.alpha * sl.alpha;
    const Vec y_low = pkg.a * y;
    const Vec Ga = riemann::spray_from_christoffel(pd.gamma, y);
    const Vec t1 = alpha2 * (pkg.a * Ga) - y_low * y_low.dot(Ga);
    const Vec t2 = (alpha2 * sl.alpha * inv.Q) * (pkg.s * y);
    const double w = -2.0 * sl.alpha * inv.Q * pkg.s0(y) + pkg.r00(y);
    const Vec t3 = (inv.Psi * sl.alpha * w) * (sl.alpha * pkg.b - sl.s * y_low);
    num += (t1 + t2 + t3).squaredNorm();
    den += (t1.cwiseAbs() + t2.cwiseAbs() + t3.cwiseAbs()).squaredNorm();
  }
  return ratio(std::sqrt(num), std::sqrt(den));
}

double projective_factor(const ad::TwoArgField& F, const Vec& x, const Vec& y) {
  const ad::XYDerivatives d = ad::mixed_xy_derivatives(F, x, y);
  if (d.value == 0.0) throw DomainError("projective factor undefined where F = 0");
  return d.dx.dot(y) / (2.0 * d.value);
}

double projective_factor(const alphabeta::AlphaBetaMetric& M, const Vec& x, const Vec& y) {
  return projective_factor(alphabeta::metric_field(M), x, y);
}

namespace {

void require_flat_flag(double violation, double hamel_tol) {
  if (violation > hamel_tol)
    throw PreconditionError("flag_curvature_projective needs a projectively flat metric; Hamel residual " +
                            std::to_string(violation) + " at the flag");
}

}  // namespace

double flag_curvature_projective(const ad::TwoArgField& F, const Vec& x, const Vec& y, double hamel_tol) {
  const ad::XYDerivatives d = ad::mixed_xy_derivatives(F, x, y);
  if (d.value == 0.0) throw DomainError("flag curvature undefined where F = 0");
  require_flat_flag(ratio((d.dxdy.transpose() * y - d.dx).norm(), d.dx.norm()), hamel_tol);
  const double F0 = d.value;
  const double Fy = d.dx.dot(y);
  const double P = Fy / (2.0 * F0);
  const double yDP = y.dot(d.dxdx * y) / (2.0 * F0) - Fy * Fy / (2.0 * F0 * F0);
  return (P * P - yDP) / (F0 * F0);
}

double flag_curvature_projective(const alphabeta::AlphaBetaMetric& M, const Vec& x, const Vec& y,
                                 double hamel_tol) {
  // The flag check uses the (alpha, beta) normalization, so metrics whose F_x
  // cancels to rounding noise are not rejected.
  ProbeSet flag;
  flag.x = x;
  flag.directions = {y};
  require_flat_flag(hamel_residual(M, flag), hamel_tol);
  return flag_curvature_projective(alphabeta::metric_field(M), x, y, std::numeric_limits<double>::infinity());
}

double spray_route_discrepancy(const alphabeta::AlphaBetaMetric& M, const ProbeSet& P) {
  const alphabeta::PointData pd = alphabeta::point_data(M, P.x);
  double worst = 0.0;
  for (const Vec& y : P.directions) {
    const Vec a = alphabeta::spray_full(M, pd, y);
    const Vec b = alphabeta::spray_generic(M, P.x, y);
    worst = std::max(worst, (a - b).norm() / std::max({a.norm(), b.norm(), 1e-12}));
  }
  return worst;
}

ClassificationReport classify_metric(const alphabeta::AlphaBetaMetric& M, const ProbeSet& P,
                                     const ClassifyTolerances& tol) {
  ClassificationReport rep;
  rep.metric_label = M.label;
  rep.tolerances = tol;
  rep.probe_count = P.count();
  rep.probe_seed = P.seed;
  rep.residuals["douglas"] = douglas_residual(M, P);
  rep.residuals["douglas_direct"] = douglas_residual_direct(M, P);
  rep.residuals["hamel"] = hamel_residual(M, P);
  rep.residuals["hamel_direct"] = hamel_residual_direct(M, P);
  rep.is_douglas = verdict_for(rep.residuals["douglas"], tol.douglas);
  rep.is_proj_flat = verdict_for(rep.residuals["hamel"], tol.hamel);
  return rep;
}

}  // namespace finslab::classify
