#include "finslab/alphabeta.hpp"

#include <cmath>

#include "finslab/errors.hpp"

namespace finslab::alphabeta {

using ad::Jet2;
using ad::JetSpan;

ad::Jet2 metric_jet(const AlphaBetaMetric& M, JetSpan x, JetSpan y) {
  const ad::JetVec a = M.alpha.eval(x);
  const ad::JetVec b = M.beta.eval(x);
  const Jet2 alpha2 = riemann::quadratic_form(a, y);
  if (alpha2.value() <= 0.0) throw DomainError("singular locus alpha(y)=0");
  const Jet2 alpha = ad::sqrt(alpha2);
  Jet2 beta;
  for (std::size_t i = 0; i < y.size(); ++i) beta += b[i] * y[i];
  if (beta.value() == 0.0 && M.phi.singular_at_zero()) throw DomainError("singular locus beta(y)=0");
  const Jet2 s = beta / alpha;
  try {
    return alpha * apply_phi(M.phi, s);
  } catch (const DomainError& e) {
    if (s.value() == 0.0) throw DomainError("singular locus beta(y)=0");
    throw;
  }
}

ad::TwoArgField metric_field(const AlphaBetaMetric& M) {
  return {M.dim(), [M](JetSpan x, JetSpan y) { return metric_jet(M, x, y); }};
}

ad::TwoArgField metric_squared_field(const AlphaBetaMetric& M) {
  return {M.dim(), [M](JetSpan x, JetSpan y) { return ad::square(metric_jet(M, x, y)); }};
}

double metric_value(const AlphaBetaMetric& M, const Vec& x, const Vec& y) {
  return ad::value_at(metric_field(M), x, y);
}

PointData point_data(const AlphaBetaMetric& M, const Vec& x) {
  return {x, riemann::christoffel(M.alpha, x), riemann::covariant_package(M.alpha, M.beta, x)};
}

Slope slope(const riemann::CovariantPackage& pkg, const Vec& y) {
  Slope sl;
  const double alpha2 = y.dot(pkg.a * y);
  if (alpha2 <= 0.0) throw DomainError("singular locus alpha(y)=0");
  sl.alpha = std::sqrt(alpha2);
  sl.beta = pkg.b.dot(y);
  sl.s = sl.beta / sl.alpha;
  sl.b2 = pkg.b2;
  return sl;
}

Vec spray_full(const AlphaBetaMetric& M, const PointData& pd, const Vec& y) {
  const auto& pkg = pd.pkg;
  const Slope sl = slope(pkg, y);
  if (sl.beta == 0.0 && M.phi.singular_at_zero()) throw DomainError("singular locus beta(y)=0");
  const SprayInvariants inv = spray_invariants(M.phi, sl.s, sl.b2);
  const double s0 = pkg.s0(y);
  const double r00 = pkg.r00(y);
  const double w = -2.0 * sl.alpha * inv.Q * s0 + r00;
  return riemann::spray_from_christoffel(pd.gamma, y) + sl.alpha * inv.Q * pkg.s_up0(y) +
         (inv.Theta * w / sl.alpha) * y + (inv.Psi * w) * pkg.b_up;
}

Vec spray_full(const AlphaBetaMetric& M, const Vec& x, const Vec& y) {
  return spray_full(M, point_data(M, x), y);
}

Mat fundamental_tensor(const AlphaBetaMetric& M, const Vec& x, const Vec& y) {
  return 0.5 * ad::mixed_xy_derivatives(metric_squared_field(M), x, y).dydy;
}

Vec spray_generic(const ad::TwoArgField& F, const Vec& x, const Vec& y) {
  const ad::TwoArgField F2{F.dim, [F](JetSpan xs, JetSpan ys) { return ad::square(F.eval(xs, ys)); }};
  const ad::XYDerivatives d = ad::mixed_xy_derivatives(F2, x, y);
  const Mat g = 0.5 * d.dydy;
  Eigen::JacobiSVD<Mat> svd(g);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-12 * sv(0)) {
    std::vector<double> where(x.data(), x.data() + x.size());
    where.insert(where.end(), y.data(), y.data() + y.size());
    throw DomainError("fundamental tensor degenerate at (x,y)", std::move(where));
  }
  return 0.25 * g.partialPivLu().solve(d.dxdy.transpose() * y - d.dx);
}

Vec spray_generic(const AlphaBetaMetric& M, const Vec& x, const Vec& y) {
  return spray_generic(metric_field(M), x, y);
}

}  // namespace finslab::alphabeta
