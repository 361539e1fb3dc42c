#include "finslab/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "finslab/errors.hpp"
#include "finslab/lsq.hpp"
#include "finslab/probes.hpp"

namespace finslab::classify {

namespace {

using riemann::CovariantPackage;

double ratio(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 0.0 : num / std::numeric_limits<double>::min();
  return num / den;
}

struct Part {
  double residual = 0.0;
  double tau = 0.0;
  double k = 0.0;
};

Mat wedge(const Vec& b, const Vec& s) { return b * s.transpose() - s * b.transpose(); }
Mat sym(const Vec& b, const Vec& s) { return b * s.transpose() + s * b.transpose(); }

// s_ij = (b_i s_j - b_j s_i) / b^2
Part s_condition(const CovariantPackage& p) {
  return {ratio((p.s - wedge(p.b, p.s_vec) / p.b2).norm(), p.nabla_scale)};
}

// b_{i|j} = 2 tau {m b^2 a - (m + 1 + k2 b^2) b b}
Part y6_condition(const CovariantPackage& p, double m) {
  const Mat basis[] = {p.b2 * p.a, p.b * p.b.transpose()};
  const AnsatzFit fit = fit_tensor_ansatz(p.r, basis);
  Part out;
  out.tau = fit.coefficients(0) / (2.0 * m);
  if (out.tau != 0.0) out.k = (-fit.coefficients(1) / (2.0 * out.tau) - m - 1.0) / p.b2;
  const Mat pred = 2.0 * out.tau * (m * p.b2 * p.a - (m + 1.0 + out.k * p.b2) * p.b * p.b.transpose());
  out.residual = ratio((p.nabla - pred).norm(), p.nabla_scale);
  return out;
}

// b_{i|j} = 2 tau {m b^2 a - (m + 1) b b}
Part y06_condition(const CovariantPackage& p, double m) {
  const Mat B = m * p.b2 * p.a - (m + 1.0) * p.b * p.b.transpose();
  const Mat basis[] = {B};
  const AnsatzFit fit = fit_tensor_ansatz(p.r, basis);
  Part out;
  out.tau = 0.5 * fit.coefficients(0);
  out.residual = ratio((p.nabla - 2.0 * out.tau * B).norm(), p.nabla_scale);
  return out;
}

// r = 2 tau {m b^2 a - (m + 1 + k b^2) b b} - (m + 1 + 2 k b^2) / ((m - 1) b^2) (b s + s b)
Part y17_condition(const CovariantPackage& p, double m) {
  const Mat bs = sym(p.b, p.s_vec);
  const bool has_s = bs.norm() > 1e-12 * std::max(p.nabla_scale, 1e-300);
  std::vector<Mat> basis{p.b2 * p.a, p.b * p.b.transpose()};
  if (has_s) basis.push_back(bs);
  const AnsatzFit fit = fit_tensor_ansatz(p.r, basis);
  Part out;
  out.tau = fit.coefficients(0) / (2.0 * m);
  if (has_s)
    out.k = (-fit.coefficients(2) * (m - 1.0) * p.b2 - m - 1.0) / (2.0 * p.b2);
  else if (out.tau != 0.0)
    out.k = (-fit.coefficients(1) / (2.0 * out.tau) - m - 1.0) / p.b2;
  const Mat pred = 2.0 * out.tau * (m * p.b2 * p.a - (m + 1.0 + out.k * p.b2) * p.b * p.b.transpose()) -
                   (m + 1.0 + 2.0 * out.k * p.b2) / ((m - 1.0) * p.b2) * bs;
  out.residual = ratio((p.r - pred).norm(), p.nabla_scale);
  return out;
}

// r = 2 tau {m b^2 a - (m + 1) b b} - (m + 1) / ((m - 1) b^2) (b s + s b)
Part cr69_condition(const CovariantPackage& p, double m) {
  const Mat known = -(m + 1.0) / ((m - 1.0) * p.b2) * sym(p.b, p.s_vec);
  const Mat B = m * p.b2 * p.a - (m + 1.0) * p.b * p.b.transpose();
  const Mat basis[] = {B};
  const AnsatzFit fit = fit_tensor_ansatz(p.r - known, basis);
  Part out;
  out.tau = 0.5 * fit.coefficients(0);
  out.residual = ratio((p.r - known - 2.0 * out.tau * B).norm(), p.nabla_scale);
  return out;
}

/// Fits G_alpha(y) - known(y) = (rho . y) y over sample directions.
double spray_fit(const alphabeta::PointData& pd, const std::function<Vec(const Vec&)>& known,
                 const std::vector<Vec>& dirs, Vec& rho) {
  const auto n = static_cast<Eigen::Index>(pd.x.size());
  const auto N = static_cast<Eigen::Index>(dirs.size());
  Mat A(N * n, n);
  Vec t(N * n);
  double scale2 = 0.0;
  for (Eigen::Index p = 0; p < N; ++p) {
    const Vec& y = dirs[static_cast<std::size_t>(p)];
    const Vec Ga = riemann::spray_from_christoffel(pd.gamma, y);
    const Vec kn = known(y);
    for (Eigen::Index i = 0; i < n; ++i) A.row(p * n + i) = y(i) * y.transpose();
    t.segment(p * n, n) = Ga - kn;
    scale2 += Ga.squaredNorm() + kn.squaredNorm();
  }
  rho = A.colPivHouseholderQr().solve(t);
  return ratio((t - A * rho).norm(), std::sqrt(scale2));
}

}  // namespace

std::string to_string(ConditionTag t) {
  switch (t) {
    case ConditionTag::Ygjcw: return "ygjcw";
    case ConditionTag::Cr70: return "cr70";
    case ConditionTag::Y0017: return "y0017";
    case ConditionTag::Y6: return "y6";
    case ConditionTag::Y06: return "y06";
    case ConditionTag::Y17: return "y17";
    case ConditionTag::Cr69: return "cr69";
    case ConditionTag::W001: return "w001";
    case ConditionTag::Cw1: return "cw1";
    case ConditionTag::W1: return "w1";
    case ConditionTag::W3: return "w3";
    case ConditionTag::Cw3: return "cw3";
    case ConditionTag::Cw4: return "cw4";
  }
  return "unknown";
}

const std::vector<ConditionTag>& all_conditions() {
  static const std::vector<ConditionTag> tags{
      ConditionTag::Ygjcw, ConditionTag::Cr70, ConditionTag::Y0017, ConditionTag::Y6, ConditionTag::Y06,
      ConditionTag::Y17,   ConditionTag::Cr69, ConditionTag::W001,  ConditionTag::Cw1, ConditionTag::W1,
      ConditionTag::W3,    ConditionTag::Cw3,  ConditionTag::Cw4};
  return tags;
}

ConditionTag condition_from_string(const std::string& name) {
  for (ConditionTag t : all_conditions())
    if (to_string(t) == name) return t;
  throw ConfigurationError("unknown condition tag '" + name + "'");
}

ConditionResult check_condition(const alphabeta::AlphaBetaMetric& M, ConditionTag which, const Vec& x,
                                const ConditionOptions& opts) {
  const alphabeta::PointData pd = alphabeta::point_data(M, x);
  const CovariantPackage& p = pd.pkg;
  if (!(p.b2 > 0.0)) throw ConfigurationError("beta vanishes at the condition point");
  const double m = M.phi.exponent();
  const double c = M.phi.linear_coefficient();
  const int n = M.dim();

  ConditionResult res;
  res.tag = which;
  auto record = [&](const std::string& name, const Part& part) {
    res.components[name] = part.residual;
    res.residual = std::max(res.residual, part.residual);
  };

  std::function<Vec(const Vec&)> known;
  std::string spray_name;
  switch (which) {
    case ConditionTag::Ygjcw:
    case ConditionTag::Cr70:
    case ConditionTag::Y0017: record(to_string(which), s_condition(p)); return res;
    case ConditionTag::Y6: {
      const Part part = y6_condition(p, m);
      record("y6", part);
      res.fitted["tau"] = part.tau;
      res.fitted["k2"] = part.k;
      return res;
    }
    case ConditionTag::Y06: {
      const Part part = y06_condition(p, m);
      record("y06", part);
      res.fitted["tau"] = part.tau;
      return res;
    }
    case ConditionTag::Y17: {
      const Part part = y17_condition(p, m);
      record("y17", part);
      res.fitted["tau"] = part.tau;
      res.fitted["k"] = part.k;
      return res;
    }
    case ConditionTag::Cr69: {
      const Part part = cr69_condition(p, m);
      record("cr69", part);
      res.fitted["tau"] = part.tau;
      return res;
    }
    case ConditionTag::W001:
    case ConditionTag::Cw1: {
      record("ygjcw", s_condition(p));
      known = [&p, c](const Vec& y) {
        const double alpha2 = y.dot(p.a * y), beta = p.b.dot(y);
        return Vec(-p.r00(y) / (2.0 * p.b2) * p.b_up - (alpha2 - c * beta * beta) / (2.0 * p.b2) * p.s_up);
      };
      break;
    }
    case ConditionTag::W1: {
      const Part part = y6_condition(p, m);
      record("y6", part);
      res.fitted["tau"] = part.tau;
      res.fitted["k2"] = part.k;
      known = [&p, m, part](const Vec& y) {
        const double alpha2 = y.dot(p.a * y), beta = p.b.dot(y);
        return Vec(-part.tau * (m * alpha2 - part.k * beta * beta) * p.b_up);
      };
      break;
    }
    case ConditionTag::W3: {
      const Part part = y17_condition(p, m);
      record("y17", part);
      record("y0017", s_condition(p));
      res.fitted["tau"] = part.tau;
      res.fitted["k"] = part.k;
      known = [&p, m, part](const Vec& y) {
        const double alpha2 = y.dot(p.a * y), beta = p.b.dot(y);
        const double k = part.k;
        const double coef_b = 2.0 * k * beta * p.s0(y) / ((m - 1.0) * p.b2) - part.tau * (m * alpha2 - k * beta * beta);
        return Vec(coef_b * p.b_up - (m * alpha2 + k * beta * beta) / ((m - 1.0) * p.b2) * p.s_up);
      };
      break;
    }
    case ConditionTag::Cw3: {
      const Part part = y06_condition(p, m);
      record("y06", part);
      res.fitted["tau"] = part.tau;
      known = [&p, m, part](const Vec& y) { return Vec(-m * part.tau * y.dot(p.a * y) * p.b_up); };
      break;
    }
    case ConditionTag::Cw4: {
      const Part part = cr69_condition(p, m);
      record("cr70", s_condition(p));
      record("cr69", part);
      res.fitted["tau"] = part.tau;
      known = [&p, m, part](const Vec& y) {
        const double alpha2 = y.dot(p.a * y);
        return Vec(-m * part.tau * alpha2 * p.b_up + m / ((1.0 - m) * p.b2) * alpha2 * p.s_up);
      };
      break;
    }
  }

  const std::size_t count = opts.spray_probes ? opts.spray_probes : static_cast<std::size_t>(4 * n);
  if (count * static_cast<std::size_t>(n) < static_cast<std::size_t>(n))
    throw ConfigurationError("underdetermined spray fit");
  const std::vector<Vec> dirs = sphere_directions(n, count, opts.seed);
  Vec rho;
  record("spray", {spray_fit(pd, known, dirs, rho)});
  for (int i = 0; i < n; ++i) res.fitted["rho_" + std::to_string(i + 1)] = rho(i);
  return res;
}

}  // namespace finslab::classify
