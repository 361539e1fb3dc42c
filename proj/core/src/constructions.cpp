#include "finslab/constructions.hpp"

#include <cmath>
#include <random>

#include "finslab/errors.hpp"

namespace finslab::constructions {

using ad::Jet2;
using ad::JetSpan;
using ad::JetVec;

namespace {

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Jet2 norm2(JetSpan x) {
  Jet2 acc;
  for (const Jet2& xi : x) acc += xi * xi;
  return acc;
}

Jet2 dot(JetSpan x, const Vec& v) {
  Jet2 acc;
  for (std::size_t i = 0; i < x.size(); ++i) acc += v(static_cast<Eigen::Index>(i)) * x[i];
  return acc;
}

void require_dim(const Vec& v, int n, const char* what) {
  if (v.size() != n) throw ConfigurationError(std::string(what) + " has the wrong dimension");
}

}  // namespace

bool ChartBox::contains(const Vec& x) const {
  if (x.size() != lo.size()) return false;
  return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

std::vector<Vec> ChartBox::samples(std::size_t interior, std::uint64_t seed) const {
  const int n = dim();
  std::vector<Vec> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Vec c(n);
    for (int i = 0; i < n; ++i) c(i) = (mask >> i) & 1u ? hi(i) : lo(i);
    out.push_back(c);
  }
  out.push_back(center());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < interior; ++k) {
    Vec p(n);
    for (int i = 0; i < n; ++i) p(i) = lo(i) + unit(rng) * (hi(i) - lo(i));
    out.push_back(p);
  }
  return out;
}

ChartBox make_chart(const Vec& lo, const Vec& hi) {
  if (lo.size() != hi.size() || lo.size() == 0) throw ConfigurationError("chart bounds must have equal positive size");
  if (!(lo.array() < hi.array()).all()) throw ConfigurationError("chart requires lo < hi in every coordinate");
  return {lo, hi};
}

JetVec UField::eval(JetSpan x) const {
  const int n = dim();
  const Jet2 lin = lambda + dot(x, e);
  const Jet2 r2 = norm2(x);
  JetVec u;
  u.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Jet2 v = -2.0 * lin * x[static_cast<std::size_t>(i)] + e(i) * r2 + f(i);
    for (int k = 0; k < n; ++k)
      if (q(i, k) != 0.0) v += q(i, k) * x[static_cast<std::size_t>(k)];
    u.push_back(v);
  }
  return u;
}

Vec UField::value(const Vec& x) const {
  const JetVec u = eval(ad::constant_point(x));
  Vec out(dim());
  for (int i = 0; i < dim(); ++i) out(i) = u[static_cast<std::size_t>(i)].value();
  return out;
}

Mat UField::jacobian(const Vec& x) const {
  const int n = dim();
  const JetVec u = eval(ad::seed_axes(x, 0, static_cast<std::size_t>(n)));
  Mat J(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) J(i, j) = u[static_cast<std::size_t>(i)].grad(static_cast<std::size_t>(j));
  return J;
}

double UField::pde_residual(const Vec& x) const {
  const Mat J = jacobian(x);
  const int n = dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i != j) worst = std::max(worst, std::abs(J(i, j) + J(j, i)));
      worst = std::max(worst, std::abs(J(i, i) - J(j, j)));
    }
  return worst;
}

UField make_ufield(double lambda, const Vec& e, const Vec& f, const Mat& q) {
  const auto n = static_cast<int>(f.size());
  if (n < 1) throw ConfigurationError("u field needs a positive dimension");
  require_dim(e, n, "u field vector e");
  if (q.rows() != n || q.cols() != n) throw ConfigurationError("u field matrix q must be n x n");
  if ((q + q.transpose()).norm() > 1e-14 * std::max(1.0, q.norm()))
    throw ConfigurationError("u field matrix q must be antisymmetric");
  return {lambda, e, f, q};
}

UField example_ufield(double lambda, double t, const Vec& f) {
  const double tf = std::abs(t) * f.norm();
  if (tf == 0.0) throw ConfigurationError("example u field requires t f != 0");
  if (lambda * lambda + t * f.squaredNorm() == 0.0)
    throw ConfigurationError("example u field requires lambda^2 + t|f|^2 != 0");
  const auto n = static_cast<int>(f.size());
  return make_ufield(lambda, t * f, f, Mat::Zero(n, n));
}

FormPair conformal_pair_from_u(const UField& u, const ChartBox* chart) {
  const int n = u.dim();
  if (chart) {
    for (const Vec& x : chart->samples())
      if (u.value(x).norm() == 0.0) throw DomainError("u vanishes on the chart", to_std(x));
  }
  auto u_norm2 = [u](JetSpan x) {
    JetVec v = u.eval(x);
    Jet2 r = norm2(v);
    if (r.value() == 0.0) throw DomainError("u vanishes");
    return std::pair{std::move(v), r};
  };
  riemann::MetricField alpha(n, "u-conformal", [n, u_norm2](JetSpan x) {
    const Jet2 w = ad::reciprocal(u_norm2(x).second);
    JetVec c(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i * n + i)] = w;
    return c;
  });
  riemann::OneFormField beta(n, "u-conformal", [u_norm2](JetSpan x) {
    auto [v, r] = u_norm2(x);
    const Jet2 w = ad::reciprocal(r);
    for (Jet2& vi : v) vi *= w;
    return v;
  });
  return {alpha, beta};
}

FormPair deform(const riemann::MetricField& alpha, const riemann::OneFormField& beta, double m,
                const ChartBox* chart) {
  if (m == 1.0) throw ConfigurationError("deformation requires m != 1");
  if (alpha.dim() != beta.dim()) throw ConfigurationError("metric and 1-form dimensions differ");
  const int n = alpha.dim();
  auto b2_of = [alpha, beta](JetSpan x, const JetVec& a) {
    const Jet2 b2 = riemann::inverse_quadratic_form(a, beta.eval(x));
    if (!(b2.value() > 0.0)) throw DomainError("deformation undefined where b = 0");
    return b2;
  };
  if (chart) {
    const ad::ScalarField b2f = riemann::norm_squared_of(alpha, beta);
    for (const Vec& x : chart->samples())
      if (!(b2f.eval(ad::constant_point(x)).value() > 0.0))
        throw DomainError("deformation undefined where b = 0", to_std(x));
  }
  riemann::MetricField a_t(n, alpha.label() + "-deformed", [alpha, b2_of, m](JetSpan x) {
    JetVec a = alpha.eval(x);
    const Jet2 w = ad::pow(b2_of(x, a), m);
    for (Jet2& c : a) c *= w;
    return a;
  });
  riemann::OneFormField b_t(n, beta.label() + "-deformed", [alpha, beta, b2_of, m](JetSpan x) {
    const Jet2 w = ad::pow(b2_of(x, alpha.eval(x)), 0.5 * (m - 1.0));
    JetVec b = beta.eval(x);
    for (Jet2& c : b) c *= w;
    return b;
  });
  return {a_t, b_t};
}

namespace {

Jet2 space_form_weight(double mu, JetSpan x) {
  const Jet2 w = 1.0 + mu * norm2(x);
  if (!(w.value() > 0.0)) throw DomainError("space form requires 1 + mu|x|^2 > 0");
  return w;
}

}  // namespace

riemann::MetricField space_form(int n, double mu) {
  return riemann::MetricField(n, "space-form", [n, mu](JetSpan x) {
    const Jet2 w = space_form_weight(mu, x);
    const Jet2 inv2 = ad::reciprocal(w * w);
    JetVec c(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet2 v = -mu * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
        if (i == j) v += w;
        c[static_cast<std::size_t>(i * n + j)] = v * inv2;
      }
    return c;
  });
}

riemann::OneFormField conformal_form_on_space_form(double mu, double k, const Vec& e) {
  const auto n = static_cast<int>(e.size());
  return riemann::OneFormField(n, "space-form-conformal", [mu, k, e, n](JetSpan x) {
    const Jet2 w = space_form_weight(mu, x);
    const Jet2 ex = dot(x, e);
    const Jet2 scale = ad::pow(w, -1.5);
    JetVec b;
    for (int i = 0; i < n; ++i) {
      const Jet2& xi = x[static_cast<std::size_t>(i)];
      b.push_back((k * xi + w * e(i) - mu * ex * xi) * scale);
    }
    return b;
  });
}

double space_form_b2_closed(double mu, double k, const Vec& e, const Vec& x) {
  const double w = 1.0 + mu * x.squaredNorm();
  if (!(w > 0.0)) throw DomainError("space form requires 1 + mu|x|^2 > 0", to_std(x));
  const double ex = e.dot(x);
  return e.squaredNorm() + (k * k * x.squaredNorm() + 2.0 * k * ex - mu * ex * ex) / w;
}

double space_form_b2_numeric(double mu, double k, const Vec& e, const Vec& x) {
  const int n = static_cast<int>(e.size());
  const Mat a = space_form(n, mu).value(x);
  const Vec b = conformal_form_on_space_form(mu, k, e).value(x);
  return b.dot(riemann::spd_inverse(a) * b);
}

bool space_form_unit_length(double mu, double k, const Vec& e, const Vec& x, double tol) {
  return std::abs(space_form_b2_numeric(mu, k, e, x) - 1.0) <= tol;
}

EtaProfile EtaProfile::constant(double v) {
  if (!(v > 0.0)) throw ConfigurationError("constant eta must be positive");
  return {"constant", true, [v](JetSpan) { return Jet2(v); }, [v](const Vec&) { return v; },
          [](const Vec&) { return 0.0; }, [](const Vec&) { return 0.0; }};
}

EtaProfile EtaProfile::affine_x1(double a0, double a1) {
  return {"affine_x1", true, [a0, a1](JetSpan x) { return a0 + a1 * x[0]; },
          [a0, a1](const Vec& x) { return a0 + a1 * x(0); }, [a1](const Vec&) { return a1; },
          [](const Vec&) { return 0.0; }};
}

EtaProfile EtaProfile::one_plus_square() {
  return {"one_plus_square", false, [](JetSpan x) { return 1.0 + norm2(x); },
          [](const Vec& x) { return 1.0 + x.squaredNorm(); }, [](const Vec& x) { return 2.0 * x(0); },
          [](const Vec&) { return 2.0; }};
}

EtaProfile EtaProfile::exp_x1(double rate) {
  return {"exp_x1", true, [rate](JetSpan x) { return ad::exp(rate * x[0]); },
          [rate](const Vec& x) { return std::exp(rate * x(0)); },
          [rate](const Vec& x) { return rate * std::exp(rate * x(0)); },
          [rate](const Vec& x) { return rate * rate * std::exp(rate * x(0)); }};
}

FormPair flat_base(int n) {
  Vec e1 = Vec::Zero(n);
  e1(0) = 1.0;
  return {riemann::euclidean(n), riemann::constant_form(e1)};
}

alphabeta::AlphaBetaMetric local_structure_metric(double c, double m, const EtaProfile& eta, const FormPair& base,
                                                  const ChartBox* chart, std::string label) {
  if (m == 0.0 || m == 1.0 || m == -1.0) throw ConfigurationError("local structure requires m != 0, 1, -1");
  if (c != 0.0 && !eta.x1_only) throw ConfigurationError("local structure with c != 0 requires eta = eta(x^1)");
  const int n = base.alpha.dim();
  if (chart) {
    for (const Vec& x : chart->samples())
      if (!(eta.value(x) > 0.0)) throw DomainError("eta must be positive on the chart", to_std(x));
  }
  auto eta_of = [f = eta.eval](JetSpan x) {
    Jet2 v = f(x);
    if (!(v.value() > 0.0)) throw DomainError("eta must be positive");
    return v;
  };
  const double p = 2.0 * m / (m - 1.0);
  riemann::MetricField alpha(n, base.alpha.label() + "-lifted", [a = base.alpha, eta_of, p](JetSpan x) {
    JetVec c = a.eval(x);
    const Jet2 w = ad::pow(eta_of(x), p);
    for (Jet2& v : c) v *= w;
    return c;
  });
  riemann::OneFormField beta(n, base.beta.label() + "-lifted", [b = base.beta, eta_of](JetSpan x) {
    JetVec c = b.eval(x);
    const Jet2 w = eta_of(x);
    for (Jet2& v : c) v *= w;
    return c;
  });
  alphabeta::PhiFamily phi =
      c == 0.0 ? alphabeta::PhiFamily::m_kropina(m) : alphabeta::PhiFamily::power_series(c, m, {0.0, 0.0, 0.0, 0.0});
  phi.validate();
  if (label.empty()) label = "local-structure(" + eta.name + ")";
  return {alpha, beta, phi, std::move(label)};
}

double planted_tau(const EtaProfile& eta, const FormPair& base, double m, const Vec& x) {
  const int n = base.alpha.dim();
  const JetVec xs = ad::seed_axes(x, 0, static_cast<std::size_t>(n));
  const Jet2 h = eta.eval(xs);
  Vec grad(n);
  for (int i = 0; i < n; ++i) grad(i) = h.grad(static_cast<std::size_t>(i));
  const Vec b_up = riemann::spd_inverse(base.alpha.value(x)) * base.beta.value(x);
  return b_up.dot(grad) / (2.0 * (m - 1.0) * h.value() * h.value());
}

namespace {

double case2_metric(double c, double m, double eta, const Vec& y) {
  return c * eta * y(0) + std::pow(y(0), m) * std::pow(y.norm(), 1.0 - m);
}

}  // namespace

double case2_projective_factor(double c, double m, const EtaProfile& eta, const Vec& x, const Vec& y) {
  const double F = case2_metric(c, m, eta.value(x), y);
  return c * eta.d1(x) * y(0) * y(0) / (2.0 * F);
}

double case2_flag_curvature(double c, double m, const EtaProfile& eta, const Vec& x, const Vec& y) {
  const double F = case2_metric(c, m, eta.value(x), y);
  const double e1 = eta.d1(x);
  return c * std::pow(y(0), 3) / (2.0 * F * F * F) * (3.0 * c * e1 * e1 * y(0) / (2.0 * F) - eta.d11(x));
}

riemann::OneFormField integrable_form(const Vec& p, const Vec& q, const Mat& S) {
  const auto n = static_cast<int>(q.size());
  require_dim(p, n, "integrable form vector p");
  if (S.rows() != n || S.cols() != n) throw ConfigurationError("integrable form matrix S must be n x n");
  if ((S - S.transpose()).norm() > 1e-14 * std::max(1.0, S.norm()))
    throw ConfigurationError("integrable form matrix S must be symmetric");
  return riemann::OneFormField(n, "integrable", [p, q, S, n](JetSpan x) {
    const Jet2 h = ad::exp(dot(x, p));
    JetVec b;
    for (int i = 0; i < n; ++i) {
      Jet2 g(q(i));
      for (int j = 0; j < n; ++j)
        if (S(i, j) != 0.0) g += S(i, j) * x[static_cast<std::size_t>(j)];
      b.push_back(h * g);
    }
    return b;
  });
}

alphabeta::AlphaBetaMetric example_metric(double lambda, double t, const Vec& f, double m, const EtaProfile& eta,
                                          const ChartBox* chart) {
  const UField u = example_ufield(lambda, t, f);
  return local_structure_metric(0.0, m, eta, conformal_pair_from_u(u, chart), chart, "conformal-killing-example");
}

}  // namespace finslab::constructions
