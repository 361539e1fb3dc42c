#include "finslab_cli/config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "finslab/errors.hpp"

namespace finslab::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigurationError("config field '" + path + "': " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void check_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail(join(path, key), "unknown field");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) fail(path, "expected a number or a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

FieldSpec field_spec(const json& j, const std::string& path, const char* name_key) {
  check_object(j, path, {name_key, "params"});
  if (!j.contains(name_key)) fail(join(path, name_key), "missing");
  FieldSpec f;
  f.builtin = string(j.at(name_key), join(path, name_key));
  if (j.contains("params")) {
    const json& p = j.at("params");
    if (!p.is_object()) fail(join(path, "params"), "expected an object");
    for (const auto& [key, value] : p.items()) f.params[key] = numbers(value, join(join(path, "params"), key));
  }
  return f;
}

json field_json(const FieldSpec& f, const char* name_key) {
  json p = json::object();
  for (const auto& [key, value] : f.params) p[key] = value;
  return {{name_key, f.builtin}, {"params", p}};
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

/// Reads the parameter list `name`, requiring `size` entries.
std::vector<double> param(const FieldSpec& f, const std::string& path, const std::string& name, std::size_t size,
                          std::optional<double> fill = std::nullopt) {
  const auto it = f.params.find(name);
  if (it == f.params.end()) {
    if (fill) return std::vector<double>(size, *fill);
    fail(path + ".params." + name, "missing");
  }
  if (it->second.size() != size)
    fail(path + ".params." + name,
         "expected " + std::to_string(size) + " values, got " + std::to_string(it->second.size()));
  return it->second;
}

double scalar(const FieldSpec& f, const std::string& path, const std::string& name,
              std::optional<double> fill = std::nullopt) {
  return param(f, path, name, 1, fill)[0];
}

Mat to_mat(const std::vector<double>& v, int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = v[static_cast<std::size_t>(i * n + j)];
  return m;
}

constructions::UField u_field(const FieldSpec& f, const std::string& path, int n) {
  const auto sn = static_cast<std::size_t>(n);
  if (f.builtin == "example_u")
    return constructions::example_ufield(scalar(f, path, "lambda"), scalar(f, path, "t"),
                                         to_vec(param(f, path, "f", sn)));
  return constructions::make_ufield(scalar(f, path, "lambda"), to_vec(param(f, path, "e", sn)),
                                    to_vec(param(f, path, "f", sn)), to_mat(param(f, path, "q", sn * sn, 0.0), n));
}

bool is_u_builtin(const std::string& name) { return name == "u_conformal" || name == "example_u"; }

riemann::MetricField build_alpha(const FieldSpec& f, int n, const constructions::ChartBox& chart) {
  const std::string path = "alpha";
  const auto sn = static_cast<std::size_t>(n);
  if (f.builtin == "euclidean") return riemann::euclidean(n);
  if (f.builtin == "conformal_exp") return riemann::conformal_exp(to_vec(param(f, path, "sigma", sn)));
  if (f.builtin == "space_form") return constructions::space_form(n, scalar(f, path, "mu"));
  if (is_u_builtin(f.builtin)) return constructions::conformal_pair_from_u(u_field(f, path, n), &chart).alpha;
  fail(path + ".builtin", "unknown metric builtin '" + f.builtin + "'");
}

riemann::OneFormField build_beta(const FieldSpec& f, int n, const constructions::ChartBox& chart) {
  const std::string path = "beta";
  const auto sn = static_cast<std::size_t>(n);
  if (f.builtin == "constant") return riemann::constant_form(to_vec(param(f, path, "b", sn)));
  if (f.builtin == "affine")
    return riemann::affine_form(to_vec(param(f, path, "b0", sn)), to_mat(param(f, path, "jac", sn * sn), n));
  if (f.builtin == "quadratic") {
    // b_i = b0_i + J_ij x^j + H_ijk x^j x^k
    const Vec b0 = to_vec(param(f, path, "b0", sn));
    const Mat J = to_mat(param(f, path, "jac", sn * sn, 0.0), n);
    const std::vector<double> H = param(f, path, "hess", sn * sn * sn, 0.0);
    return riemann::OneFormField(n, "quadratic", [b0, J, H, n](ad::JetSpan x) {
      ad::JetVec b;
      for (int i = 0; i < n; ++i) {
        ad::Jet2 v(b0(i));
        for (int j = 0; j < n; ++j) {
          if (J(i, j) != 0.0) v += J(i, j) * x[static_cast<std::size_t>(j)];
          for (int k = 0; k < n; ++k) {
            const double h = H[static_cast<std::size_t>((i * n + j) * n + k)];
            if (h != 0.0) v += h * x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(k)];
          }
        }
        b.push_back(v);
      }
      return b;
    });
  }
  if (f.builtin == "integrable")
    return constructions::integrable_form(to_vec(param(f, path, "p", sn, 0.0)), to_vec(param(f, path, "q", sn)),
                                          to_mat(param(f, path, "hess", sn * sn, 0.0), n));
  if (f.builtin == "space_form_conformal")
    return constructions::conformal_form_on_space_form(scalar(f, path, "mu"), scalar(f, path, "k", 0.0),
                                                       to_vec(param(f, path, "e", sn)));
  if (is_u_builtin(f.builtin)) return constructions::conformal_pair_from_u(u_field(f, path, n), &chart).beta;
  fail(path + ".builtin", "unknown 1-form builtin '" + f.builtin + "'");
}

constructions::EtaProfile build_eta(const FieldSpec& f) {
  const std::string path = "eta";
  if (f.builtin == "constant") return constructions::EtaProfile::constant(scalar(f, path, "value", 1.0));
  if (f.builtin == "affine_x1")
    return constructions::EtaProfile::affine_x1(scalar(f, path, "a0", 0.0), scalar(f, path, "a1", 1.0));
  if (f.builtin == "one_plus_square") return constructions::EtaProfile::one_plus_square();
  if (f.builtin == "exp_x1") return constructions::EtaProfile::exp_x1(scalar(f, path, "rate", 1.0));
  fail(path + ".profile", "unknown eta profile '" + f.builtin + "'");
}

alphabeta::PhiFamily build_phi(const MetricSpec& s) {
  alphabeta::PhiVariant v;
  try {
    v = alphabeta::phi_variant_from_string(s.family);
  } catch (const Error&) {
    fail("metric.family", "unknown family '" + s.family + "'");
  }
  alphabeta::PhiFamily phi;
  switch (v) {
    case alphabeta::PhiVariant::PowerSeries: phi = alphabeta::PhiFamily::power_series(s.c, s.m, s.series); break;
    case alphabeta::PhiVariant::MKropina: phi = alphabeta::PhiFamily::m_kropina(s.m); break;
    case alphabeta::PhiVariant::KropinaPlus: phi = alphabeta::PhiFamily::kropina_plus(s.c); break;
    case alphabeta::PhiVariant::SqrtMixed: phi = alphabeta::PhiFamily::sqrt_mixed(s.k1, s.m, s.k2); break;
    case alphabeta::PhiVariant::SqrtPure: phi = alphabeta::PhiFamily::sqrt_pure(s.m, s.k); break;
  }
  phi.validate();
  return phi;
}

std::vector<double> unit(int n, int axis) {
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  v[static_cast<std::size_t>(axis)] = 1.0;
  return v;
}

}  // namespace

MetricConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigurationError(std::string("malformed config: ") + e.what());
  }
  check_object(j, "", {"label", "dimension", "metric", "alpha", "beta", "eta", "chart", "point", "direction",
                       "probe_policy", "tolerances"});
  MetricConfig c;
  if (j.contains("label")) c.label = string(j["label"], "label");
  if (!j.contains("dimension")) fail("dimension", "missing");
  if (!j["dimension"].is_number_integer()) fail("dimension", "expected an integer");
  c.dimension = j["dimension"].get<int>();
  if (c.dimension < 1 || c.dimension > 4) fail("dimension", "must lie in 1..4");
  const auto n = static_cast<std::size_t>(c.dimension);

  if (!j.contains("metric")) fail("metric", "missing");
  const json& m = j["metric"];
  check_object(m, "metric", {"family", "c", "m", "k1", "k2", "k", "series"});
  if (!m.contains("family")) fail("metric.family", "missing");
  c.metric.family = string(m["family"], "metric.family");
  if (m.contains("c")) c.metric.c = number(m["c"], "metric.c");
  if (m.contains("m")) c.metric.m = number(m["m"], "metric.m");
  if (m.contains("k1")) c.metric.k1 = number(m["k1"], "metric.k1");
  if (m.contains("k2")) c.metric.k2 = number(m["k2"], "metric.k2");
  if (m.contains("k")) c.metric.k = number(m["k"], "metric.k");
  if (m.contains("series")) {
    const std::vector<double> s = numbers(m["series"], "metric.series");
    if (s.size() != 4) fail("metric.series", "expected 4 values");
    std::copy(s.begin(), s.end(), c.metric.series.begin());
  }

  if (!j.contains("alpha")) fail("alpha", "missing");
  if (!j.contains("beta")) fail("beta", "missing");
  c.alpha = field_spec(j["alpha"], "alpha", "builtin");
  c.beta = field_spec(j["beta"], "beta", "builtin");
  if (j.contains("eta") && !j["eta"].is_null()) c.eta = field_spec(j["eta"], "eta", "profile");

  if (!j.contains("point")) fail("point", "missing");
  c.point = numbers(j["point"], "point");
  if (c.point.size() != n) fail("point", "expected " + std::to_string(n) + " values");
  if (j.contains("direction")) {
    c.direction = numbers(j["direction"], "direction");
    if (c.direction.size() != n) fail("direction", "expected " + std::to_string(n) + " values");
  } else {
    c.direction.assign(n, 1.0);
  }

  if (j.contains("chart")) {
    const json& ch = j["chart"];
    check_object(ch, "chart", {"lo", "hi"});
    if (!ch.contains("lo") || !ch.contains("hi")) fail("chart", "needs both lo and hi");
    c.chart_lo = numbers(ch["lo"], "chart.lo");
    c.chart_hi = numbers(ch["hi"], "chart.hi");
    if (c.chart_lo.size() != n) fail("chart.lo", "expected " + std::to_string(n) + " values");
    if (c.chart_hi.size() != n) fail("chart.hi", "expected " + std::to_string(n) + " values");
  } else {
    for (double x : c.point) {
      c.chart_lo.push_back(x - 0.1);
      c.chart_hi.push_back(x + 0.1);
    }
  }

  if (j.contains("probe_policy")) {
    const json& p = j["probe_policy"];
    check_object(p, "probe_policy", {"count", "seed", "singular_margin"});
    if (p.contains("count")) {
      if (!p["count"].is_number_unsigned()) fail("probe_policy.count", "expected a non-negative integer");
      c.probe_policy.count = p["count"].get<std::uint64_t>();
    }
    if (p.contains("seed")) {
      if (!p["seed"].is_number_unsigned()) fail("probe_policy.seed", "expected a non-negative integer");
      c.probe_policy.seed = p["seed"].get<std::uint64_t>();
    }
    if (p.contains("singular_margin"))
      c.probe_policy.singular_margin = number(p["singular_margin"], "probe_policy.singular_margin");
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    check_object(t, "tolerances", {"douglas", "hamel", "condition", "spray"});
    if (t.contains("douglas")) c.tolerances.douglas = number(t["douglas"], "tolerances.douglas");
    if (t.contains("hamel")) c.tolerances.hamel = number(t["hamel"], "tolerances.hamel");
    if (t.contains("condition")) c.tolerances.condition = number(t["condition"], "tolerances.condition");
    if (t.contains("spray")) c.tolerances.spray = number(t["spray"], "tolerances.spray");
  }
  return c;
}

MetricConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_dump(const MetricConfig& c) {
  json j;
  j["label"] = c.label;
  j["dimension"] = c.dimension;
  j["metric"] = {{"family", c.metric.family}, {"c", c.metric.c},   {"m", c.metric.m},          {"k1", c.metric.k1},
                 {"k2", c.metric.k2},         {"k", c.metric.k},   {"series", c.metric.series}};
  j["alpha"] = field_json(c.alpha, "builtin");
  j["beta"] = field_json(c.beta, "builtin");
  j["eta"] = c.eta ? field_json(*c.eta, "profile") : json(nullptr);
  j["chart"] = {{"lo", c.chart_lo}, {"hi", c.chart_hi}};
  j["point"] = c.point;
  j["direction"] = c.direction;
  j["probe_policy"] = {{"count", c.probe_policy.count},
                       {"seed", c.probe_policy.seed},
                       {"singular_margin", c.probe_policy.singular_margin}};
  j["tolerances"] = {{"douglas", c.tolerances.douglas},
                     {"hamel", c.tolerances.hamel},
                     {"condition", c.tolerances.condition},
                     {"spray", c.tolerances.spray}};
  return j.dump(2) + "\n";
}

std::string config_hash(const MetricConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_dump(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> preset_names() {
  return {"minkowski-trivial", "example-s7", "case2-eta-linear", "kropina-plus", "sqrt-pure",
          "sqrt-mixed",        "space-form", "negative-control"};
}

MetricConfig preset(const std::string& name) {
  MetricConfig c;
  c.label = name;
  c.dimension = 3;
  auto box = [&c](std::vector<double> lo, std::vector<double> hi) {
    c.chart_lo = std::move(lo);
    c.chart_hi = std::move(hi);
  };
  if (name == "minkowski-trivial") {
    c.metric = {.family = "m_kropina", .m = 2.0};
    c.alpha = {"euclidean", {}};
    c.beta = {"constant", {{"b", {0.5, 0.0, 0.0}}}};
    c.point = {0.2, 0.1, -0.1};
    box({-1, -1, -1}, {1, 1, 1});
  } else if (name == "example-s7") {
    c.metric = {.family = "m_kropina", .m = 2.0};
    const FieldSpec u{"example_u", {{"lambda", {1.0}}, {"t", {1.0}}, {"f", unit(3, 0)}}};
    c.alpha = u;
    c.beta = u;
    c.eta = FieldSpec{"one_plus_square", {}};
    c.point = {0.1, -0.2, 0.15};
    box({-0.3, -0.3, -0.3}, {0.3, 0.3, 0.3});
  } else if (name == "case2-eta-linear") {
    c.metric = {.family = "power_series", .c = 1.0, .m = 2.0};
    c.alpha = {"euclidean", {}};
    c.beta = {"constant", {{"b", unit(3, 0)}}};
    c.eta = FieldSpec{"affine_x1", {{"a0", {0.0}}, {"a1", {1.0}}}};
    c.point = {1.0, 0.0, 0.0};
    c.direction = {1.0, 1.0, 0.0};
    box({0.5, -0.5, -0.5}, {1.5, 0.5, 0.5});
  } else if (name == "kropina-plus") {
    c.metric = {.family = "kropina_plus", .c = 1.0, .m = -1.0};
    c.alpha = {"conformal_exp", {{"sigma", {0.3, -0.1, 0.2}}}};
    c.beta = {"integrable",
              {{"p", {0.2, -0.1, 0.3}}, {"q", {1.0, 0.5, -0.2}}, {"hess", {0.5, 0.1, 0, 0.1, -0.3, 0.2, 0, 0.2, 0.4}}}};
    c.point = {0.3, -0.2, 0.5};
    box({0.1, -0.4, 0.3}, {0.5, 0.0, 0.7});
  } else if (name == "sqrt-pure") {
    c.metric = {.family = "sqrt_pure", .m = 2.0, .k = 1.0};
    c.alpha = {"conformal_exp", {{"sigma", {0.2, 0.1, -0.3}}}};
    c.beta = {"affine", {{"b0", {1.0, 0.3, -0.2}}, {"jac", {0.1, 0.2, 0, -0.1, 0.3, 0.1, 0, 0.2, -0.2}}}};
    c.point = {0.2, -0.1, 0.3};
  } else if (name == "sqrt-mixed") {
    c.metric = {.family = "sqrt_mixed", .m = 3.0, .k1 = 0.5, .k2 = 0.4};
    c.alpha = {"space_form", {{"mu", {0.5}}}};
    c.beta = {"affine", {{"b0", {1.0, -0.4, 0.3}}, {"jac", {0.2, 0, 0.1, 0.1, -0.1, 0, 0, 0.3, 0.2}}}};
    c.point = {0.1, 0.2, -0.2};
  } else if (name == "space-form") {
    c.metric = {.family = "m_kropina", .m = 2.0};
    c.alpha = {"space_form", {{"mu", {1.0}}}};
    c.beta = {"space_form_conformal", {{"mu", {1.0}}, {"k", {0.0}}, {"e", unit(3, 0)}}};
    c.point = unit(3, 0);
  } else if (name == "negative-control") {
    c.metric = {.family = "m_kropina", .m = 2.0};
    c.alpha = {"conformal_exp", {{"sigma", {0.3, -0.1, 0.2}}}};
    // b = (1 + x2 x3, x3 + x1^2, 0.5 + x1 x2)
    std::vector<double> hess(27, 0.0);
    hess[(0 * 3 + 1) * 3 + 2] = 1.0;
    hess[(1 * 3 + 0) * 3 + 0] = 1.0;
    hess[(2 * 3 + 0) * 3 + 1] = 1.0;
    c.beta = {"quadratic", {{"b0", {1.0, 0.0, 0.5}}, {"jac", {0, 0, 0, 0, 0, 1, 0, 0, 0}}, {"hess", hess}}};
    c.point = {0.3, -0.2, 0.5};
  } else {
    std::string known;
    for (const auto& p : preset_names()) known += (known.empty() ? "" : ", ") + p;
    throw ConfigurationError("unknown preset '" + name + "' (known: " + known + ")");
  }
  if (c.direction.empty()) c.direction.assign(3, 1.0);
  if (c.chart_lo.empty()) {
    for (double x : c.point) {
      c.chart_lo.push_back(x - 0.1);
      c.chart_hi.push_back(x + 0.1);
    }
  }
  return c;
}

BuiltMetric build(const MetricConfig& c) {
  const int n = c.dimension;
  BuiltMetric b;
  b.chart = constructions::make_chart(to_vec(c.chart_lo), to_vec(c.chart_hi));
  b.point = to_vec(c.point);
  b.direction = to_vec(c.direction);
  if (!b.chart.contains(b.point)) fail("point", "lies outside the chart");
  if (b.direction.norm() == 0.0) fail("direction", "must be non-zero");
  const alphabeta::PhiFamily phi = build_phi(c.metric);
  b.base = {build_alpha(c.alpha, n, b.chart), build_beta(c.beta, n, b.chart)};
  if (is_u_builtin(c.alpha.builtin)) b.u = u_field(c.alpha, "alpha", n);
  const std::string label = c.label.empty() ? "unnamed" : c.label;
  if (c.eta) {
    if (phi.variant != alphabeta::PhiVariant::PowerSeries && phi.variant != alphabeta::PhiVariant::MKropina)
      fail("metric.family", "an eta lift needs power_series or m_kropina");
    b.eta = build_eta(*c.eta);
    b.metric = constructions::local_structure_metric(phi.linear_coefficient(), phi.m, *b.eta, b.base, &b.chart, label);
  } else {
    b.metric = {b.base.alpha, b.base.beta, phi, label};
  }
  return b;
}

classify::ProbePolicy probe_policy(const MetricConfig& c) {
  classify::ProbePolicy p;
  p.count = static_cast<std::size_t>(c.probe_policy.count);
  p.seed = c.probe_policy.seed;
  p.singular_margin = c.probe_policy.singular_margin;
  return p;
}

classify::ClassifyTolerances tolerances(const MetricConfig& c) {
  return {c.tolerances.douglas, c.tolerances.hamel, c.tolerances.condition, c.tolerances.spray};
}

}  // namespace finslab::cli
