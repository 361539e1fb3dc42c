#include "finslab_cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "finslab/conditions.hpp"
#include "finslab/errors.hpp"

#ifndef FINSLAB_VERSION
#define FINSLAB_VERSION "0.0.0"
#endif

namespace finslab::cli {

namespace {

using classify::Verdict;

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string vec_str(const Vec& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt("%.6e", v(i));
  return s + ")";
}

classify::ProbeSet probes_for(const BuiltMetric& b, const MetricConfig& c, CommandResult& r) {
  classify::ProbeSet P = classify::make_probe_set(b.metric, b.point, probe_policy(c));
  r.probe_count = P.count();
  r.probe_seed = P.seed;
  return P;
}

/// Verdict for a claim that a quantity is small (expect_small) or large.
Verdict claim(double residual, double tol, bool expect_small) {
  const Verdict v = classify::verdict_for(residual, tol);
  if (expect_small || v == Verdict::Inconclusive) return v;
  return v == Verdict::Yes ? Verdict::No : Verdict::Yes;
}

CommandResult spray(const BuiltMetric& b, const MetricConfig& c) {
  CommandResult r;
  const classify::ProbeSet P = probes_for(b, c, r);
  r.residuals["route_discrepancy"] = classify::spray_route_discrepancy(b.metric, P);
  const alphabeta::PointData pd = alphabeta::point_data(b.metric, b.point);
  double homogeneity = 0.0;
  for (const Vec& y : P.directions) {
    const Vec g1 = alphabeta::spray_full(b.metric, pd, y);
    const Vec g3 = alphabeta::spray_full(b.metric, pd, 3.0 * y);
    homogeneity = std::max(homogeneity, (g3 - 9.0 * g1).norm() / std::max(9.0 * g1.norm(), 1e-300));
  }
  r.residuals["homogeneity"] = homogeneity;
  r.verdict = classify::verdict_for(r.residuals["route_discrepancy"], c.tolerances.spray);
  try {
    r.notes.push_back("G_closed(y)        = " + vec_str(alphabeta::spray_full(b.metric, pd, b.direction)));
    r.notes.push_back("G_definitional(y)  = " + vec_str(alphabeta::spray_generic(b.metric, b.point, b.direction)));
  } catch (const DomainError& e) {
    r.notes.push_back(std::string("spray at the configured direction: ") + e.what());
  }
  return r;
}

CommandResult check_douglas(const BuiltMetric& b, const MetricConfig& c) {
  CommandResult r;
  const classify::ProbeSet P = probes_for(b, c, r);
  r.residuals["douglas"] = classify::douglas_residual(b.metric, P);
  r.residuals["douglas_definitional"] = classify::douglas_residual(b.metric, P, classify::SprayRoute::Definitional);
  r.residuals["douglas_direct"] = classify::douglas_residual_direct(b.metric, P);
  r.verdict = classify::verdict_for(r.residuals["douglas"], c.tolerances.douglas);
  return r;
}

CommandResult check_projflat(const BuiltMetric& b, const MetricConfig& c) {
  CommandResult r;
  const classify::ProbeSet P = probes_for(b, c, r);
  r.residuals["hamel"] = classify::hamel_residual(b.metric, P);
  r.residuals["hamel_direct"] = classify::hamel_residual_direct(b.metric, P);
  r.verdict = classify::verdict_for(r.residuals["hamel"], c.tolerances.hamel);
  return r;
}

CommandResult check_condition(const BuiltMetric& b, const MetricConfig& c, const CommandOptions& opts) {
  if (opts.condition.empty()) throw ConfigurationError("check-condition needs --condition TAG");
  CommandResult r;
  const classify::ConditionResult cr =
      classify::check_condition(b.metric, classify::condition_from_string(opts.condition), b.point);
  r.residuals = cr.components;
  r.residuals["residual"] = cr.residual;
  r.fitted = cr.fitted;
  r.verdict = classify::verdict_for(cr.residual, c.tolerances.condition);
  r.notes.push_back("condition " + opts.condition);
  return r;
}

CommandResult deform(const BuiltMetric& b, const MetricConfig& c) {
  CommandResult r;
  const double m = b.metric.phi.exponent();
  const constructions::FormPair D = constructions::deform(b.metric.alpha, b.metric.beta, m, &b.chart);
  const ad::ScalarField b2 = riemann::norm_squared_of(D.alpha, D.beta);
  double unit = 0.0;
  for (const Vec& x : b.chart.samples())
    unit = std::max(unit, std::abs(std::sqrt(b2.eval(ad::constant_point(x)).value()) - 1.0));
  const double norm_at_point = std::sqrt(b2.eval(ad::constant_point(b.point)).value());
  const riemann::CovariantPackage pkg = riemann::covariant_package(D.alpha, D.beta, b.point);
  r.residuals["unit_length"] = unit;
  r.residuals["r_tilde"] = pkg.r.norm();
  r.residuals["s_tilde"] = pkg.s.norm();

  // beta^m alpha^(1-m) before and after
  const alphabeta::PhiFamily kropina = alphabeta::PhiFamily::m_kropina(m);
  const alphabeta::AlphaBetaMetric before{b.metric.alpha, b.metric.beta, kropina, b.metric.label};
  const alphabeta::AlphaBetaMetric after{D.alpha, D.beta, kropina, b.metric.label + "-deformed"};
  const classify::ProbeSet P = probes_for(b, c, r);
  double invariance = 0.0;
  for (const Vec& y : P.directions) {
    const double F0 = alphabeta::metric_value(before, b.point, y);
    invariance = std::max(invariance, std::abs(F0 - alphabeta::metric_value(after, b.point, y)) / std::abs(F0));
  }
  r.residuals["invariance"] = invariance;
  r.fitted["m"] = m;
  r.fitted["norm_beta_tilde"] = norm_at_point;
  r.notes.push_back("‖β̃‖ = " + fmt("%.12f", norm_at_point));
  r.verdict = classify::verdict_for(unit, c.tolerances.condition);
  return r;
}

CommandResult example(const BuiltMetric& b, const MetricConfig& c) {
  if (!b.u) throw ConfigurationError("example needs alpha.builtin u_conformal or example_u");
  CommandResult r;
  double pde = 0.0;
  for (const Vec& x : b.chart.samples()) pde = std::max(pde, b.u->pde_residual(x));
  r.residuals["u_pde"] = pde;
  const riemann::CovariantPackage base = riemann::covariant_package(b.base.alpha, b.base.beta, b.point);
  r.residuals["base_killing"] = base.r.norm();
  r.residuals["base_closed"] = base.s.norm();
  r.residuals["base_unit_length"] = std::abs(base.b2 - 1.0);
  const classify::ProbeSet P = probes_for(b, c, r);
  r.residuals["douglas"] = classify::douglas_residual(b.metric, P);
  r.residuals["hamel"] = classify::hamel_residual(b.metric, P);
  const Verdict douglas = claim(r.residuals["douglas"], c.tolerances.douglas, true);
  const Verdict not_flat = claim(r.residuals["hamel"], c.tolerances.hamel, false);
  if (douglas == Verdict::Yes && not_flat == Verdict::Yes)
    r.verdict = Verdict::Yes;
  else if (douglas == Verdict::No || not_flat == Verdict::No)
    r.verdict = Verdict::No;
  r.notes.push_back("metric F = beta^m alpha^(1-m), m = " + fmt("%g", b.metric.phi.exponent()));
  r.notes.push_back("claim: Douglas " + classify::to_string(douglas) + ", not projectively flat " +
                    classify::to_string(not_flat));
  return r;
}

bool is_flat_base(const MetricConfig& c) {
  if (c.alpha.builtin != "euclidean" || c.beta.builtin != "constant") return false;
  const auto it = c.beta.params.find("b");
  if (it == c.beta.params.end() || it->second.empty() || it->second[0] != 1.0) return false;
  for (std::size_t i = 1; i < it->second.size(); ++i)
    if (it->second[i] != 0.0) return false;
  return true;
}

CommandResult curvature(const BuiltMetric& b, const MetricConfig& c) {
  CommandResult r;
  const classify::ProbeSet P = probes_for(b, c, r);
  r.residuals["hamel"] = classify::hamel_residual(b.metric, P);
  r.verdict = classify::verdict_for(r.residuals["hamel"], c.tolerances.hamel);
  if (r.verdict == Verdict::No)
    throw PreconditionError("curvature needs a projectively flat metric; Hamel residual " +
                            fmt("%.6e", r.residuals["hamel"]));
  const double Pf = classify::projective_factor(b.metric, b.point, b.direction);
  const double K = classify::flag_curvature_projective(b.metric, b.point, b.direction, c.tolerances.hamel);
  r.fitted["P"] = Pf;
  r.fitted["K"] = K;
  if (b.eta && is_flat_base(c)) {
    const double cc = b.metric.phi.linear_coefficient(), m = b.metric.phi.exponent();
    const double Pc = constructions::case2_projective_factor(cc, m, *b.eta, b.point, b.direction);
    const double Kc = constructions::case2_flag_curvature(cc, m, *b.eta, b.point, b.direction);
    r.fitted["P_closed_form"] = Pc;
    r.fitted["K_closed_form"] = Kc;
    r.residuals["P_vs_closed_form"] = std::abs(Pf - Pc);
    r.residuals["K_vs_closed_form"] = std::abs(K - Kc);
  }
  return r;
}

CommandResult report(const BuiltMetric& b, const MetricConfig& c) {
  CommandResult r;
  const classify::ProbeSet P = probes_for(b, c, r);
  const classify::ClassificationReport rep = classify::classify_metric(b.metric, P, tolerances(c));
  r.residuals = rep.residuals;
  r.residuals["route_discrepancy"] = classify::spray_route_discrepancy(b.metric, P);
  r.verdict = rep.is_douglas;
  r.notes.push_back("douglas: " + classify::to_string(rep.is_douglas) +
                    ", projectively flat: " + classify::to_string(rep.is_proj_flat));
  const riemann::CovariantPackage pkg = riemann::covariant_package(b.metric.alpha, b.metric.beta, b.point);
  r.fitted["b2"] = pkg.b2;
  for (classify::ConditionTag t : classify::all_conditions()) {
    const std::string tag = classify::to_string(t);
    try {
      const classify::ConditionResult cr = classify::check_condition(b.metric, t, b.point);
      r.residuals["condition." + tag] = cr.residual;
      for (const auto& [k, v] : cr.fitted) r.fitted[tag + "." + k] = v;
    } catch (const Error& e) {
      r.notes.push_back("condition " + tag + " skipped: " + e.what());
    }
  }
  return r;
}

}  // namespace

const char* version() { return FINSLAB_VERSION; }

CommandResult run_command(const std::string& command, const MetricConfig& config, const CommandOptions& opts) {
  const BuiltMetric b = build(config);
  CommandResult r;
  if (command == "spray")
    r = spray(b, config);
  else if (command == "check-douglas")
    r = check_douglas(b, config);
  else if (command == "check-projflat")
    r = check_projflat(b, config);
  else if (command == "check-condition")
    r = check_condition(b, config, opts);
  else if (command == "deform")
    r = deform(b, config);
  else if (command == "example")
    r = example(b, config);
  else if (command == "curvature")
    r = curvature(b, config);
  else if (command == "report")
    r = report(b, config);
  else
    throw ConfigurationError("unknown command '" + command + "'");
  r.command = command;
  return r;
}

std::string render_table(const CommandResult& r, const MetricConfig& c) {
  std::ostringstream os;
  os << "finslab " << version() << "  " << r.command << "  label=" << c.label << "  probes=" << r.probe_count
     << "  seed=" << r.probe_seed << "\n";
  auto row = [&os](const std::string& key, double v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "  %-28s %14.5e\n", key.c_str(), v);
    os << buf;
  };
  os << "residuals\n";
  for (const auto& [k, v] : r.residuals) row(k, v);
  if (!r.fitted.empty()) {
    os << "fitted\n";
    for (const auto& [k, v] : r.fitted) row(k, v);
  }
  for (const auto& n : r.notes) os << n << "\n";
  os << "verdict: " << classify::to_string(r.verdict) << "\n";
  return os.str();
}

std::string render_machine(const CommandResult& r, const MetricConfig& c) {
  using nlohmann::json;
  json j;
  j["version"] = version();
  j["config_hash"] = config_hash(c);
  j["command"] = r.command;
  j["label"] = c.label;
  j["verdict"] = classify::to_string(r.verdict);
  json res = json::object(), fit = json::object();
  for (const auto& [k, v] : r.residuals) res[k] = fmt("%.15g", v);
  for (const auto& [k, v] : r.fitted) fit[k] = fmt("%.15g", v);
  j["residuals"] = res;
  j["fitted"] = fit;
  j["probes"] = {{"count", r.probe_count}, {"seed", r.probe_seed}};
  j["tolerances"] = {{"douglas", c.tolerances.douglas},
                     {"hamel", c.tolerances.hamel},
                     {"condition", c.tolerances.condition},
                     {"spray", c.tolerances.spray}};
  return j.dump(2) + "\n";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Yes: return 0;
    case Verdict::No: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 2;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"finslab: spray, Douglas and projective-flatness checks for (alpha, beta)-metrics"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, preset_name, out_path, format = "table";
  CommandOptions opts;
  std::uint64_t probes = 0, seed = 0;
  double tol_douglas = 0.0, tol_hamel = 0.0;
  auto* source = app.add_option_group("source");
  source->add_option("--config", config_path, "JSON metric configuration")->check(CLI::ExistingFile);
  source->add_option("--preset", preset_name, "built-in configuration name");
  source->require_option(1);
  auto* o_probes = app.add_option("--probes", probes, "probe count (0 keeps the default)");
  auto* o_seed = app.add_option("--seed", seed, "probe seed");
  auto* o_td = app.add_option("--tol-douglas", tol_douglas, "Douglas tolerance")->check(CLI::PositiveNumber);
  auto* o_th = app.add_option("--tol-hamel", tol_hamel, "Hamel tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "write the machine report here");
  app.add_option("--format", format, "stdout format")->check(CLI::IsMember({"table", "machine"}));

  for (const char* name : kCommands) {
    auto* sub = app.add_subcommand(name);
    if (std::string(name) == "check-condition")
      sub->add_option("--condition", opts.condition, "condition tag, e.g. cr69")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 3;
  }

  MetricConfig config;
  std::string command = app.get_subcommands().front()->get_name();
  try {
    config = preset_name.empty() ? load_config(config_path) : preset(preset_name);
    if (o_probes->count()) config.probe_policy.count = probes;
    if (o_seed->count()) config.probe_policy.seed = seed;
    if (o_td->count()) config.tolerances.douglas = tol_douglas;
    if (o_th->count()) config.tolerances.hamel = tol_hamel;
    const CommandResult r = run_command(command, config, opts);
    const std::string machine = render_machine(r, config);
    out << (format == "machine" ? machine : render_table(r, config));
    if (!out_path.empty()) {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw ConfigurationError("cannot write report '" + out_path + "'");
      f << machine;
    }
    return exit_code(r.verdict);
  } catch (const ConfigurationError& e) {
    err << "usage error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error [" << (config.label.empty() ? "unnamed" : config.label) << "]: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace finslab::cli
