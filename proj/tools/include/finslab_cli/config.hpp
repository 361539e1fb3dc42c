#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finslab/classify.hpp"
#include "finslab/constructions.hpp"

namespace finslab::cli {

/// A builtin field: name plus numeric parameters. Scalars are stored as
/// one-element lists and matrices row-major.
struct FieldSpec {
  std::string builtin;
  std::map<std::string, std::vector<double>> params;

  bool operator==(const FieldSpec&) const = default;
};

struct MetricSpec {
  std::string family = "m_kropina";
  double c = 0.0;
  double m = 2.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k = 0.0;
  std::array<double, 4> series{};

  bool operator==(const MetricSpec&) const = default;
};

struct ProbePolicySpec {
  std::uint64_t count = 0;
  std::uint64_t seed = 20130601;
  double singular_margin = 0.05;

  bool operator==(const ProbePolicySpec&) const = default;
};

struct TolerancesSpec {
  double douglas = 1e-8;
  double hamel = 1e-8;
  double condition = 1e-8;
  double spray = 1e-6;

  bool operator==(const TolerancesSpec&) const = default;
};

/// Declarative description of one metric and how to probe it. When `eta`
/// is present, alpha and beta describe the base pair (alpha~, beta~) and the
/// metric is the local-structure lift c eta beta~ + beta~^m alpha~^(1-m).
struct MetricConfig {
  std::string label;
  int dimension = 3;
  MetricSpec metric;
  FieldSpec alpha;
  FieldSpec beta;
  std::optional<FieldSpec> eta;
  std::vector<double> chart_lo, chart_hi;
  std::vector<double> point;
  std::vector<double> direction;
  ProbePolicySpec probe_policy;
  TolerancesSpec tolerances;

  bool operator==(const MetricConfig&) const = default;
};

/// Parses a JSON document. Syntax errors carry line and column, schema
/// errors the dotted field path; both raise ConfigurationError.
MetricConfig parse_config(const std::string& text);
MetricConfig load_config(const std::string& path);

/// Sorted-key JSON with every field present; parse_config(canonical_dump(c))
/// reproduces c exactly and dumps to the same bytes.
std::string canonical_dump(const MetricConfig& config);

/// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string config_hash(const MetricConfig& config);

std::vector<std::string> preset_names();
MetricConfig preset(const std::string& name);

/// Live objects built from a config.
struct BuiltMetric {
  alphabeta::AlphaBetaMetric metric;
  /// The pair alpha, beta of the config before any eta lift.
  constructions::FormPair base;
  std::optional<constructions::EtaProfile> eta;
  std::optional<constructions::UField> u;
  constructions::ChartBox chart;
  Vec point;
  Vec direction;
};

BuiltMetric build(const MetricConfig& config);

classify::ProbePolicy probe_policy(const MetricConfig& config);
classify::ClassifyTolerances tolerances(const MetricConfig& config);

}  // namespace finslab::cli
