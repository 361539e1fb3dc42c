#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "finslab_cli/config.hpp"

namespace finslab::cli {

inline constexpr const char* kCommands[] = {"spray",  "check-douglas", "check-projflat", "check-condition",
                                            "deform", "example",       "curvature",      "report"};

struct CommandResult {
  std::string command;
  classify::Verdict verdict = classify::Verdict::Inconclusive;
  std::map<std::string, double> residuals;
  std::map<std::string, double> fitted;
  /// Free-form lines printed under the human table.
  std::vector<std::string> notes;
  std::size_t probe_count = 0;
  std::uint64_t probe_seed = 0;
};

struct CommandOptions {
  /// Condition tag for check-condition.
  std::string condition;
};

CommandResult run_command(const std::string& command, const MetricConfig& config, const CommandOptions& opts = {});

/// Fixed-width table, residuals with 6 significant digits.
std::string render_table(const CommandResult& result, const MetricConfig& config);
/// One JSON object: version, config_hash, command, label, verdict,
/// residuals and fitted values as 15-significant-digit strings, probes,
/// tolerances.
std::string render_machine(const CommandResult& result, const MetricConfig& config);

/// Exit codes: 0 yes, 1 no, 2 inconclusive, 3 usage or configuration error,
/// 4 domain, geometry or precondition error.
int exit_code(classify::Verdict v);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

const char* version();

}  // namespace finslab::cli
