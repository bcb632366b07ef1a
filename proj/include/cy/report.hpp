// Run configuration, report documents for the command-line front end and their renderers.
#pragma once

#include "cy/invariants.hpp"

#include "json.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cy {

using json = nlohmann::ordered_json;

struct ConfigError : std::invalid_argument {
  std::size_t line, column;  // 1-based; line 0 for command-line values
  ConfigError(const std::string& msg, std::size_t l, std::size_t c)
      : std::invalid_argument(msg), line(l), column(c) {}
};

enum class OutputFormat { Markdown, Csv, Json };

// A setting value with the position of its first character, line 0 for command-line values.
struct Located {
  std::string text;
  std::size_t line = 0, column = 1;
};

struct RunConfig {
  FamilyTag family = FamilyTag::D4;
  std::optional<Located> u1, u2, u3;  // torsion parameters in the value syntax, e.g. "(tau+1)/2"
  bool non_isogenous = true;
  Located subgroup;  // generators in the map syntax separated by ';'
  bool all_subgroups = false;
  std::optional<std::size_t> order;      // keep subgroups of exactly this order
  std::optional<std::size_t> max_order;  // enumeration bound with all_subgroups
  OutputFormat format = OutputFormat::Markdown;
  long grid = 16;
  bool oracle = false;
};

// Flat "key = value" lines, '#' starts a comment.  Keys: family, u1, u2, u3,
// non_isogenous, subgroup, all_subgroups, order, max_order, format, grid, oracle.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);
// Applies one setting; line and column locate the value in error messages.
void apply_setting(RunConfig& c, const std::string& key, const std::string& value, std::size_t line = 0,
                   std::size_t column = 1);

FamilySetup build_family(const RunConfig& c);
// Subgroup of Aut(X) generated by the classes of the configured generators.
AutSubgroup configured_subgroup(const FamilySetup& f, const AutGroupDescription& aut, const RunConfig& c);

// Documents: {"command", "family", "columns": [{"key", "header"}], "rows": [...], "notes": [...]}.
json cmd_fixtable(const RunConfig& c);
json cmd_quotients(const RunConfig& c);
json cmd_auts(const RunConfig& c);
json cmd_pi1(const RunConfig& c);
// Rows {"check", "ok", "detail"}; "ok" at the top level is the conjunction.
json cmd_selfcheck(const RunConfig& c);

json pi1_json(const Pi1Descriptor& d);

std::string render(const json& doc, OutputFormat format);
std::string format_name(OutputFormat f);

}  // namespace cy
