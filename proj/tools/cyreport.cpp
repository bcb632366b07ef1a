// Command-line front end: fixtable, quotients, auts, pi1, selfcheck.
#include "cy/dsl.hpp"
#include "cy/report.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

enum Exit { ok = 0, usage = 1, consistency = 2 };

void report_config_error(const cy::ConfigError& e, const std::string& source) {
  if (e.line > 0)
    std::cerr << source << ":" << e.line << ":" << e.column << ": error: " << e.what() << "\n";
  else
    std::cerr << "error: " << e.what() << " (column " << e.column << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed loci, quotients and fundamental groups of type-A threefolds"};
  app.require_subcommand(1);

  std::string config_file, family, format, subgroup, u1, u2, u3;
  bool all_subgroups = false, oracle = false, isogenous = false;
  std::size_t order = 0, max_order = 0;
  long grid = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_file, "key = value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--family", family, "d4 or z2z2")->check(CLI::IsMember({"d4", "z2z2"}));
    sub->add_option("--format", format, "md, csv or json")->check(CLI::IsMember({"md", "csv", "json"}));
    sub->add_option("--subgroup", subgroup, "generators of Upsilon, e.g. \"(z1, z2, z3 + tau'/2)\"");
    sub->add_flag("--all-subgroups", all_subgroups, "enumerate subgroups of Aut(X)");
    sub->add_option("--order", order, "keep subgroups of exactly this order")->check(CLI::PositiveNumber);
    sub->add_option("--max-order", max_order, "largest subgroup order enumerated")->check(CLI::PositiveNumber);
    sub->add_flag("--oracle", oracle, "verify fixed loci against the grid oracle");
    sub->add_option("--grid", grid, "grid denominator N of the oracle")->check(CLI::Range(1, 64));
    sub->add_option("--u1", u1, "torsion parameter u1");
    sub->add_option("--u2", u2, "torsion parameter u2");
    sub->add_option("--u3", u3, "torsion parameter u3");
    sub->add_flag("--isogenous", isogenous, "z2z2: do not assume pairwise non-isogenous factors");
  };
  auto* fixtable = app.add_subcommand("fixtable", "fixed locus of every automorphism class (d4)");
  auto* quotients = app.add_subcommand("quotients", "Hodge numbers and pi1 of resolved quotients");
  auto* auts = app.add_subcommand("auts", "automorphism classes of X");
  auto* pi1 = app.add_subcommand("pi1", "fundamental group of X/Upsilon");
  auto* selfcheck = app.add_subcommand("selfcheck", "run the property suites");
  for (auto* s : {fixtable, quotients, auts, pi1, selfcheck})
    common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  cy::RunConfig c;
  try {
    if (!config_file.empty())
      c = cy::parse_config_file(config_file);
    auto set = [&](const std::string& key, const std::string& value) {
      if (!value.empty())
        cy::apply_setting(c, key, value);
    };
    set("family", family);
    set("format", format);
    set("subgroup", subgroup);
    set("u1", u1);
    set("u2", u2);
    set("u3", u3);
    if (all_subgroups)
      c.all_subgroups = true;
    if (oracle)
      c.oracle = true;
    if (isogenous)
      c.non_isogenous = false;
    if (order)
      c.order = order;
    if (max_order)
      c.max_order = max_order;
    if (grid)
      c.grid = grid;

    cy::json doc;
    if (*fixtable)
      doc = cy::cmd_fixtable(c);
    else if (*quotients)
      doc = cy::cmd_quotients(c);
    else if (*auts)
      doc = cy::cmd_auts(c);
    else if (*pi1)
      doc = cy::cmd_pi1(c);
    else
      doc = cy::cmd_selfcheck(c);
    std::cout << cy::render(doc, c.format);
    if (*selfcheck && !doc["ok"].get<bool>())
      return consistency;
    return ok;
  } catch (const cy::ConfigError& e) {
    report_config_error(e, config_file.empty() ? "<command line>" : config_file);
    return usage;
  } catch (const cy::ParseError& e) {
    std::cerr << "error: " << e.what() << " (column " << e.column << ")\n";
    return usage;
  } catch (const cy::UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const cy::InvalidParameters& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const cy::ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return consistency;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return consistency;
  }
}
