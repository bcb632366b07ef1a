#include "cy/report.hpp"

#include "cy/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cy {

namespace {

std::string trim(const std::string& s, std::size_t& offset) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
    ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
    --e;
  offset += b;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  for (auto& ch : s)
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

bool parse_bool(const std::string& v, std::size_t line, std::size_t col) {
  std::string l = lower(v);
  if (l == "true" || l == "yes" || l == "on" || l == "1")
    return true;
  if (l == "false" || l == "no" || l == "off" || l == "0")
    return false;
  throw ConfigError("expected a boolean, got '" + v + "'", line, col);
}

std::size_t parse_count(const std::string& v, std::size_t line, std::size_t col) {
  if (v.empty() || v.size() > 9 || !std::all_of(v.begin(), v.end(), [](char ch) { return std::isdigit(ch); }))
    throw ConfigError("expected a positive integer, got '" + v + "'", line, col);
  std::size_t n = std::stoul(v);
  if (n == 0)
    throw ConfigError("expected a positive integer, got '" + v + "'", line, col);
  return n;
}

json int_array(const std::vector<Int>& v) {
  json a = json::array();
  for (const auto& x : v)
    a.push_back(x.get_si());
  return a;
}

std::string family_key(FamilyTag t) { return t == FamilyTag::D4 ? "d4" : "z2z2"; }

json column(const std::string& key, const std::string& header) { return json{{"key", key}, {"header", header}}; }

json document(const std::string& command, const FamilySetup& f) {
  json d;
  d["command"] = command;
  d["family"] = family_key(f.tag);
  d["columns"] = json::array();
  d["rows"] = json::array();
  d["notes"] = json::array();
  return d;
}

struct Context {
  FamilySetup f;
  AutGroupDescription aut;
};

Context context(const RunConfig& c) {
  Context x{build_family(c), {}};
  x.aut = automorphism_group(x.f);
  return x;
}

FactorValue reduce(const FactorValue& v) { return {frac(v.re), frac(v.im)}; }
FactorValue add(const FactorValue& a, const FactorValue& b) { return reduce({a.re + b.re, a.im + b.im}); }
FactorValue sub(const FactorValue& a, const FactorValue& b) { return reduce({a.re - b.re, a.im - b.im}); }
FactorValue twice(const FactorValue& a) { return reduce({2 * a.re, 2 * a.im}); }

// The four solutions x of 2x = v.
std::vector<FactorValue> halves(const FactorValue& v) {
  Rat h = make_rat(1, 2);
  std::vector<FactorValue> out;
  for (const auto& e : {FactorValue{0, 0}, FactorValue{h, 0}, FactorValue{0, h}, FactorValue{h, h}})
    out.push_back(add({v.re / 2, v.im / 2}, e));
  return out;
}

// Order of the (t1, t2) pairs of the fixed-locus table, matched modulo w = s^2.
std::size_t pair_rank(const FamilySetup& f, const FactorValue& t1, const FactorValue& t2) {
  const FactorValue &u1 = f.u[0], &u2 = f.u[1];
  FactorValue w = add(u1, u2), zero{0, 0};
  std::vector<std::pair<FactorValue, FactorValue>> keys = {{zero, zero}, {u2, u2}, {u2, u1}, {zero, sub(u1, u2)}};
  for (std::size_t k = 0; k < keys.size(); ++k) {
    auto [a, b] = keys[k];
    if ((t1 == reduce(a) && t2 == reduce(b)) || (t1 == add(a, w) && t2 == add(b, w)))
      return k;
  }
  return keys.size();
}

// --- fixed-locus table ---

struct FixEntry {
  const AutClass* cls = nullptr;
  RatVec t;
  FactorValue t1, t2, t3;
  FixedLocusReport rep;
  std::vector<std::optional<CurveLabel>> labels;  // per covering orbit
};

std::string label_head(const FamilySetup& f, const CurveLabel& l) {
  if (l.sup)
    return "C^{" + std::to_string(l.family) + "," + format_value(*l.sup, f.shape.tags[0]) + "}";
  return "C^" + std::to_string(l.family);
}

std::vector<std::string> concrete_labels(const FamilySetup& f, const FixEntry& e) {
  std::vector<std::pair<std::optional<CurveLabel>, std::string>> items;
  for (std::size_t o = 0; o < e.labels.size(); ++o) {
    if (e.labels[o])
      items.push_back({e.labels[o], to_string(f, *e.labels[o])});
    else
      items.push_back({std::nullopt, describe_component(f, e.rep.components[e.rep.covering_orbits.orbits[o][0]])});
  }
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.first.has_value() != b.first.has_value())
      return a.first.has_value();
    if (a.first && (*a.first < *b.first || *b.first < *a.first))
      return *a.first < *b.first;
    return a.second < b.second;
  });
  std::vector<std::string> out;
  for (auto& i : items)
    out.push_back(i.second);
  return out;
}

// Label family with the last parameter left symbolic: x with 2x = rhs, where rhs is
// u3 + t3 (symbol β) or 2u3 + t3 (symbol γ).
struct Template {
  int family = 0;
  std::optional<FactorValue> sup;
  std::vector<FactorValue> prefix;
  bool gamma = false;
  friend bool operator<(const Template& a, const Template& b) {
    return std::tie(a.family, a.sup, a.prefix, a.gamma) < std::tie(b.family, b.sup, b.prefix, b.gamma);
  }
  friend bool operator==(const Template& a, const Template& b) { return !(a < b) && !(b < a); }
};

std::optional<std::set<Template>> templates_of(const FamilySetup& f, const FixEntry& e) {
  std::set<Template> out;
  const FactorValue& u3 = f.u[2];
  for (const auto& l : e.labels) {
    if (!l || l->params.empty())
      return std::nullopt;
    Template t{l->family, l->sup, {l->params.begin(), l->params.end() - 1}, false};
    FactorValue p2 = twice(l->params.back());
    if (p2 == add(u3, e.t3))
      t.gamma = false;
    else if (p2 == add(twice(u3), e.t3))
      t.gamma = true;
    else
      return std::nullopt;
    out.insert(t);
  }
  return out;
}

// Orbit hit by a label, or -1.
long orbit_of_label(const std::vector<CurveMember>& members, const FixEntry& e, const CurveLabel& l) {
  for (const auto& m : members) {
    if (m.label.family != l.family || m.label.sup != l.sup || !(m.label.params == l.params))
      continue;
    for (std::size_t i = 0; i < e.rep.components.size(); ++i)
      if (e.rep.components[i].key() == m.component.key())
        return static_cast<long>(e.rep.covering_orbits.orbit_of[i]);
  }
  return -1;
}

// The symbolic labels name every orbit exactly once for every admissible choice of the symbol.
bool symbolic_labels_hold(const FamilySetup& f, const FixEntry& e, const std::set<Template>& ts) {
  const FactorValue& u3 = f.u[2];
  FactorValue tau_half{0, make_rat(1, 2)};
  auto members = curve_family_members(f, e.t);
  std::set<long> all;
  for (const auto& t : ts) {
    FactorValue rhs = t.gamma ? add(twice(u3), e.t3) : add(u3, e.t3);
    std::optional<std::set<long>> first;
    for (const auto& x : halves(rhs)) {
      std::set<long> hits;
      for (const auto& last : {x, add(x, tau_half)}) {
        CurveLabel l{t.family, t.sup, t.prefix};
        l.params.push_back(last);
        long o = orbit_of_label(members, e, l);
        if (o < 0)
          return false;
        hits.insert(o);
      }
      if (hits.size() != 2 || (first && *first != hits))
        return false;
      first = hits;
    }
    for (long o : *first)
      if (!all.insert(o).second)
        return false;
  }
  return all.size() == e.rep.count();
}

std::vector<std::string> symbolic_labels(const FamilySetup& f, const std::set<Template>& ts) {
  std::vector<std::string> out;
  std::string shift = "+" + format_value({0, make_rat(1, 2)}, f.shape.tags[2]);
  for (const auto& t : ts) {
    std::string head = label_head(f, CurveLabel{t.family, t.sup, {}}) + "_{";
    for (const auto& p : t.prefix)
      head += format_value(p, f.shape.tags[0]) + ",";
    std::string sym = t.gamma ? "γ" : "β";
    out.push_back(head + sym + "}");
    out.push_back(head + sym + shift + "}");
  }
  return out;
}

json profile_json(const DimensionProfile& p) {
  return json{{"surfaces", p.surfaces}, {"curves", p.curves}, {"points", p.points}};
}

std::string verified_key(long n) { return "verified@N=" + std::to_string(n); }

bool oracle_ok(const FamilySetup& f, const AutClass& c, long n) {
  const AffineTorusMap& alpha = c.translation_rep ? *c.translation_rep : c.rep;
  return check_against_grid(alpha, f.covering, n).agree;
}

std::string t_text(const FamilySetup& f, const FactorValue& v, std::size_t i) {
  return format_value(v, f.shape.tags[i]);
}

// Groups classes by (t1, t2) in table order; within a group t3 ascending with the special value 2*u3 last.
template <class Entry>
std::vector<std::vector<Entry>> group_by_pair(const FamilySetup& f, std::vector<Entry> entries) {
  FactorValue special = twice(f.u[2]);
  std::sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
    auto ka = std::make_tuple(pair_rank(f, a.t1, a.t2), a.t1, a.t2, a.t3 == special, a.t3);
    auto kb = std::make_tuple(pair_rank(f, b.t1, b.t2), b.t1, b.t2, b.t3 == special, b.t3);
    return ka < kb;
  });
  std::vector<std::vector<Entry>> out;
  for (auto& e : entries) {
    if (out.empty() || !(out.back()[0].t1 == e.t1 && out.back()[0].t2 == e.t2))
      out.emplace_back();
    out.back().push_back(std::move(e));
  }
  return out;
}

std::string not_special(const FamilySetup& f) { return "≠" + t_text(f, twice(f.u[2]), 2); }

json member_json(const FamilySetup& f, const FixEntry& e, const RunConfig& c) {
  json m;
  m["t3"] = t_text(f, e.t3, 2);
  m["labels"] = concrete_labels(f, e);
  m["count"] = e.rep.count();
  if (c.oracle)
    m[verified_key(c.grid)] = oracle_ok(f, *e.cls, c.grid);
  return m;
}

void check_grid(const RunConfig& c) {
  if (c.grid < 1 || c.grid > 64)
    throw ConfigError("grid must lie in 1..64", 0, 1);
}

// --- quotients ---

std::string subgroup_label(const FamilySetup& f, const AutGroupDescription& aut, const AutSubgroup& u) {
  if (u.generators.empty())
    return "{1}";
  std::string out;
  for (std::size_t i = 0; i < u.generators.size(); ++i)
    out += (i ? "; " : "") + class_label(f, aut.classes[u.generators[i]]);
  return out;
}

std::string picard_text(const PicardStructure& p) {
  std::string t = "(" + std::to_string(p.rank) + ", [";
  for (std::size_t i = 0; i < p.torsion.size(); ++i)
    t += (i ? "," : "") + p.torsion[i].get_str();
  return t + "])";
}

json picard_json(const PicardStructure& p) {
  return json{{"rank", p.rank}, {"torsion", int_array(p.torsion)}, {"text", picard_text(p)}};
}

struct QuotientEntry {
  AutSubgroup u;
  QuotientReport r;
  FactorValue t1, t2, t3;  // order-2 translation subgroups of the D4 family
};

json quotient_row(const Context& x, const AutSubgroup& u, const QuotientReport& r, const std::string& label) {
  json row;
  row["generators"] = label;
  row["order"] = u.order();
  row["class"] = to_string(r.classification);
  row["h11"] = r.hodge.h11;
  row["h21"] = r.hodge.h21;
  row["euler"] = r.euler;
  row["pi1"] = pi1_json(r.pi1);
  row["picard"] = picard_json(r.picard);
  if (x.f.tag == FamilyTag::Z2Z2) {
    if (u.volume_preserving(x.aut)) {
      row["isolated_points"] = nullptr;
      row["formula"] = nullptr;
    } else {
      try {
        row["isolated_points"] = isolated_point_count(x.f, x.aut, u);
      } catch (const UnsupportedError&) {
        row["isolated_points"] = nullptr;
      }
      row["formula"] = to_string(isolated_point_formula(u.order()));
    }
  }
  return row;
}

std::vector<AutSubgroup> selected_subgroups(const Context& x, const RunConfig& c, bool& aggregate) {
  aggregate = false;
  if (!c.subgroup.text.empty())
    return {configured_subgroup(x.f, x.aut, c)};
  std::size_t bound = c.max_order.value_or(x.f.tag == FamilyTag::D4 ? 16 : 2);
  if (!c.all_subgroups)
    bound = c.order.value_or(2);
  if (c.order && *c.order > bound)
    throw ConfigError("order exceeds max_order", 0, 1);
  std::vector<AutSubgroup> out;
  for (auto& u : all_subgroups(x.aut, bound))
    if (c.order ? u.order() == *c.order : (c.all_subgroups || u.order() == 2))
      out.push_back(std::move(u));
  aggregate = !c.all_subgroups && !c.order && x.f.tag == FamilyTag::D4;
  return out;
}

// --- rendering ---

std::string cell(const json& v) {
  if (v.is_null())
    return "-";
  if (v.is_string())
    return v.get<std::string>();
  if (v.is_boolean())
    return v.get<bool>() ? "true" : "false";
  if (v.is_number())
    return v.dump();
  if (v.is_array()) {
    if (v.empty())
      return "∅";
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
      out += (i ? ", " : "") + cell(v[i]);
    return out;
  }
  if (v.contains("text"))
    return cell(v["text"]);
  return v.dump();
}

std::string md_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '|')
      out += '\\';
    out += ch;
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"')
      out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

// --- configuration ---

void apply_setting(RunConfig& c, const std::string& key, const std::string& value, std::size_t line,
                   std::size_t column) {
  if (key == "family") {
    std::string v = lower(value);
    if (v == "d4")
      c.family = FamilyTag::D4;
    else if (v == "z2z2")
      c.family = FamilyTag::Z2Z2;
    else
      throw ConfigError("unknown family '" + value + "' (expected d4 or z2z2)", line, column);
  } else if (key == "u1" || key == "u2" || key == "u3") {
    if (value.empty())
      throw ConfigError("empty torsion parameter", line, column);
    Located l{value, line, column};
    (key == "u1" ? c.u1 : key == "u2" ? c.u2 : c.u3) = l;
  } else if (key == "non_isogenous") {
    c.non_isogenous = parse_bool(value, line, column);
  } else if (key == "subgroup") {
    c.subgroup = Located{value, line, column};
  } else if (key == "all_subgroups") {
    c.all_subgroups = parse_bool(value, line, column);
  } else if (key == "order") {
    c.order = parse_count(value, line, column);
  } else if (key == "max_order") {
    c.max_order = parse_count(value, line, column);
  } else if (key == "format") {
    std::string v = lower(value);
    if (v == "md" || v == "markdown")
      c.format = OutputFormat::Markdown;
    else if (v == "csv")
      c.format = OutputFormat::Csv;
    else if (v == "json")
      c.format = OutputFormat::Json;
    else
      throw ConfigError("unknown format '" + value + "' (expected md, csv or json)", line, column);
  } else if (key == "grid") {
    std::size_t n = parse_count(value, line, column);
    if (n > 64)
      throw ConfigError("grid must lie in 1..64", line, column);
    c.grid = static_cast<long>(n);
  } else if (key == "oracle") {
    c.oracle = parse_bool(value, line, column);
  } else {
    throw ConfigError("unknown key '" + key + "'", line, column);
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  std::set<std::string> seen;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r')
      raw.pop_back();
    std::size_t hash = raw.find('#');
    std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
    std::size_t off = 0;
    std::string stripped = trim(body, off);
    if (stripped.empty())
      continue;
    std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value'", line, off + 1);
    std::size_t koff = 0;
    std::string key = trim(body.substr(0, eq), koff);
    if (key.empty())
      throw ConfigError("missing key before '='", line, eq + 1);
    for (std::size_t i = 0; i < key.size(); ++i)
      if (!std::isalnum(static_cast<unsigned char>(key[i])) && key[i] != '_')
        throw ConfigError("invalid character in key", line, koff + i + 1);
    static const std::set<std::string> known = {"family", "u1", "u2", "u3", "non_isogenous", "subgroup",
                                                "all_subgroups", "order", "max_order", "format", "grid", "oracle"};
    if (!known.count(key))
      throw ConfigError("unknown key '" + key + "'", line, koff + 1);
    if (!seen.insert(key).second)
      throw ConfigError("duplicate key '" + key + "'", line, koff + 1);
    std::size_t voff = eq + 1;
    std::string value = trim(body.substr(eq + 1), voff);
    if (value.empty())
      throw ConfigError("missing value for '" + key + "'", line, eq + 2);
    apply_setting(c, key, value, line, voff + 1);
  }
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read config file " + path, 0, 1);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

FamilySetup build_family(const RunConfig& c) {
  bool d4 = c.family == FamilyTag::D4;
  TorusShape shape = d4 ? d4_shape() : z2_shape();
  std::vector<FactorValue> u = d4 ? build_d4().u : build_z2(c.non_isogenous).u;
  const std::optional<Located>* given[3] = {&c.u1, &c.u2, &c.u3};
  const Located* first = nullptr;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!*given[i])
      continue;
    const Located& l = **given[i];
    if (!first)
      first = &l;
    try {
      u[i] = parse_factor_value(l.text, shape.tags[i]);
    } catch (const ParseError& e) {
      throw ConfigError("u" + std::to_string(i + 1) + ": " + e.what(), l.line, l.column + e.column - 1);
    }
  }
  try {
    return d4 ? build_d4(u[0], u[1], u[2]) : build_z2(u[0], u[1], u[2], c.non_isogenous);
  } catch (const InvalidParameters& e) {
    throw ConfigError(e.what(), first ? first->line : 0, first ? first->column : 1);
  }
}

AutSubgroup configured_subgroup(const FamilySetup& f, const AutGroupDescription& aut, const RunConfig& c) {
  std::vector<std::size_t> gens;
  const std::string& text = c.subgroup.text;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string::npos)
      end = text.size();
    std::string piece = text.substr(start, end - start);
    std::size_t col = c.subgroup.column + start;
    if (piece.find_first_not_of(" \t") != std::string::npos) {
      AffineTorusMap m;
      try {
        m = parse_named_map(f.shape, piece).map;
      } catch (const ParseError& e) {
        throw ConfigError(std::string("subgroup: ") + e.what(), c.subgroup.line, col + e.column - 1);
      }
      auto it = aut.element_class.find(m);
      if (it == aut.element_class.end())
        throw ConfigError("subgroup: " + format_map(f.shape, m) + " does not normalize the covering group",
                          c.subgroup.line, col + piece.find_first_not_of(" \t"));
      gens.push_back(it->second);
    }
    start = end + 1;
  }
  return generate_subgroup(aut, gens);
}

std::string format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::Markdown:
      return "md";
    case OutputFormat::Csv:
      return "csv";
    case OutputFormat::Json:
      return "json";
  }
  return "md";
}

json pi1_json(const Pi1Descriptor& d) {
  json j;
  j["finite"] = d.finite;
  if (d.order)
    j["order"] = *d.order;
  j["abelian_invariants"] = int_array(d.abelianization.torsion);
  if (!d.finite) {
    j["free_rank"] = d.abelianization.free_rank;
    j["lattice_rank"] = d.lattice_rank;
    j["point_quotient"] = d.point_quotient;
    if (d.z3_lattice)
      j["z3_lattice"] = *d.z3_lattice;
  }
  j["cover_class"] = to_string(d.cover);
  j["text"] = to_string(d);
  return j;
}

// --- commands ---

json cmd_fixtable(const RunConfig& c) {
  if (c.family != FamilyTag::D4)
    throw UnsupportedError("fixtable needs the d4 family");
  check_grid(c);
  Context x = context(c);
  std::vector<FixEntry> entries;
  for (const auto& cls : x.aut.classes) {
    if (cls.identity)
      continue;
    if (!cls.translation_rep)
      throw ConsistencyError("class without a translation representative");
    FixEntry e;
    e.cls = &cls;
    e.t = cls.translation_rep->translation();
    e.t1 = factor_value(e.t, 0);
    e.t2 = factor_value(e.t, 1);
    e.t3 = factor_value(e.t, 2);
    e.rep = fixed_locus_report(x.f, cls);
    e.labels = orbit_labels(x.f, e.t, e.rep.components, e.rep.covering_orbits);
    entries.push_back(std::move(e));
  }
  json doc = document("fixtable", x.f);
  doc["columns"] = {column("t1", "t1"), column("t2", "t2"), column("t3", "t3"), column("labels", "Fix(α_X)"),
                    column("where", "where"), column("count", "|Fix(α_X)|")};
  if (c.oracle)
    doc["columns"].push_back(column(verified_key(c.grid), verified_key(c.grid)));
  FactorValue special = twice(x.f.u[2]);
  const FactorValue& u3 = x.f.u[2];
  std::string where_beta = "2β = " + t_text(x.f, u3, 2) + " + t3";
  std::string where_gamma = "2γ = " + t_text(x.f, special, 2) + " + t3";
  try {
    for (auto& group : group_by_pair(x.f, std::move(entries))) {
      std::vector<const FixEntry*> rest;
      std::vector<const FixEntry*> singles;
      for (const auto& e : group)
        (e.t3 == special ? singles : rest).push_back(&e);
      // three classes share (t1, t2) off the special t3 when none of them is the identity
      bool merge = rest.size() == 3;
      std::optional<std::set<Template>> ts;
      if (merge)
        ts = templates_of(x.f, *rest[0]);
      merge = merge && ts && !ts->empty();
      for (std::size_t i = 0; merge && i < rest.size(); ++i) {
        auto other = templates_of(x.f, *rest[i]);
        merge = other && *other == *ts && rest[i]->rep.count() == rest[0]->rep.count() &&
                symbolic_labels_hold(x.f, *rest[i], *ts);
      }
      auto emit_single = [&](const FixEntry& e) {
        json row;
        row["t1"] = t_text(x.f, e.t1, 0);
        row["t2"] = t_text(x.f, e.t2, 1);
        row["t3"] = t_text(x.f, e.t3, 2);
        row["labels"] = concrete_labels(x.f, e);
        row["where"] = "";
        row["count"] = e.rep.count();
        row["profile"] = profile_json(e.rep.profile);
        if (c.oracle)
          row[verified_key(c.grid)] = oracle_ok(x.f, *e.cls, c.grid);
        doc["rows"].push_back(row);
      };
      if (!merge) {
        for (auto* e : rest)
          emit_single(*e);
      }
      for (auto* e : singles)
        emit_single(*e);
      if (merge) {
        json row;
        row["t1"] = t_text(x.f, rest[0]->t1, 0);
        row["t2"] = t_text(x.f, rest[0]->t2, 1);
        row["t3"] = not_special(x.f);
        row["labels"] = symbolic_labels(x.f, *ts);
        bool beta = false, gamma = false;
        for (const auto& t : *ts)
          (t.gamma ? gamma : beta) = true;
        std::string where;
        if (beta)
          where = where_beta;
        if (gamma)
          where += (where.empty() ? "" : ", ") + where_gamma;
        row["where"] = where;
        row["count"] = rest[0]->rep.count();
        row["profile"] = profile_json(rest[0]->rep.profile);
        bool ok = true;
        json members = json::array();
        for (auto* e : rest) {
          members.push_back(member_json(x.f, *e, c));
          if (c.oracle)
            ok = ok && members.back()[verified_key(c.grid)].get<bool>();
        }
        if (c.oracle)
          row[verified_key(c.grid)] = ok;
        row["members"] = members;
        doc["rows"].push_back(row);
      }
    }
  } catch (const BadGrid& e) {
    throw ConfigError(std::string("grid: ") + e.what(), 0, 1);
  }
  doc["notes"].push_back("labels name the covering orbits of fixed curves on A'");
  return doc;
}

json cmd_quotients(const RunConfig& c) {
  Context x = context(c);
  bool aggregate = false;
  auto subgroups = selected_subgroups(x, c, aggregate);
  json doc = document("quotients", x.f);
  doc["columns"] = {column("generators", "Υ"),   column("order", "|Υ|"), column("class", "class"),
                    column("h11", "h11"),         column("h21", "h21"),   column("euler", "e"),
                    column("pi1", "π1"),          column("picard", "Pic")};
  if (x.f.tag == FamilyTag::Z2Z2) {
    doc["columns"].push_back(column("isolated_points", "P"));
    doc["columns"].push_back(column("formula", "2^(|Υ|+2)/(|Υ|-1)"));
  }
  std::vector<QuotientEntry> entries;
  for (auto& u : subgroups) {
    QuotientEntry e{u, classify_quotient(x.f, x.aut, u), {}, {}, {}};
    const AutClass& g = x.aut.classes[u.generators.empty() ? 0 : u.generators[0]];
    if (aggregate && g.translation_rep) {
      const RatVec& t = g.translation_rep->translation();
      e.t1 = factor_value(t, 0);
      e.t2 = factor_value(t, 1);
      e.t3 = factor_value(t, 2);
    }
    entries.push_back(std::move(e));
  }
  if (!aggregate) {
    for (const auto& e : entries)
      doc["rows"].push_back(quotient_row(x, e.u, e.r, subgroup_label(x.f, x.aut, e.u)));
    return doc;
  }
  FactorValue special = twice(x.f.u[2]);
  for (auto& group : group_by_pair(x.f, std::move(entries))) {
    std::vector<const QuotientEntry*> rest, singles;
    for (const auto& e : group)
      (e.t3 == special ? singles : rest).push_back(&e);
    bool merge = rest.size() == 3;
    for (std::size_t i = 1; merge && i < rest.size(); ++i) {
      json a = quotient_row(x, rest[0]->u, rest[0]->r, "");
      json b = quotient_row(x, rest[i]->u, rest[i]->r, "");
      merge = a == b;
    }
    if (!merge)
      for (auto* e : rest)
        doc["rows"].push_back(quotient_row(x, e->u, e->r, subgroup_label(x.f, x.aut, e->u)));
    for (auto* e : singles)
      doc["rows"].push_back(quotient_row(x, e->u, e->r, subgroup_label(x.f, x.aut, e->u)));
    if (merge) {
      std::string label = "(" + t_text(x.f, rest[0]->t1, 0) + ", " + t_text(x.f, rest[0]->t2, 1) + ", " +
                          not_special(x.f) + ")";
      json row = quotient_row(x, rest[0]->u, rest[0]->r, label);
      json members = json::array();
      for (auto* e : rest)
        members.push_back(subgroup_label(x.f, x.aut, e->u));
      row["members"] = members;
      doc["rows"].push_back(row);
    }
  }
  return doc;
}

json cmd_auts(const RunConfig& c) {
  Context x = context(c);
  json doc = document("auts", x.f);
  doc["columns"] = {column("index", "#"),          column("label", "α_X"), column("map", "lift"),
                    column("order", "order"),      column("det", "det"),   column("translation", "translation"),
                    column("free", "free"),        column("free_closed_form", "free (closed form)")};
  auto closed = free_automorphisms(x.f, x.aut);
  std::set<std::size_t> closed_set(closed.begin(), closed.end());
  std::size_t translations = 0, free = 0;
  for (std::size_t i = 0; i < x.aut.classes.size(); ++i) {
    const AutClass& cls = x.aut.classes[i];
    json row;
    row["index"] = i;
    row["label"] = class_label(x.f, cls);
    row["map"] = format_map(x.f.shape, cls.translation_rep ? *cls.translation_rep : cls.rep);
    row["order"] = cls.order;
    row["det"] = cls.det.get_si();
    row["translation"] = cls.translation_rep.has_value();
    bool fr = !cls.identity && is_free(x.f, cls);
    row["free"] = fr;
    row["free_closed_form"] = closed_set.count(i) != 0;
    translations += cls.translation_rep ? 1 : 0;
    free += fr ? 1 : 0;
    doc["rows"].push_back(row);
  }
  doc["summary"] = json{{"order", x.aut.quotient_order},
                        {"exponent", x.aut.exponent},
                        {"lower_bound", x.aut.lower_bound},
                        {"translation_classes", translations},
                        {"free", free}};
  doc["notes"].push_back("|Aut(X)| = " + std::to_string(x.aut.quotient_order) + (x.aut.lower_bound ? " (lower bound)" : ""));
  doc["notes"].push_back("exponent " + std::to_string(x.aut.exponent));
  doc["notes"].push_back(std::to_string(free) + " classes act freely");
  return doc;
}

json cmd_pi1(const RunConfig& c) {
  Context x = context(c);
  AutSubgroup u = c.subgroup.text.empty() ? generate_subgroup(x.aut, {}) : configured_subgroup(x.f, x.aut, c);
  CrystalGroup gamma = build_gamma(x.f, generator_lifts(x.aut, u), u.order());
  FGamma fg = f_gamma(gamma);
  Pi1Descriptor d = pi1_quotient(gamma, fg);
  json doc = document("pi1", x.f);
  doc["columns"] = {column("generators", "Υ"), column("pi1", "π1"), column("abelianization", "Ab(π1)"),
                    column("cover_class", "cover")};
  json row;
  row["generators"] = subgroup_label(x.f, x.aut, u);
  row["pi1"] = pi1_json(d);
  std::string ab = d.abelianization.free_rank ? "Z^" + std::to_string(d.abelianization.free_rank) : "";
  for (const auto& t : d.abelianization.torsion)
    ab += (ab.empty() ? "" : " x ") + ("Z/" + t.get_str());
  row["abelianization"] = ab.empty() ? "0" : ab;
  row["cover_class"] = to_string(d.cover);
  row["fixed_point_subgroup_trivial"] = fg.trivial();
  doc["rows"].push_back(row);
  return doc;
}

std::string render(const json& doc, OutputFormat format) {
  if (format == OutputFormat::Json)
    return doc.dump(2) + "\n";
  std::vector<std::string> keys, headers;
  for (const auto& col : doc.at("columns")) {
    keys.push_back(col.at("key").get<std::string>());
    headers.push_back(col.at("header").get<std::string>());
  }
  std::string out;
  if (format == OutputFormat::Csv) {
    for (std::size_t i = 0; i < headers.size(); ++i)
      out += (i ? "," : "") + csv_escape(headers[i]);
    out += "\n";
    for (const auto& row : doc.at("rows")) {
      for (std::size_t i = 0; i < keys.size(); ++i)
        out += (i ? "," : "") + csv_escape(cell(row.contains(keys[i]) ? row[keys[i]] : json()));
      out += "\n";
    }
    return out;
  }
  out += "|";
  for (const auto& h : headers)
    out += " " + md_escape(h) + " |";
  out += "\n|";
  for (std::size_t i = 0; i < headers.size(); ++i)
    out += "---|";
  out += "\n";
  for (const auto& row : doc.at("rows")) {
    out += "|";
    for (const auto& k : keys)
      out += " " + md_escape(cell(row.contains(k) ? row[k] : json())) + " |";
    out += "\n";
  }
  if (doc.contains("notes") && !doc["notes"].empty()) {
    out += "\n";
    for (const auto& n : doc["notes"])
      out += n.get<std::string>() + "\n";
  }
  return out;
}

}  // namespace cy
