#include "cy/report.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <set>

namespace cy {

namespace {

struct Check {
  std::string name;
  std::function<std::string()> run;  // empty string on success, else the failure detail
};

IntMat random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, long lo, long hi) {
  std::uniform_int_distribution<long> d(lo, hi);
  IntMat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m(i, j) = d(rng);
  return m;
}

bool unimodular(const IntMat& u) {
  Int d = det(u);
  return d == 1 || d == -1;
}

bool divisibility_chain(const IntMat& s) {
  std::size_t n = std::min(s.rows(), s.cols());
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j)
      if (i != j && s(i, j) != 0)
        return false;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Int &a = s(i, i), &b = s(i + 1, i + 1);
    if (a < 0 || b < 0)
      return false;
    if (a == 0 ? b != 0 : !mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t()))
      return false;
  }
  return true;
}

std::string hnf_snf_identities() {
  std::mt19937 rng(1000);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  for (int it = 0; it < 1000; ++it) {
    IntMat m = random_matrix(rng, dim(rng), dim(rng), -20, 20);
    auto h = hnf(m);
    if (!(h.u * m == h.h) || !unimodular(h.u))
      return "hnf reconstruction failed at sample " + std::to_string(it);
    auto s = snf(m);
    if (!(s.u * m * s.v == s.s) || !unimodular(s.u) || !unimodular(s.v))
      return "snf reconstruction failed at sample " + std::to_string(it);
    if (!divisibility_chain(s.s))
      return "snf divisibility chain broken at sample " + std::to_string(it);
  }
  return "";
}

std::string affine_solve_grid() {
  std::mt19937 rng(99);
  const long den = 4, g = 2 * den;
  for (int it = 0; it < 200; ++it) {
    std::size_t m = 1 + rng() % 3;
    IntMat a = random_matrix(rng, m, m, -3, 3);
    RatVec t(m);
    for (auto& x : t)
      x = make_rat(static_cast<long>(rng() % den), den);
    auto sol = solve_affine_mod_lattice(a, t);
    IntMat am = a - IntMat::identity(m);
    Complement comp = complement(sol.direction);
    std::vector<long> x(m, 0);
    for (;;) {
      RatVec p(m);
      for (std::size_t i = 0; i < m; ++i)
        p[i] = make_rat(x[i], g);
      bool oracle = is_integral(am * p + t);
      bool member = false;
      if (!sol.empty)
        for (const auto& o : sol.offsets)
          member = member || is_integral(comp.proj * (p - o));
      if (oracle != member)
        return "solver and grid disagree at sample " + std::to_string(it);
      std::size_t i = 0;
      while (i < m && ++x[i] == g)
        x[i++] = 0;
      if (i == m)
        break;
    }
  }
  return "";
}

std::string lattice_identities() {
  std::mt19937 rng(5);
  for (int it = 0; it < 200; ++it) {
    std::size_t m = 2 + rng() % 4;
    auto gen = [&](std::size_t k) {
      std::vector<IntVec> g;
      for (std::size_t i = 0; i < k; ++i) {
        IntVec v(m);
        for (auto& x : v)
          x = static_cast<long>(rng() % 9) - 4;
        g.push_back(v);
      }
      return Sublattice::from_generators(m, g);
    };
    auto a = gen(rng() % (m + 1)), b = gen(rng() % (m + 1));
    auto sa = saturation(a);
    if (!(saturation(sa) == sa))
      return "saturation not idempotent at sample " + std::to_string(it);
    if (a.rank() + b.rank() != lattice_sum(a, b).rank() + lattice_intersection(a, b).rank())
      return "rank identity fails at sample " + std::to_string(it);
  }
  return "";
}

struct Families {
  FamilySetup d4 = build_d4();
  FamilySetup z2 = build_z2();
  AutGroupDescription d4_aut = automorphism_group(d4);
  AutGroupDescription z2_aut = automorphism_group(z2);
  std::vector<std::pair<const FamilySetup*, const AutGroupDescription*>> both() const {
    return {{&d4, &d4_aut}, {&z2, &z2_aut}};
  }
};

std::string group_elements(const Families& fs) {
  std::mt19937 rng(3);
  for (auto [f, aut] : fs.both()) {
    const auto& els = aut->normalizer_elements;
    for (const auto& e : els) {
      Int d = det(e.real_linear());
      if (d != 1 && d != -1)
        return "non-invertible lift " + format_map(f->shape, e);
      if (!(e.real_linear() == real_form(e.complex_linear())))
        return "complex and real parts disagree for " + format_map(f->shape, e);
      if (!compose(e, inverse(e)).is_identity())
        return "f o f^-1 is not the identity for " + format_map(f->shape, e);
    }
    std::set<AffineTorusMap> all(els.begin(), els.end());
    for (int it = 0; it < 500; ++it) {
      const auto& a = els[rng() % els.size()];
      const auto& b = els[rng() % els.size()];
      if (!all.count(compose(a, b)))
        return "normalizer not closed under composition";
      int va = volume_form_action(a).preserves() ? 1 : -1;
      int vb = volume_form_action(b).preserves() ? 1 : -1;
      int vab = volume_form_action(compose(a, b)).preserves() ? 1 : -1;
      if (va * vb != vab)
        return "volume action is not a homomorphism";
    }
  }
  return "";
}

std::string normalizer(const Families& fs) {
  for (auto [f, aut] : fs.both()) {
    for (const auto& e : aut->normalizer_elements)
      for (const auto& g : f->covering.elements())
        if (!f->covering.contains(compose(compose(e, g), inverse(e))))
          return "normalizer element does not normalize: " + format_map(f->shape, e);
    if (aut->quotient_order * f->covering.order() != aut->normalizer_elements.size())
      return "|Aut| x |H| != |N(H)| for " + to_string(f->tag);
  }
  for (const auto& c : fs.d4_aut.classes)
    if (!c.translation_rep)
      return "D4 class without translation representative";
  return "";
}

std::string freeness(const Families& fs) {
  for (auto [f, aut] : fs.both()) {
    auto closed = free_automorphisms(*f, *aut);
    std::set<std::size_t> s(closed.begin(), closed.end());
    for (std::size_t i = 0; i < aut->classes.size(); ++i) {
      if (aut->classes[i].identity)
        continue;
      if (is_free(*f, aut->classes[i]) != (s.count(i) != 0))
        return "closed form and fixed-locus engine disagree on " + class_label(*f, aut->classes[i]);
    }
  }
  return "";
}

std::string grid_oracle(const Families& fs, long n) {
  for (auto [f, aut] : fs.both())
    for (const auto& c : aut->classes) {
      const AffineTorusMap& alpha = c.translation_rep ? *c.translation_rep : c.rep;
      auto r = check_against_grid(alpha, f->covering, n);
      if (!r.agree)
        return "solver " + std::to_string(r.solver_points) + " vs grid " + std::to_string(r.oracle_points) +
               " on " + class_label(*f, c);
    }
  return "";
}

std::string d4_curves(const Families& fs) {
  for (const auto& c : fs.d4_aut.classes) {
    if (c.identity)
      continue;
    for (const auto& comp : fixed_locus_report(fs.d4, c).components)
      if (comp.dim_real() != 2)
        return "component of real dimension " + std::to_string(comp.dim_real()) + " on " + class_label(fs.d4, c);
  }
  return "";
}

std::string table_counts() {
  RunConfig c;
  json doc = cmd_fixtable(c);
  std::vector<std::size_t> counts;
  for (const auto& row : doc["rows"])
    counts.push_back(row["count"].get<std::size_t>());
  std::vector<std::size_t> expected = {0, 0, 5, 4, 2, 6, 4, 4, 2};
  if (counts != expected) {
    std::string got;
    for (auto k : counts)
      got += (got.empty() ? "" : ",") + std::to_string(k);
    return "count column (" + got + ")";
  }
  return "";
}

std::string orbit_independence(const Families& fs) {
  std::mt19937 rng(11);
  for (auto [f, aut] : fs.both())
    for (const auto& c : aut->classes) {
      if (c.identity)
        continue;
      auto rep = fixed_locus_report(*f, c);
      std::vector<AffineTorusMap> gens = f->covering.elements();
      std::shuffle(gens.begin(), gens.end(), rng);
      auto other = identify_under_group(rep.components, gens);
      std::set<std::set<std::size_t>> a, b;
      for (const auto& o : rep.covering_orbits.orbits)
        a.insert({o.begin(), o.end()});
      for (const auto& o : other.orbits)
        b.insert({o.begin(), o.end()});
      if (a != b)
        return "orbit partition depends on generators for " + class_label(*f, c);
    }
  return "";
}

std::string hodge_checks(const Families& fs) {
  for (auto [f, aut] : fs.both()) {
    std::size_t bound = f->tag == FamilyTag::D4 ? 16 : 2;
    for (const auto& u : all_subgroups(*aut, bound)) {
      auto h = orbifold_hodge(*f, *aut, u);  // integrality is asserted inside
      int diff = h.h11 - h.h21;
      int e = euler_char(h);
      bool vp = u.volume_preserving(*aut);
      auto k = quotient_class(*f, *aut, u);
      if (vp && (diff != 0 || e != 0))
        return "volume-preserving quotient with h11 - h21 = " + std::to_string(diff);
      if (k == QuotientClass::ZeroKodairaNontrivialCanonical && (diff != 3 || e != 8))
        return "non-symplectic quotient with h11 - h21 = " + std::to_string(diff) + ", e = " + std::to_string(e);
      if (f->tag == FamilyTag::D4 && k != QuotientClass::CrepantCalabiYau && k != QuotientClass::SmoothFreeQuotient)
        return "D4 quotient classified " + to_string(k);
    }
  }
  return "";
}

std::string cross_consistency(const Families& fs) {
  for (const auto& u : all_subgroups(fs.d4_aut, 2)) {
    if (u.order() != 2)
      continue;
    const AutClass& c = fs.d4_aut.classes[u.generators[0]];
    int h11 = orbifold_hodge(fs.d4, fs.d4_aut, u).h11;
    if (h11 != 2 + static_cast<int>(fixed_locus_report(fs.d4, c).count()))
      return "h11 != 2 + count for " + class_label(fs.d4, c);
  }
  return "";
}

std::string pi1_checks(const Families& fs) {
  std::mt19937 rng(17);
  for (auto [f, aut] : fs.both()) {
    for (const auto& u : all_subgroups(*aut, 2)) {
      auto lifts = generator_lifts(*aut, u);
      CrystalGroup g = build_gamma(*f, lifts, u.order());
      FGamma fg = f_gamma(g);
      std::vector<CrystalElement> gens;
      for (auto k : g.generator_indices())
        gens.push_back(g.coset_rep(k));
      for (std::size_t j = 0; j < g.rank(); ++j) {
        IntVec e(g.rank(), Int(0));
        e[j] = 1;
        gens.push_back(g.lattice_translation(e));
      }
      for (const auto& [k, cert] : fg.certificates)
        for (const auto& h : gens)
          if (!fg.contains(g, g.multiply(g.multiply(h, cert), g.inverse(h))))
            return "F is not normal for " + std::to_string(u.order()) + "-element subgroup";
      bool free = true;
      for (auto e : u.elements)
        if (!aut->classes[e].identity && !is_free(*f, aut->classes[e]))
          free = false;
      if (fg.trivial() != free)
        return "F trivial does not match freeness";
      auto ab = abelianization(g, fg);
      std::shuffle(lifts.begin(), lifts.end(), rng);
      CrystalGroup h = build_gamma(*f, lifts, u.order());
      auto ab2 = abelianization(h, f_gamma(h));
      if (ab.free_rank != ab2.free_rank || ab.torsion != ab2.torsion)
        return "abelianization depends on generator order";
    }
  }
  return "";
}

std::string report_properties() {
  for (auto fmt : {OutputFormat::Markdown, OutputFormat::Csv, OutputFormat::Json}) {
    RunConfig c;
    c.format = fmt;
    json a = cmd_fixtable(c), b = cmd_fixtable(c);
    if (render(a, fmt) != render(b, fmt))
      return "fixtable output not deterministic";
    if (render(json::parse(a.dump()), fmt) != render(a, fmt))
      return "fixtable does not round-trip through JSON";
    json q = cmd_quotients(c);
    if (render(json::parse(q.dump()), fmt) != render(q, fmt))
      return "quotients do not round-trip through JSON";
  }
  return "";
}

}  // namespace

json cmd_selfcheck(const RunConfig& c) {
  Families fs;
  long n = c.grid;
  std::vector<Check> checks = {
      {"ratlin: hnf/snf reconstruction on 1000 random matrices", hnf_snf_identities},
      {"ratlin: affine solver agrees with the grid", affine_solve_grid},
      {"ratlin: saturation and rank identities", lattice_identities},
      {"torus: lifts invertible, inverses, closure, volume homomorphism", [&] { return group_elements(fs); }},
      {"families: normalizer, |Aut| x |H| = |N|, D4 translation classes", [&] { return normalizer(fs); }},
      {"families: closed-form freeness matches the fixed-locus engine", [&] { return freeness(fs); }},
      {"fixloc: solver agrees with the grid oracle at N=" + std::to_string(n), [&] { return grid_oracle(fs, n); }},
      {"fixloc: D4 fixed components are curves", [&] { return d4_curves(fs); }},
      {"fixloc: fixed-locus count column", table_counts},
      {"fixloc: orbit partition independent of generators", [&] { return orbit_independence(fs); }},
      {"invariants: integrality, h11 - h21, euler, D4 classification", [&] { return hodge_checks(fs); }},
      {"invariants: h11 = 2 + count for order-2 D4 subgroups", [&] { return cross_consistency(fs); }},
      {"pi1: F normal, F trivial iff free, abelianization invariant", [&] { return pi1_checks(fs); }},
      {"report: deterministic output and JSON round trip", report_properties},
  };
  json doc;
  doc["command"] = "selfcheck";
  doc["family"] = "all";
  doc["columns"] = {json{{"key", "check"}, {"header", "check"}}, json{{"key", "ok"}, {"header", "ok"}},
                    json{{"key", "detail"}, {"header", "detail"}}};
  doc["rows"] = json::array();
  bool all = true;
  for (const auto& ch : checks) {
    std::string detail;
    try {
      detail = ch.run();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    bool ok = detail.empty();
    all = all && ok;
    doc["rows"].push_back(json{{"check", ch.name}, {"ok", ok}, {"detail", ok ? "-" : detail}});
  }
  doc["ok"] = all;
  doc["notes"] = json::array({all ? "all checks passed" : "some checks failed"});
  return doc;
}

}  // namespace cy
