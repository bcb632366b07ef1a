#include "cy/fixloc.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace cy {

bool FixedComponent::contains(const RatVec& x) const { return is_integral(comp.proj * (x - offset)); }

bool FixedComponent::contains(const FixedComponent& other) const {
  for (const auto& v : other.direction.basis_vectors())
    if (!direction.contains(v))
      return false;
  return contains(other.offset);
}

FixedComponent make_component(const Sublattice& direction, const RatVec& x) {
  FixedComponent c;
  c.direction = direction.saturated() ? direction : saturation(direction);
  c.comp = complement(c.direction);
  c.offset = canonical_offset(c.comp, x);
  return c;
}

FixedComponent transform(const AffineTorusMap& g, const FixedComponent& c) {
  std::vector<IntVec> dirs;
  for (const auto& v : c.direction.basis_vectors())
    dirs.push_back(g.real_linear() * v);
  return make_component(Sublattice::from_generators(c.direction.ambient_rank(), dirs), g.apply(c.offset));
}

std::vector<FixedComponent> fixed_locus_upstairs(const AffineTorusMap& alpha, const FiniteAffineGroup& covering) {
  std::map<std::pair<IntMat, RatVec>, FixedComponent> found;
  for (const auto& h : covering.elements()) {
    SolutionSet sol = solve_mod_lattice(alpha.real_linear() - h.real_linear(), h.translation() - alpha.translation());
    if (sol.empty)
      continue;
    for (const auto& o : sol.offsets) {
      FixedComponent c = make_component(sol.direction, o);
      auto it = found.emplace(c.key(), c).first;
      it->second.witnesses.push_back(h);
    }
  }
  std::vector<FixedComponent> all;
  for (auto& kv : found)
    all.push_back(std::move(kv.second));
  std::vector<FixedComponent> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    bool inside = false;
    for (std::size_t j = 0; j < all.size() && !inside; ++j)
      if (j != i && all[j].dim_real() > all[i].dim_real() && all[j].contains(all[i]))
        inside = true;
    if (!inside)
      out.push_back(all[i]);
  }
  return out;
}

OrbitPartition identify_under_group(const std::vector<FixedComponent>& comps,
                                    const std::vector<AffineTorusMap>& gens) {
  std::map<std::pair<IntMat, RatVec>, std::size_t> index;
  for (std::size_t i = 0; i < comps.size(); ++i)
    index.emplace(comps[i].key(), i);
  std::vector<std::size_t> parent(comps.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& g : gens)
    for (std::size_t i = 0; i < comps.size(); ++i) {
      auto it = index.find(transform(g, comps[i]).key());
      if (it == index.end())
        throw ConsistencyError("group element maps a fixed component outside the fixed locus");
      std::size_t a = find(i), b = find(it->second);
      if (a != b)
        parent[std::max(a, b)] = std::min(a, b);
    }
  OrbitPartition p;
  p.orbit_of.assign(comps.size(), 0);
  std::map<std::size_t, std::size_t> root_orbit;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    std::size_t r = find(i);
    auto it = root_orbit.find(r);
    if (it == root_orbit.end()) {
      it = root_orbit.emplace(r, p.orbits.size()).first;
      p.orbits.emplace_back();
    }
    p.orbit_of[i] = it->second;
    p.orbits[it->second].push_back(i);
  }
  return p;
}

namespace {

const AffineTorusMap& lift_of(const AutClass& c) { return c.translation_rep ? *c.translation_rep : c.rep; }

DimensionProfile profile_of(const std::vector<FixedComponent>& comps, const OrbitPartition& p) {
  DimensionProfile d;
  for (const auto& o : p.orbits) {
    std::size_t dim = comps[o.front()].dim_real();
    std::size_t full = comps[o.front()].direction.ambient_rank();
    if (dim == full)
      ++d.whole;
    else if (dim == 4)
      ++d.surfaces;
    else if (dim == 2)
      ++d.curves;
    else if (dim == 0)
      ++d.points;
  }
  return d;
}

}  // namespace

FixedLocusReport fixed_locus_report(const FamilySetup& f, const AutClass& c) {
  FixedLocusReport r;
  r.label = class_label(f, c);
  r.components = fixed_locus_upstairs(lift_of(c), f.covering);
  r.covering_orbits = identify_under_group(r.components, f.covering.generators());
  r.profile = profile_of(r.components, r.covering_orbits);
  return r;
}

FixedLocusReport fixed_locus_in_quotient(const FamilySetup& f, const AutClass& c,
                                         const std::vector<AffineTorusMap>& upsilon_lifts) {
  FixedLocusReport r = fixed_locus_report(f, c);
  std::vector<AffineTorusMap> gens = f.covering.generators();
  gens.insert(gens.end(), upsilon_lifts.begin(), upsilon_lifts.end());
  r.upsilon_orbits = identify_under_group(r.components, gens);
  return r;
}

bool is_free(const FamilySetup& f, const AutClass& c) {
  return fixed_locus_upstairs(lift_of(c), f.covering).empty();
}

SurfaceFixingProfile surface_fixing_profile(const FamilySetup& f, const AutClass& c) {
  SurfaceFixingProfile p;
  for (const auto& comp : fixed_locus_upstairs(lift_of(c), f.covering)) {
    std::size_t d = comp.dim_real();
    if (d == 4)
      p.fixes_surfaces = true;
    else if (d == 2)
      p.fixes_curves = true;
    else if (d == 0)
      p.fixes_points = true;
  }
  return p;
}

GridPoint encode_grid(const RatVec& x, long n) {
  GridPoint p = 0;
  for (const auto& c : x) {
    Rat v = frac(c) * n;
    if (!is_integral(v))
      throw BadGrid("coordinate " + to_string(c) + " is not on the 1/" + std::to_string(n) + " grid");
    p = p * static_cast<GridPoint>(n) + v.get_num().get_ui();
  }
  return p;
}

RatVec decode_grid(GridPoint p, std::size_t m, long n) {
  RatVec x(m);
  for (std::size_t i = m; i-- > 0;) {
    x[i] = make_rat(static_cast<long>(p % static_cast<GridPoint>(n)), n);
    p /= static_cast<GridPoint>(n);
  }
  return x;
}

namespace {

// Bitset over the grid marking solutions of alpha(x) = h(x) for some h.
std::vector<std::uint64_t> grid_bitset(const AffineTorusMap& alpha, const FiniteAffineGroup& covering, long n) {
  if (n <= 0)
    throw BadGrid("grid denominator must be positive");
  std::size_t m = alpha.real_dim();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < m; ++i) {
    total *= static_cast<std::uint64_t>(n);
    if (total > (std::uint64_t{1} << 32))
      throw BadGrid("grid too large");
  }
  std::vector<std::uint64_t> bits((total + 63) / 64, 0);
  std::size_t m1 = m / 2, m2 = m - m1;
  auto pw = [&](std::size_t k) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < k; ++i)
      r *= static_cast<std::uint64_t>(n);
    return r;
  };
  std::uint64_t n1 = pw(m1), n2 = pw(m2);
  auto key_of = [&](const std::vector<long>& v) {
    std::uint64_t k = 0;
    for (long x : v)
      k = k * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(((x % n) + n) % n);
    return k;
  };
  auto digits = [&](std::uint64_t code, std::size_t len) {
    std::vector<long> d(len);
    for (std::size_t i = len; i-- > 0;) {
      d[i] = static_cast<long>(code % static_cast<std::uint64_t>(n));
      code /= static_cast<std::uint64_t>(n);
    }
    return d;
  };
  for (const auto& h : covering.elements()) {
    IntMat a = alpha.real_linear() - h.real_linear();
    RatVec b = h.translation() - alpha.translation();
    std::vector<long> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
      Rat v = b[i] * n;
      if (!is_integral(v))
        throw BadGrid("translation " + to_string(b[i]) + " is not on the 1/" + std::to_string(n) + " grid");
      rhs[i] = v.get_num().get_si();
    }
    std::vector<std::vector<long>> am(m, std::vector<long>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        am[i][j] = a(i, j).get_si();
    // a1*x1 + a2*x2 = rhs (mod n): bucket x2 by rhs - a2*x2
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> table;
    for (std::uint64_t c2 = 0; c2 < n2; ++c2) {
      auto x2 = digits(c2, m2);
      std::vector<long> r(m);
      for (std::size_t i = 0; i < m; ++i) {
        long s = rhs[i];
        for (std::size_t j = 0; j < m2; ++j)
          s -= am[i][m1 + j] * x2[j];
        r[i] = s;
      }
      table[key_of(r)].push_back(c2);
    }
    for (std::uint64_t c1 = 0; c1 < n1; ++c1) {
      auto x1 = digits(c1, m1);
      std::vector<long> l(m);
      for (std::size_t i = 0; i < m; ++i) {
        long s = 0;
        for (std::size_t j = 0; j < m1; ++j)
          s += am[i][j] * x1[j];
        l[i] = s;
      }
      auto it = table.find(key_of(l));
      if (it == table.end())
        continue;
      for (std::uint64_t c2 : it->second) {
        std::uint64_t p = c1 * n2 + c2;
        bits[p / 64] |= std::uint64_t{1} << (p % 64);
      }
    }
  }
  return bits;
}

}  // namespace

std::vector<GridPoint> brute_force_fixed_grid(const AffineTorusMap& alpha, const FiniteAffineGroup& covering, long n) {
  auto bits = grid_bitset(alpha, covering, n);
  std::vector<GridPoint> out;
  for (std::size_t w = 0; w < bits.size(); ++w)
    for (std::uint64_t b = bits[w]; b; b &= b - 1)
      out.push_back(w * 64 + static_cast<GridPoint>(__builtin_ctzll(b)));
  return out;
}

std::uint64_t brute_force_fixed_count(const AffineTorusMap& alpha, const FiniteAffineGroup& covering, long n) {
  std::uint64_t c = 0;
  for (std::uint64_t w : grid_bitset(alpha, covering, n))
    c += static_cast<std::uint64_t>(__builtin_popcountll(w));
  return c;
}

std::vector<GridPoint> component_grid_points(const std::vector<FixedComponent>& comps, long n) {
  std::vector<GridPoint> out;
  for (const auto& c : comps) {
    std::size_t m = c.offset.size();
    std::vector<long> base(m);
    bool on_grid = true;
    for (std::size_t j = 0; j < m; ++j) {
      Rat x = c.offset[j] * n;
      if (!is_integral(x))
        on_grid = false;
      else
        base[j] = x.get_num().get_si();
    }
    if (!on_grid)
      continue;  // the canonical offset is on the grid whenever the component meets it
    std::vector<std::vector<long>> basis;
    for (const auto& v : c.direction.basis_vectors()) {
      std::vector<long> b(m);
      for (std::size_t j = 0; j < m; ++j)
        b[j] = ((v[j].get_si() % n) + n) % n;
      basis.push_back(b);
    }
    std::size_t k = basis.size();
    std::vector<long> coef(k, 0), x(m);
    for (;;) {
      GridPoint p = 0;
      for (std::size_t j = 0; j < m; ++j) {
        long s = base[j];
        for (std::size_t i = 0; i < k; ++i)
          s += basis[i][j] * coef[i];
        p = p * static_cast<GridPoint>(n) + static_cast<GridPoint>(s % n);
      }
      out.push_back(p);
      std::size_t i = 0;
      while (i < k && ++coef[i] == n)
        coef[i++] = 0;
      if (i == k)
        break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

OracleCheck check_against_grid(const AffineTorusMap& alpha, const FiniteAffineGroup& covering, long n) {
  OracleCheck r;
  auto comps = fixed_locus_upstairs(alpha, covering);
  std::size_t m = alpha.real_dim();
  bool whole = std::any_of(comps.begin(), comps.end(), [&](const FixedComponent& c) { return c.dim_real() == m; });
  if (whole) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < m; ++i)
      total *= static_cast<std::uint64_t>(n);
    r.solver_points = total;
    r.oracle_points = brute_force_fixed_count(alpha, covering, n);
    r.agree = r.solver_points == r.oracle_points;
    return r;
  }
  auto solver = component_grid_points(comps, n);
  auto oracle = brute_force_fixed_grid(alpha, covering, n);
  r.solver_points = solver.size();
  r.oracle_points = oracle.size();
  r.agree = solver == oracle;
  for (const auto& c : comps) {
    std::vector<FixedComponent> one{c};
    if (component_grid_points(one, n).empty())
      r.agree = false;  // every component must carry grid points
  }
  return r;
}

bool operator<(const CurveLabel& a, const CurveLabel& b) {
  return std::tie(a.family, a.sup, a.params) < std::tie(b.family, b.sup, b.params);
}

namespace {

FactorValue reduce(const FactorValue& v) { return {frac(v.re), frac(v.im)}; }

FactorValue add(const FactorValue& a, const FactorValue& b) { return reduce({a.re + b.re, a.im + b.im}); }

// The four solutions x of 2x = v.
std::vector<FactorValue> halves(const FactorValue& v) {
  Rat h = make_rat(1, 2);
  FactorValue x0{v.re / 2, v.im / 2};
  std::vector<FactorValue> out;
  for (const FactorValue& e : std::vector<FactorValue>{{0, 0}, {h, 0}, {0, h}, {h, h}})
    out.push_back(add(x0, e));
  std::sort(out.begin(), out.end());
  return out;
}

IntVec unit(std::size_t i) {
  IntVec v(6, 0);
  v[i] = 1;
  return v;
}

IntVec combo(long a, long b, std::size_t re) {
  // a*e_re(z1) + b*e_re(z2) on the real coordinates of z1, z2
  IntVec v(6, 0);
  v[re] = a;
  v[2 + re] = b;
  return v;
}

RatVec point(const FactorValue& a, const FactorValue& b, const FactorValue& c) {
  return {a.re, a.im, b.re, b.im, c.re, c.im};
}

}  // namespace

std::vector<CurveMember> curve_family_members(const FamilySetup& f, const RatVec& t) {
  if (f.tag != FamilyTag::D4)
    throw UnsupportedError("named curves exist for the D4 family only");
  FactorValue t1 = factor_value(t, 0), t2 = factor_value(t, 1), t3 = factor_value(t, 2);
  Rat h = make_rat(1, 2), q = make_rat(1, 4);
  FactorValue zero{0, 0}, half{h, 0}, quarter{q, 0}, three_q{3 * q, 0};
  auto z3 = Sublattice::from_generators(6, {unit(4), unit(5)});
  auto z1 = Sublattice::from_generators(6, {unit(0), unit(1)});
  auto z2 = Sublattice::from_generators(6, {unit(2), unit(3)});
  auto anti = Sublattice::from_generators(6, {combo(1, -1, 0), combo(1, -1, 1)});
  auto diag = Sublattice::from_generators(6, {combo(1, 1, 0), combo(1, 1, 1)});
  std::vector<CurveMember> out;
  auto add_member = [&](int fam, std::optional<FactorValue> sup, std::vector<FactorValue> params,
                        const Sublattice& dir, const RatVec& x) {
    out.push_back({CurveLabel{fam, sup, std::move(params)}, make_component(dir, x)});
  };
  for (auto p : halves(t1))
    for (auto qq : halves(t2))
      add_member(1, std::nullopt, {p, qq}, z3, point(p, qq, zero));
  for (auto p : halves(add(t1, half)))
    for (auto qq : halves(add(t2, half)))
      add_member(2, std::nullopt, {p, qq}, z3, point(p, qq, zero));
  for (auto qq : halves(half))
    for (auto l : halves(add(quarter, t3)))
      add_member(3, std::nullopt, {qq, l}, z1, point(zero, qq, l));
  for (auto p : halves(half))
    for (auto l : halves(add(three_q, t3)))
      add_member(4, std::nullopt, {p, l}, z2, point(p, zero, l));
  for (auto l : halves(add(half, t3))) {
    add_member(5, t1, {l}, anti, point(zero, add(f.u[0], t1), l));
    add_member(6, t1, {l}, anti, point(zero, add(f.u[1], t1), l));
  }
  for (auto l : halves(t3)) {
    add_member(7, t1, {l}, diag, point(zero, add(f.u[0], t1), l));
    add_member(8, t1, {l}, diag, point(zero, add(f.u[1], t1), l));
  }
  for (auto qq : halves(zero))
    for (auto l : halves(add(quarter, t3)))
      add_member(9, std::nullopt, {qq, l}, z1, point(zero, qq, l));
  for (auto p : halves(zero))
    for (auto l : halves(add(three_q, t3)))
      add_member(10, std::nullopt, {p, l}, z2, point(p, zero, l));
  return out;
}

std::vector<std::optional<CurveLabel>> orbit_labels(const FamilySetup& f, const RatVec& t,
                                                    const std::vector<FixedComponent>& comps,
                                                    const OrbitPartition& orbits) {
  std::map<std::pair<IntMat, RatVec>, std::size_t> index;
  for (std::size_t i = 0; i < comps.size(); ++i)
    index.emplace(comps[i].key(), i);
  auto rank = [](const CurveLabel& l) {
    bool diagonal = (l.family == 1 || l.family == 2) && l.params[0] == l.params[1];
    return std::make_tuple(l.family, !diagonal, l.params, l.sup);
  };
  std::vector<std::optional<CurveLabel>> out(orbits.count());
  for (const auto& m : curve_family_members(f, t)) {
    auto it = index.find(m.component.key());
    if (it == index.end())
      continue;
    auto& slot = out[orbits.orbit_of[it->second]];
    if (!slot || rank(m.label) < rank(*slot))
      slot = m.label;
  }
  return out;
}

std::string to_string(const FamilySetup& f, const CurveLabel& l) {
  const std::string& tau = f.shape.tags[0];
  const std::string& tau3 = f.shape.tags[2];
  std::string head = "C^" + std::to_string(l.family);
  if (l.sup)
    head = "C^{" + std::to_string(l.family) + "," + format_value(*l.sup, tau) + "}";
  std::vector<std::string> ps;
  for (std::size_t i = 0; i < l.params.size(); ++i) {
    bool last_is_l = l.family >= 3;
    bool is_l = last_is_l && i + 1 == l.params.size();
    ps.push_back(format_value(l.params[i], is_l ? tau3 : tau));
  }
  std::string body;
  for (std::size_t i = 0; i < ps.size(); ++i)
    body += (i ? "," : "") + ps[i];
  return head + "_{" + body + "}";
}

std::string describe_component(const FamilySetup& f, const FixedComponent& c) {
  std::string out = "(";
  for (std::size_t i = 0; i < f.shape.complex_dim(); ++i)
    out += (i ? ", " : "") + format_value(factor_value(c.offset, i), f.shape.tags[i]);
  out += ")";
  if (c.dim_real() == 0)
    return out;
  out += " + <";
  auto basis = c.direction.basis_vectors();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    out += i ? ", [" : "[";
    for (std::size_t j = 0; j < basis[i].size(); ++j)
      out += (j ? "," : "") + basis[i][j].get_str();
    out += "]";
  }
  return out + ">";
}

}  // namespace cy
