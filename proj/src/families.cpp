#include "cy/families.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace cy {

std::string to_string(FamilyTag tag) { return tag == FamilyTag::D4 ? "d4" : "z2z2"; }

TorusShape d4_shape() { return TorusShape{{"τ", "τ", "τ'"}}; }
TorusShape z2_shape() { return TorusShape{{"τ1", "τ2", "τ3"}}; }

namespace {

FactorValue reduce(const FactorValue& v) { return {frac(v.re), frac(v.im)}; }

FactorValue add(const FactorValue& a, const FactorValue& b) { return reduce({a.re + b.re, a.im + b.im}); }

FactorValue scale(const FactorValue& a, long k) { return reduce({a.re * k, a.im * k}); }

bool is_zero(const FactorValue& v) { return frac(v.re) == 0 && frac(v.im) == 0; }

bool killed_by(const FactorValue& v, long n) { return is_zero(scale(v, n)); }

RatVec pack(const std::vector<FactorValue>& vs) {
  RatVec t;
  for (const auto& v : vs) {
    t.push_back(v.re);
    t.push_back(v.im);
  }
  return t;
}

void check_free(const FiniteAffineGroup& g) {
  for (const auto& e : g.elements())
    if (!e.is_identity() && has_fixed_point(e))
      throw NotFree("covering group element " + format_map(g.shape(), e) + " has fixed points");
}

// Signed permutation matrices that only permute factors with equal periods.
std::vector<IntMat> signed_permutations(const TorusShape& shape) {
  std::size_t n = shape.complex_dim();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<IntMat> out;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i)
      if (!shape.shares_period(i, p[i]))
        ok = false;
    if (!ok)
      continue;
    for (std::size_t signs = 0; signs < (1u << n); ++signs) {
      IntMat c(n, n);
      for (std::size_t i = 0; i < n; ++i)
        c(i, p[i]) = (signs >> i) & 1 ? -1 : 1;
      out.push_back(c);
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

FamilySetup build_d4(const FactorValue& u1, const FactorValue& u2, const FactorValue& u3) {
  FactorValue a = reduce(u1), b = reduce(u2), c = reduce(u3);
  if (!killed_by(a, 2) || !killed_by(b, 2))
    throw InvalidParameters("u1 and u2 must be 2-torsion points");
  if (is_zero(a) && is_zero(b))
    throw InvalidParameters("(u1, u2) must be nonzero");
  if (a == b)
    throw InvalidParameters("u1 and u2 must differ");
  if (!killed_by(c, 4) || is_zero(c))
    throw InvalidParameters("u3 must be a nonzero 4-torsion point");
  FamilySetup f;
  f.tag = FamilyTag::D4;
  f.shape = d4_shape();
  f.u = {a, b, c};
  FactorValue zero{0, 0};
  AffineTorusMap r(f.shape, IntMat{{0, 1, 0}, {-1, 0, 0}, {0, 0, 1}}, pack({zero, zero, c}));
  AffineTorusMap s(f.shape, IntMat{{0, 1, 0}, {1, 0, 0}, {0, 0, -1}}, pack({a, b, zero}));
  f.covering = generate(f.shape, {r, s}, 512, {"r", "s"});
  if (f.covering.order() != 16)
    throw InvalidParameters("<r, s> has order " + std::to_string(f.covering.order()) + ", expected 16");
  std::size_t translations = 0;
  for (const auto& e : f.covering.elements())
    if (e.is_translation() && !e.is_identity())
      ++translations;
  AffineTorusMap w = compose(s, s);
  if (translations != 1 || !w.is_translation() || w.is_identity())
    throw InvalidParameters("s^2 must be the unique nontrivial translation");
  check_free(f.covering);
  return f;
}

FamilySetup build_d4() {
  Rat h = make_rat(1, 2);
  return build_d4({h, h}, {0, h}, {make_rat(1, 4), 0});
}

FamilySetup build_z2(const FactorValue& u1, const FactorValue& u2, const FactorValue& u3, bool non_isogenous) {
  std::vector<FactorValue> u = {reduce(u1), reduce(u2), reduce(u3)};
  for (std::size_t i = 0; i < 3; ++i)
    if (!killed_by(u[i], 2) || is_zero(u[i]))
      throw InvalidParameters("u" + std::to_string(i + 1) + " must be a nonzero 2-torsion point");
  FamilySetup f;
  f.tag = FamilyTag::Z2Z2;
  f.shape = z2_shape();
  f.u = u;
  f.non_isogenous = non_isogenous;
  FactorValue zero{0, 0};
  AffineTorusMap a(f.shape, IntMat{{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}}, pack({zero, zero, u[2]}));
  AffineTorusMap b(f.shape, IntMat{{-1, 0, 0}, {0, 1, 0}, {0, 0, -1}}, pack({u[0], u[1], zero}));
  f.covering = generate(f.shape, {a, b}, 512, {"a", "b"});
  if (f.covering.order() != 4)
    throw InvalidParameters("<a, b> does not have order 4");
  for (const auto& e : f.covering.elements())
    if (e.is_translation() && !e.is_identity())
      throw InvalidParameters("covering group contains a translation");
  check_free(f.covering);
  return f;
}

FamilySetup build_z2(bool non_isogenous) {
  Rat h = make_rat(1, 2);
  return build_z2({h, 0}, {h, 0}, {h, 0}, non_isogenous);
}

std::size_t AutGroupDescription::class_of(const AffineTorusMap& f) const {
  auto it = element_class.find(f);
  if (it == element_class.end())
    throw ConsistencyError("map does not normalize the covering group");
  return it->second;
}

std::size_t AutGroupDescription::multiply(std::size_t a, std::size_t b) const {
  return class_of(compose(classes.at(a).rep, classes.at(b).rep));
}

AutGroupDescription automorphism_group(const FamilySetup& f) {
  const FiniteAffineGroup& h = f.covering;
  std::set<IntMat> point_group;
  for (const auto& e : h.elements())
    point_group.insert(e.complex_linear());
  std::set<AffineTorusMap> normalizer;
  std::size_t dim = f.shape.real_dim();
  for (const IntMat& c : signed_permutations(f.shape)) {
    IntMat ci = inverse_unimodular(c);
    bool normalizes = true;
    for (const auto& l : point_group)
      if (!point_group.count(c * l * ci))
        normalizes = false;
    if (!normalizes)
      continue;
    IntMat cr = real_form(c);
    // targets h_k with linear part c L_k c^-1 for each generator g_k
    std::vector<std::vector<const AffineTorusMap*>> targets;
    for (const auto& g : h.generators()) {
      std::vector<const AffineTorusMap*> ts;
      IntMat l = c * g.complex_linear() * ci;
      for (const auto& e : h.elements())
        if (e.complex_linear() == l)
          ts.push_back(&e);
      targets.push_back(ts);
    }
    std::size_t ng = targets.size();
    std::vector<std::size_t> pick(ng, 0);
    for (;;) {
      // e = (c, t) with e g e^-1 = h: (I - L') t = t_h - c t_g
      IntMat a(ng * dim, dim);
      RatVec b;
      for (std::size_t k = 0; k < ng; ++k) {
        const AffineTorusMap& tgt = *targets[k][pick[k]];
        IntMat lhs = IntMat::identity(dim) - tgt.real_linear();
        for (std::size_t i = 0; i < dim; ++i)
          for (std::size_t j = 0; j < dim; ++j)
            a(k * dim + i, j) = lhs(i, j);
        RatVec rhs = tgt.translation() - cr * h.generators()[k].translation();
        b.insert(b.end(), rhs.begin(), rhs.end());
      }
      SolutionSet sol = solve_mod_lattice(a, b);
      if (!sol.empty && sol.dim() != 0)
        throw ConsistencyError("normalizer is not finite");
      for (const auto& t : sol.offsets)
        normalizer.insert(AffineTorusMap(f.shape, c, t));
      std::size_t k = 0;
      while (k < ng && ++pick[k] == targets[k].size())
        pick[k++] = 0;
      if (k == ng)
        break;
    }
  }
  AutGroupDescription d;
  d.normalizer_elements.assign(normalizer.begin(), normalizer.end());
  for (const auto& e : d.normalizer_elements)
    for (const auto& g : h.elements())
      if (!h.contains(conjugate(g, e)))
        throw ConsistencyError("normalizer element fails to normalize");

  std::set<AffineTorusMap> seen;
  for (const auto& e : d.normalizer_elements) {
    if (seen.count(e))
      continue;
    AutClass cls;
    for (const auto& g : h.elements()) {
      AffineTorusMap x = compose(e, g);
      if (!normalizer.count(x))
        throw ConsistencyError("normalizer is not closed under the covering group");
      cls.lifts.push_back(x);
      seen.insert(x);
    }
    std::sort(cls.lifts.begin(), cls.lifts.end());
    cls.rep = cls.lifts.front();
    for (const auto& x : cls.lifts) {
      if (x.is_identity())
        cls.identity = true;
      if (x.is_translation() && (!cls.translation_rep || x.translation() < cls.translation_rep->translation()))
        cls.translation_rep = x;
    }
    cls.det = det(cls.rep.complex_linear());
    AffineTorusMap p = cls.rep;
    cls.order = 1;
    while (!h.contains(p)) {
      p = compose(p, cls.rep);
      if (++cls.order > normalizer.size())
        throw ConsistencyError("automorphism of unbounded order");
    }
    cls.free_closed_form = free_closed_form(f, cls);
    d.classes.push_back(std::move(cls));
  }
  auto key = [](const AutClass& c) {
    return std::make_tuple(!c.identity, !c.translation_rep.has_value(),
                           c.translation_rep ? c.translation_rep->translation() : RatVec{}, c.rep);
  };
  std::sort(d.classes.begin(), d.classes.end(), [&](const AutClass& x, const AutClass& y) { return key(x) < key(y); });
  for (std::size_t i = 0; i < d.classes.size(); ++i)
    for (const auto& x : d.classes[i].lifts)
      d.element_class.emplace(x, i);
  d.quotient_order = d.classes.size();
  if (d.quotient_order * h.order() != d.normalizer_elements.size())
    throw ConsistencyError("normalizer is not a union of cosets");
  d.exponent = 1;
  for (const auto& c : d.classes)
    d.exponent = std::lcm(d.exponent, c.order);
  d.lower_bound = f.tag == FamilyTag::Z2Z2 && !f.non_isogenous;
  return d;
}

bool free_closed_form(const FamilySetup& f, const AutClass& c) {
  if (c.identity || !c.translation_rep)
    return false;
  const RatVec& t = c.translation_rep->translation();
  FactorValue t1 = factor_value(t, 0), t2 = factor_value(t, 1), t3 = factor_value(t, 2);
  if (f.tag == FamilyTag::D4) {
    // t1 = t2 avoiding u1, u2 and t3 avoiding 0 and 2*u3
    return t1 == t2 && !(t1 == f.u[0]) && !(t1 == f.u[1]) && !is_zero(t3) && !(t3 == scale(f.u[2], 2));
  }
  return !(t1 == f.u[0]) && !(t2 == f.u[1]) && !(t3 == f.u[2]);
}

std::vector<std::size_t> free_automorphisms(const FamilySetup&, const AutGroupDescription& aut) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < aut.classes.size(); ++i)
    if (aut.classes[i].free_closed_form)
      out.push_back(i);
  return out;
}

std::string class_label(const FamilySetup& f, const AutClass& c) {
  if (!c.translation_rep)
    return format_map(f.shape, c.rep);
  const RatVec& t = c.translation_rep->translation();
  std::string out = "(";
  for (std::size_t i = 0; i < f.shape.complex_dim(); ++i)
    out += (i ? ", " : "") + format_value(factor_value(t, i), f.shape.tags[i]);
  return out + ")";
}

std::size_t moduli_dimension(const FiniteAffineGroup& g) {
  Int sum = 0;
  for (const auto& e : g.elements()) {
    Int tr = 0;
    const IntMat& c = e.complex_linear();
    for (std::size_t i = 0; i < c.rows(); ++i)
      tr += c(i, i);
    sum += tr * tr;
  }
  Int n(static_cast<unsigned long>(g.order()));
  if (sum % n != 0)
    throw ConsistencyError("character average is not integral");
  return Int(sum / n).get_ui();
}

std::size_t moduli_dimension(const FamilySetup& f) { return moduli_dimension(f.covering); }

bool ModuliLabel::equivalent(const ModuliLabel& o) const {
  return tag == o.tag && second.a == o.second.a && is_integral(Rat(second.b - o.second.b));
}

std::string to_string(const AffineExpr& e) {
  Int c = lcm_denominator({e.a, e.b});
  Int a = Rat(e.a * c).get_num(), b = Rat(e.b * c).get_num();
  std::string num;
  if (a == 1)
    num = "mu'";
  else if (a == -1)
    num = "-mu'";
  else if (a != 0)
    num = a.get_str() + "*mu'";
  if (b != 0)
    num += (b > 0 && !num.empty() ? "+" : "") + b.get_str();
  if (num.empty())
    num = "0";
  if (c == 1)
    return num;
  if (b == 0 || a == 0)
    return num + "/" + c.get_str();
  return "(" + num + ")/" + c.get_str();
}

std::string to_string(const ModuliLabel& m) { return "(mu, " + to_string(m.second) + ")"; }

ModuliLabel double_cover_map(const ModuliLabel& m) {
  if (m.tag != FamilyTag::D4)
    throw UnsupportedError("the degree-two map is defined on the D4 family only");
  ModuliLabel r = m;
  r.second = {m.second.a * 2, m.second.b * 2};
  return r;
}

std::pair<ModuliLabel, ModuliLabel> preimages(const ModuliLabel& m) {
  if (m.tag != FamilyTag::D4)
    throw UnsupportedError("the degree-two map is defined on the D4 family only");
  ModuliLabel p = m, q = m;
  p.second = {m.second.a / 2, m.second.b / 2};
  q.second = {m.second.a / 2, m.second.b / 2 + make_rat(1, 2)};
  return {p, q};
}

bool AutSubgroup::contains(std::size_t c) const { return std::binary_search(elements.begin(), elements.end(), c); }

bool AutSubgroup::volume_preserving(const AutGroupDescription& aut) const {
  for (auto c : elements)
    if (!aut.classes[c].volume_preserving())
      return false;
  return true;
}

namespace {

std::vector<std::size_t> close_classes(const AutGroupDescription& aut, const std::vector<std::size_t>& gens) {
  std::set<std::size_t> seen{aut.identity_class()};
  std::deque<std::size_t> queue{aut.identity_class()};
  while (!queue.empty()) {
    std::size_t x = queue.front();
    queue.pop_front();
    for (auto g : gens) {
      std::size_t y = aut.multiply(x, g);
      if (seen.insert(y).second)
        queue.push_back(y);
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

AutSubgroup generate_subgroup(const AutGroupDescription& aut, const std::vector<std::size_t>& gens) {
  for (auto g : gens)
    if (g >= aut.classes.size())
      throw std::out_of_range("class index out of range");
  AutSubgroup u;
  u.elements = close_classes(aut, gens);
  std::vector<std::size_t> span{aut.identity_class()};
  for (auto x : u.elements) {
    if (std::binary_search(span.begin(), span.end(), x))
      continue;
    u.generators.push_back(x);
    span = close_classes(aut, u.generators);
  }
  return u;
}

std::vector<AutSubgroup> all_subgroups(const AutGroupDescription& aut, std::size_t max_order) {
  std::map<std::vector<std::size_t>, AutSubgroup> found;
  AutSubgroup trivial = generate_subgroup(aut, {});
  found.emplace(trivial.elements, trivial);
  std::deque<AutSubgroup> queue{trivial};
  while (!queue.empty()) {
    AutSubgroup s = queue.front();
    queue.pop_front();
    for (std::size_t x = 0; x < aut.classes.size(); ++x) {
      if (s.contains(x))
        continue;
      auto gens = s.generators;
      gens.push_back(x);
      AutSubgroup t = generate_subgroup(aut, gens);
      if (t.order() > max_order || found.count(t.elements))
        continue;
      found.emplace(t.elements, t);
      queue.push_back(t);
    }
  }
  std::vector<AutSubgroup> out;
  for (auto& kv : found)
    out.push_back(kv.second);
  std::sort(out.begin(), out.end(), [](const AutSubgroup& a, const AutSubgroup& b) {
    if (a.order() != b.order())
      return a.order() < b.order();
    return a.generators < b.generators;
  });
  return out;
}

std::vector<AffineTorusMap> generator_lifts(const AutGroupDescription& aut, const AutSubgroup& u) {
  std::vector<AffineTorusMap> out;
  for (auto g : u.generators) {
    const auto& c = aut.classes[g];
    out.push_back(c.translation_rep ? *c.translation_rep : c.rep);
  }
  return out;
}

}  // namespace cy
