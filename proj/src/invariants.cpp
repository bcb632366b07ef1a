#include "cy/invariants.hpp"

#include <set>

namespace cy {

Int exterior_trace(const IntMat& c, std::size_t p) {
  std::size_t n = c.rows();
  if (p > n)
    throw DimensionError("exterior power above dimension");
  if (p == 0)
    return 1;
  Int total = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != p)
      continue;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1)
        idx.push_back(i);
    IntMat minor(p, p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j)
        minor(i, j) = c(idx[i], idx[j]);
    total += det(minor);
  }
  return total;
}

int invariant_hodge(const FiniteAffineGroup& g, std::size_t p, std::size_t q) {
  std::size_t n = g.shape().complex_dim();
  if (p > n || q > n)
    throw DimensionError("Hodge index above dimension");
  Int sum = 0;
  for (const auto& e : g.elements()) {
    const IntMat& c = e.complex_linear();
    // c has integer entries, so its conjugate has the same traces
    sum += exterior_trace(c, p) * exterior_trace(c, q);
  }
  Int order = static_cast<unsigned long>(g.order());
  if (sum % order != 0)
    throw ConsistencyError("character average is not integral");
  Int v = sum / order;
  if (v < 0)
    throw ConsistencyError("negative invariant dimension");
  return static_cast<int>(v.get_si());
}

HodgeDiamondSlice invariant_hodge_slice(const FiniteAffineGroup& g) {
  HodgeDiamondSlice h;
  h.h10 = invariant_hodge(g, 1, 0);
  h.h20 = invariant_hodge(g, 2, 0);
  h.h30 = invariant_hodge(g, 3, 0);
  h.h11 = invariant_hodge(g, 1, 1);
  h.h21 = invariant_hodge(g, 2, 1);
  return h;
}

FiniteAffineGroup upsilon_cover_group(const FamilySetup& f, const AutGroupDescription& aut, const AutSubgroup& u) {
  std::vector<AffineTorusMap> gens = f.covering.generators();
  for (const auto& l : generator_lifts(aut, u))
    gens.push_back(l);
  return generate(f.shape, gens, f.covering.order() * u.order());
}

int twisted_curve_sum(const FamilySetup& f, const AutGroupDescription& aut, const AutSubgroup& u) {
  auto lifts = generator_lifts(aut, u);
  int sum = 0;
  for (auto c : u.elements) {
    const AutClass& cls = aut.classes[c];
    if (cls.identity || !cls.volume_preserving())
      continue;
    sum += static_cast<int>(fixed_locus_in_quotient(f, cls, lifts).upsilon_orbits->count());
  }
  return sum;
}

int isolated_point_count(const FamilySetup& f, const AutGroupDescription& aut, const AutSubgroup& u) {
  if (f.tag != FamilyTag::Z2Z2)
    throw UnsupportedError("isolated point count is defined for the Z2Z2 family");
  if (u.volume_preserving(aut))
    throw UnsupportedError("Upsilon has no non-symplectic element");
  FiniteAffineGroup g = upsilon_cover_group(f, aut, u);
  std::size_t n = f.shape.complex_dim();
  IntMat minus = IntMat::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    minus(i, i) = -1;
  std::set<RatVec> points;
  for (const auto& e : g.elements()) {
    if (!(e.complex_linear() == minus))
      continue;
    SolutionSet s = fixed_points(e);
    if (s.empty)
      continue;
    if (s.dim() != 0)
      throw ConsistencyError("-I fixes a positive-dimensional set");
    for (const auto& x : s.offsets)
      points.insert(frac(x));
  }
  std::set<RatVec> seen;
  int orbits = 0;
  for (const auto& p : points) {
    if (seen.count(p))
      continue;
    ++orbits;
    std::vector<RatVec> stack{p};
    seen.insert(p);
    while (!stack.empty()) {
      RatVec x = stack.back();
      stack.pop_back();
      for (const auto& h : g.generators()) {
        RatVec y = frac(h.apply(x));
        if (!points.count(y))
          throw ConsistencyError("isolated fixed points are not permuted");
        if (seen.insert(y).second)
          stack.push_back(y);
      }
    }
  }
  return orbits;
}

Rat isolated_point_formula(std::size_t upsilon_order) {
  if (upsilon_order < 2)
    throw std::invalid_argument("formula needs |Upsilon| >= 2");
  Int num = 1;
  for (std::size_t i = 0; i < upsilon_order + 2; ++i)
    num *= 2;
  return make_rat(num, static_cast<unsigned long>(upsilon_order - 1));
}

HodgeDiamondSlice orbifold_hodge(const FamilySetup& f, const AutGroupDescription& aut, const AutSubgroup& u) {
  HodgeDiamondSlice base = invariant_hodge_slice(upsilon_cover_group(f, aut, u));
  if (base.h10 != 0 || base.h20 != 0)
    throw ConsistencyError("quotient has holomorphic one- or two-forms");
  int sigma = twisted_curve_sum(f, aut, u);
  HodgeDiamondSlice h;
  if (u.volume_preserving(aut)) {
    if (base.h30 != 1 || base.h11 != base.h21)
      throw ConsistencyError("volume-preserving quotient without a symmetric invariant slice");
    h.h30 = 1;
    h.h11 = base.h11 + sigma;
    h.h21 = base.h21 + sigma;
    return h;
  }
  int p = isolated_point_count(f, aut, u);
  if (base.h30 != 0 || base.h21 != 0)
    throw ConsistencyError("non-symplectic quotient keeps (3,0) or (2,1) forms");
  h.h30 = 0;
  h.h11 = base.h11 + sigma + p;
  h.h21 = sigma + p;
  return h;
}

int euler_char(const HodgeDiamondSlice& h) {
  return 2 - 4 * h.h10 + 4 * h.h20 + 2 * h.h11 - 2 * h.h30 - 2 * h.h21;
}

std::string to_string(QuotientClass c) {
  switch (c) {
    case QuotientClass::CrepantCalabiYau:
      return "CrepantCalabiYau";
    case QuotientClass::NegativeKodaira:
      return "NegativeKodaira";
    case QuotientClass::ZeroKodairaNontrivialCanonical:
      return "ZeroKodairaNontrivialCanonical";
    default:
      return "SmoothFreeQuotient";
  }
}

QuotientClass quotient_class(const FamilySetup& f, const AutGroupDescription& aut, const AutSubgroup& u) {
  if (u.volume_preserving(aut)) {
    for (auto c : u.elements)
      if (!aut.classes[c].identity && !is_free(f, aut.classes[c]))
        return QuotientClass::CrepantCalabiYau;
    return QuotientClass::SmoothFreeQuotient;
  }
  for (auto c : u.elements)
    if (!aut.classes[c].volume_preserving() && surface_fixing_profile(f, aut.classes[c]).fixes_surfaces)
      return QuotientClass::NegativeKodaira;
  return QuotientClass::ZeroKodairaNontrivialCanonical;
}

QuotientReport classify_quotient(const FamilySetup& f, const AutGroupDescription& aut, const AutSubgroup& u) {
  QuotientReport r;
  r.classification = quotient_class(f, aut, u);
  r.hodge = orbifold_hodge(f, aut, u);
  r.euler = euler_char(r.hodge);
  CrystalGroup gamma = build_gamma(f, generator_lifts(aut, u), u.order());
  r.pi1 = pi1_quotient(gamma);
  r.picard.rank = r.hodge.h11;
  r.picard.torsion = r.pi1.abelianization.torsion;
  return r;
}

PicardStructure picard_structure(const FamilySetup& f) {
  PicardStructure p;
  p.rank = invariant_hodge(f.covering, 1, 1);
  CrystalGroup gamma(f.shape, f.covering.generators(), std::max<std::size_t>(f.covering.order(), 1));
  p.torsion = abelianization(gamma).torsion;
  return p;
}

}  // namespace cy
