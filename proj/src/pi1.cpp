#include "cy/pi1.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>

namespace cy {

namespace {

IntVec to_int(const RatVec& v) {
  IntVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!is_integral(v[i]))
      throw ConsistencyError("expected an integral vector");
    out[i] = v[i].get_num();
  }
  return out;
}

IntVec add(const IntVec& a, const IntVec& b) {
  IntVec out(a);
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] += b[i];
  return out;
}

IntVec neg(const IntVec& a) {
  IntVec out(a);
  for (auto& x : out)
    x = -x;
  return out;
}

IntMat minus_identity(const IntMat& m) {
  IntMat a = m;
  for (std::size_t i = 0; i < a.rows(); ++i)
    a(i, i) -= 1;
  return a;
}

}  // namespace

CrystalGroup::CrystalGroup(const TorusShape& shape, std::vector<AffineTorusMap> gens, std::size_t cap)
    : shape_(shape) {
  try {
    point_ = generate(shape, gens, cap);
  } catch (const NotFiniteUnderCap& e) {
    throw ConsistencyError(std::string("coset closure too large: ") + e.what());
  }
  for (const auto& g : gens)
    gens_.push_back(point_.index_of(g));
  identity_ = point_.index_of(AffineTorusMap::identity(shape));
}

const std::pair<std::size_t, IntVec>& CrystalGroup::product_entry(std::size_t a, std::size_t b) const {
  auto key = std::make_pair(a, b);
  auto it = products_.find(key);
  if (it != products_.end())
    return it->second;
  std::size_t ab = point_.index_of(cy::compose(point_[a], point_[b]));
  RatVec c = translation(a) + linear(a) * translation(b) - translation(ab);
  return products_.emplace(key, std::make_pair(ab, to_int(c))).first->second;
}

std::size_t CrystalGroup::product_index(std::size_t a, std::size_t b) const { return product_entry(a, b).first; }

const IntVec& CrystalGroup::correction(std::size_t a, std::size_t b) const { return product_entry(a, b).second; }

std::size_t CrystalGroup::inverse_index(std::size_t a) const {
  auto it = inverses_.find(a);
  if (it != inverses_.end())
    return it->second;
  std::size_t b = point_.index_of(cy::inverse(point_[a]));
  inverses_.emplace(a, b);
  return b;
}

CrystalElement CrystalGroup::identity() const { return {identity_, IntVec(rank(), Int(0))}; }

CrystalElement CrystalGroup::coset_rep(std::size_t g) const { return {g, IntVec(rank(), Int(0))}; }

CrystalElement CrystalGroup::lattice_translation(const IntVec& lambda) const { return {identity_, lambda}; }

CrystalElement CrystalGroup::multiply(const CrystalElement& x, const CrystalElement& y) const {
  const auto& [ab, c] = product_entry(x.g, y.g);
  return {ab, add(add(x.lambda, linear(x.g) * y.lambda), c)};
}

CrystalElement CrystalGroup::inverse(const CrystalElement& x) const {
  std::size_t ai = inverse_index(x.g);
  return {ai, neg(linear(ai) * add(x.lambda, correction(x.g, ai)))};
}

RatVec CrystalGroup::full_translation(const CrystalElement& x) const { return translation(x.g) + to_rat(x.lambda); }

CrystalGroup build_gamma(const FamilySetup& f, const std::vector<AffineTorusMap>& upsilon_lifts,
                         std::size_t upsilon_order) {
  std::vector<AffineTorusMap> gens = f.covering.generators();
  gens.insert(gens.end(), upsilon_lifts.begin(), upsilon_lifts.end());
  return CrystalGroup(f.shape, gens, f.covering.order() * std::max<std::size_t>(upsilon_order, 1));
}

bool has_fixed_point(const CrystalGroup& gamma, const CrystalElement& x) {
  return solvable_over_q(minus_identity(gamma.linear(x.g)), -gamma.full_translation(x));
}

bool FGamma::contains(const CrystalGroup& gamma, const CrystalElement& x) const {
  auto it = certificates.find(x.g);
  if (it == certificates.end())
    return false;
  CrystalElement d = gamma.multiply(x, gamma.inverse(it->second));
  return lattice.contains(d.lambda);
}

namespace {

struct Seed {
  CrystalElement element;
  std::vector<IntVec> directions;  // integer points of image(M - I)
};

// For the coset of g, the elements (M, v + lambda) with a fixed point are exactly
// seed * (image(M - I) meet Z^m), or there are none.
std::optional<Seed> seed_for(const CrystalGroup& gamma, std::size_t g) {
  std::size_t m = gamma.rank();
  IntMat a = minus_identity(gamma.linear(g));
  SnfResult r = snf(a);
  std::size_t rk = 0;
  while (rk < m && r.s(rk, rk) != 0)
    ++rk;
  RatVec y = r.u * gamma.translation(g);
  RatVec shift(m, Rat(0));
  for (std::size_t i = rk; i < m; ++i) {
    if (!is_integral(y[i]))
      return std::nullopt;
    shift[i] = -y[i];
  }
  IntMat uinv = inverse_unimodular(r.u);
  Seed s{{g, to_int(uinv * shift)}, {}};
  for (std::size_t j = 0; j < rk; ++j)
    s.directions.push_back(uinv.col(j));
  if (!has_fixed_point(gamma, s.element))
    throw ConsistencyError("seed without fixed point");
  return s;
}

}  // namespace

FGamma f_gamma(const CrystalGroup& gamma) {
  std::size_t m = gamma.rank();
  std::vector<Seed> seeds;
  for (std::size_t g = 0; g < gamma.coset_count(); ++g)
    if (g != gamma.identity_index())
      if (auto s = seed_for(gamma, g))
        seeds.push_back(*s);

  FGamma f;
  std::set<IntVec> lgens;
  f.certificates.emplace(gamma.identity_index(), gamma.identity());
  std::deque<std::size_t> queue{gamma.identity_index()};
  while (!queue.empty()) {
    std::size_t k = queue.front();
    queue.pop_front();
    for (const auto& s : seeds) {
      CrystalElement x = gamma.multiply(f.certificates.at(k), s.element);
      auto it = f.certificates.find(x.g);
      if (it == f.certificates.end()) {
        f.certificates.emplace(x.g, x);
        queue.push_back(x.g);
      } else {
        CrystalElement d = gamma.multiply(x, gamma.inverse(it->second));
        if (d.g != gamma.identity_index())
          throw ConsistencyError("Schreier element is not a translation");
        lgens.insert(d.lambda);
      }
    }
  }
  // the seeds generate the point image, so their (M - I)Z^m and directions together with
  // invariance under the point group give everything lattice conjugation contributes
  for (const auto& s : seeds) {
    for (const auto& w : s.directions)
      lgens.insert(w);
    IntMat a = minus_identity(gamma.linear(s.element.g));
    for (std::size_t j = 0; j < m; ++j)
      lgens.insert(a.col(j));
  }
  Sublattice acc(m);
  std::vector<IntVec> batch;
  auto flush = [&] {
    if (batch.empty())
      return;
    auto all = acc.basis_vectors();
    all.insert(all.end(), batch.begin(), batch.end());
    acc = Sublattice::from_generators(m, all);
    batch.clear();
  };
  for (const auto& v : lgens) {
    if (acc.contains(v))
      continue;
    batch.push_back(v);
    if (batch.size() >= 32)
      flush();
  }
  flush();
  for (bool changed = true; changed;) {
    changed = false;
    for (auto g : gamma.generator_indices())
      for (const auto& b : acc.basis_vectors()) {
        IntVec y = gamma.linear(g) * b;
        if (!acc.contains(y)) {
          batch.push_back(y);
          changed = true;
        }
      }
    flush();
  }
  f.lattice = acc;
  for (const auto& kv : f.certificates)
    f.point_image.push_back(kv.first);

  // normality certificate
  std::vector<CrystalElement> gens;
  for (auto g : gamma.generator_indices())
    gens.push_back(gamma.coset_rep(g));
  for (std::size_t j = 0; j < m; ++j) {
    IntVec e(m, Int(0));
    e[j] = 1;
    gens.push_back(gamma.lattice_translation(e));
  }
  for (const auto& h : gens) {
    for (const auto& v : f.lattice.basis_vectors())
      if (!f.lattice.contains(gamma.linear(h.g) * v))
        throw ConsistencyError("F meet Z^m is not invariant");
    for (const auto& [k, cert] : f.certificates)
      if (!f.contains(gamma, gamma.multiply(gamma.multiply(h, cert), gamma.inverse(h))))
        throw ConsistencyError("F is not normal");
  }
  return f;
}

namespace {

// Spanning-tree presentation of Gamma: generators e_1..e_m, x_s for each generator s.
struct TreePresentation {
  std::size_t width = 0;
  std::vector<IntVec> expr;  // x_g in terms of the generators
  std::vector<IntVec> relations;
};

TreePresentation tree_presentation(const CrystalGroup& gamma) {
  std::size_t m = gamma.rank();
  const auto& gens = gamma.generator_indices();
  TreePresentation p;
  p.width = m + gens.size();
  std::vector<bool> seen(gamma.coset_count(), false);
  p.expr.assign(gamma.coset_count(), IntVec(p.width, Int(0)));
  std::deque<std::size_t> queue{gamma.identity_index()};
  seen[gamma.identity_index()] = true;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> edges;
  while (!queue.empty()) {
    std::size_t a = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      std::size_t b = gamma.product_index(a, gens[i]);
      if (!seen[b]) {
        seen[b] = true;
        IntVec e = p.expr[a];
        e[m + i] += 1;
        const IntVec& c = gamma.correction(a, gens[i]);
        for (std::size_t j = 0; j < m; ++j)
          e[j] -= c[j];
        p.expr[b] = e;
        queue.push_back(b);
      } else {
        edges.emplace_back(a, i, b);
      }
    }
  }
  // (a)(s) = (correction)(b) for the edges closing a cycle
  for (auto [a, i, b] : edges) {
    IntVec r = p.expr[a];
    r[m + i] += 1;
    const IntVec& c = gamma.correction(a, gens[i]);
    for (std::size_t j = 0; j < m; ++j)
      r[j] -= c[j];
    for (std::size_t j = 0; j < p.width; ++j)
      r[j] -= p.expr[b][j];
    p.relations.push_back(r);
  }
  // x_s e_j x_s^-1 = M_s e_j
  for (auto s : gens) {
    IntMat a = minus_identity(gamma.linear(s));
    for (std::size_t j = 0; j < m; ++j) {
      IntVec r(p.width, Int(0));
      for (std::size_t i = 0; i < m; ++i)
        r[i] = a(i, j);
      p.relations.push_back(r);
    }
  }
  return p;
}

}  // namespace

QuotientInvariants abelianization(const CrystalGroup& gamma, const FGamma& f) {
  std::size_t m = gamma.rank();
  TreePresentation p = tree_presentation(gamma);
  for (const auto& [k, cert] : f.certificates) {
    IntVec r = p.expr[k];
    for (std::size_t j = 0; j < m; ++j)
      r[j] += cert.lambda[j];
    p.relations.push_back(r);
  }
  for (const auto& v : f.lattice.basis_vectors()) {
    IntVec r(p.width, Int(0));
    std::copy(v.begin(), v.end(), r.begin());
    p.relations.push_back(r);
  }
  return cokernel_invariants(IntMat::from_rows(p.relations, p.width), p.width);
}

QuotientInvariants abelianization(const CrystalGroup& gamma) {
  FGamma trivial;
  trivial.lattice = Sublattice(gamma.rank());
  trivial.point_image = {gamma.identity_index()};
  trivial.certificates.emplace(gamma.identity_index(), gamma.identity());
  return abelianization(gamma, trivial);
}

QuotientInvariants table_abelianization(const std::vector<std::vector<std::size_t>>& table) {
  std::size_t n = table.size();
  std::vector<IntVec> rels;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      IntVec r(n, Int(0));
      r[a] += 1;
      r[b] += 1;
      r[table[a][b]] -= 1;
      rels.push_back(r);
    }
  return cokernel_invariants(IntMat::from_rows(rels, n), n);
}

namespace {

std::string abelian_label(const QuotientInvariants& q) {
  if (q.torsion.empty() && q.free_rank == 0)
    return "{0}";
  std::string out;
  for (const auto& d : q.torsion)
    out += (out.empty() ? "" : " x ") + ("Z/" + d.get_str());
  for (std::size_t i = 0; i < q.free_rank; ++i)
    out += (out.empty() ? "" : " x ") + std::string("Z");
  return out;
}

}  // namespace

std::string identify_finite_group(const std::vector<std::vector<std::size_t>>& table, std::size_t identity) {
  std::size_t n = table.size();
  bool abelian = true;
  for (std::size_t a = 0; a < n && abelian; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (table[a][b] != table[b][a]) {
        abelian = false;
        break;
      }
  if (abelian)
    return abelian_label(table_abelianization(table));
  std::size_t involutions = 0;
  for (std::size_t a = 0; a < n; ++a)
    if (a != identity && table[a][a] == identity)
      ++involutions;
  if (n == 8 && involutions == 5)
    return "D4";
  if (n == 8 && involutions == 1)
    return "Q8";
  return "order " + std::to_string(n) + ", nonabelian, " + std::to_string(involutions) + " involutions";
}

RatLattice RatLattice::from_generators(std::size_t k, const std::vector<RatVec>& gens) {
  Int den = 1;
  for (const auto& g : gens)
    den = lcm(den, lcm_denominator(g));
  std::vector<IntVec> ints;
  for (const auto& g : gens) {
    RatVec s(g);
    for (auto& x : s)
      x *= den;
    ints.push_back(to_int(s));
  }
  Sublattice s = Sublattice::from_generators(k, ints);
  RatLattice out;
  for (const auto& row : s.basis_vectors()) {
    RatVec v(k);
    for (std::size_t i = 0; i < k; ++i)
      v[i] = make_rat(row[i], den);
    out.basis.push_back(v);
  }
  return out;
}

bool RatLattice::contains(const RatVec& x) const {
  std::vector<RatVec> g = basis;
  std::size_t k = x.size();
  RatLattice a = from_generators(k, g);
  g.push_back(x);
  return from_generators(k, g) == a;
}

RatLattice scaled(const RatLattice& l, const Rat& c) {
  std::vector<RatVec> g;
  for (auto v : l.basis) {
    for (auto& x : v)
      x *= c;
    g.push_back(v);
  }
  return RatLattice::from_generators(l.basis.empty() ? 0 : l.basis[0].size(), g);
}

std::optional<std::string> name_z3_lattice(const RatLattice& l) {
  if (l.rank() != 2 || l.basis[0].size() != 2)
    return std::nullopt;
  Rat h = make_rat(1, 2);
  std::vector<std::pair<std::string, RatLattice>> named = {
      {"Λ3", RatLattice::from_generators(2, {{1, 0}, {0, 1}})},
      {"Λ3'", RatLattice::from_generators(2, {{1, 0}, {0, h}})},
      {"Λ3''", RatLattice::from_generators(2, {{1, 0}, {h, h}})},
      {"Λ3'''", RatLattice::from_generators(2, {{h, 0}, {0, 1}})},
  };
  for (const auto& [name, lat] : named) {
    if (lat == l)
      return name;
  }
  for (const auto& [name, lat] : named) {
    Rat c = 1;
    for (int j = 1; j <= 4; ++j) {
      c *= 2;
      if (scaled(lat, c) == l || scaled(lat, 1 / c) == l)
        return name;
    }
  }
  return std::nullopt;
}

std::string to_string(CoverClass c) {
  switch (c) {
    case CoverClass::TypeA:
      return "TypeA";
    case CoverClass::TypeK:
      return "TypeK";
    case CoverClass::Finite:
      return "Finite";
    default:
      return "Unclassified";
  }
}

namespace {

using Membership = std::function<bool(const CrystalElement&)>;

struct FiniteQuotient {
  std::vector<CrystalElement> reps;
  std::vector<std::vector<std::size_t>> table;
  std::size_t identity = 0;
};

std::vector<CrystalElement> gamma_generators(const CrystalGroup& gamma) {
  std::vector<CrystalElement> gens;
  for (auto g : gamma.generator_indices())
    gens.push_back(gamma.coset_rep(g));
  for (std::size_t j = 0; j < gamma.rank(); ++j) {
    IntVec e(gamma.rank(), Int(0));
    e[j] = 1;
    gens.push_back(gamma.lattice_translation(e));
  }
  return gens;
}

// Cosets of a normal subgroup of finite index, given by a membership test.
std::optional<FiniteQuotient> enumerate_quotient(const CrystalGroup& gamma, const Membership& in_sub,
                                                 std::size_t cap) {
  FiniteQuotient q;
  auto gens = gamma_generators(gamma);
  std::vector<CrystalElement> inv_reps;
  auto find = [&](const CrystalElement& x) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < q.reps.size(); ++i)
      if (in_sub(gamma.multiply(inv_reps[i], x)))
        return i;
    return std::nullopt;
  };
  q.reps.push_back(gamma.identity());
  inv_reps.push_back(gamma.identity());
  for (std::size_t head = 0; head < q.reps.size(); ++head) {
    for (const auto& s : gens) {
      CrystalElement y = gamma.multiply(q.reps[head], s);
      if (find(y))
        continue;
      if (q.reps.size() >= cap)
        return std::nullopt;
      q.reps.push_back(y);
      inv_reps.push_back(gamma.inverse(y));
    }
  }
  std::size_t n = q.reps.size();
  q.table.assign(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      auto c = find(gamma.multiply(q.reps[a], q.reps[b]));
      if (!c)
        throw ConsistencyError("quotient is not closed");
      q.table[a][b] = *c;
    }
  return q;
}

// Action of Gamma on V = R^m / (F meet Z^m) (x) R.
struct VAction {
  std::size_t k = 0;
  IntMat proj, lift;
  std::vector<std::size_t> coords;
  std::vector<IntMat> mbar;
  std::vector<RatVec> vbar;
  RatLattice translations;
  std::vector<std::size_t> translation_cosets;  // g with mbar = I
  // pure translations of Gamma along V; set when V is a coordinate space and F acts trivially on V
  bool split = false;
  RatLattice elliptic;
  std::vector<std::size_t> pure_cosets;
};

VAction v_action(const CrystalGroup& gamma, const FGamma& f) {
  std::size_t m = gamma.rank();
  Sublattice sat = saturation(f.lattice);
  VAction a;
  a.k = m - sat.rank();
  std::set<std::size_t> in_sat;
  bool coordinate = true;
  for (const auto& row : sat.basis_vectors()) {
    std::size_t nz = 0, at = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (row[i] != 0) {
        ++nz;
        at = i;
      }
    if (nz != 1 || row[at] != 1)
      coordinate = false;
    in_sat.insert(at);
  }
  if (coordinate) {
    for (std::size_t i = 0; i < m; ++i)
      if (!in_sat.count(i))
        a.coords.push_back(i);
    a.proj = IntMat(a.k, m);
    for (std::size_t r = 0; r < a.k; ++r)
      a.proj(r, a.coords[r]) = 1;
    a.lift = a.proj.transpose();
  } else {
    Complement c = complement(sat);
    a.proj = c.proj;
    a.lift = c.lift;
  }
  std::vector<RatVec> tgens;
  for (std::size_t i = 0; i < a.k; ++i) {
    RatVec e(a.k, Rat(0));
    e[i] = 1;
    tgens.push_back(e);
  }
  IntMat id = IntMat::identity(a.k);
  for (std::size_t g = 0; g < gamma.coset_count(); ++g) {
    a.mbar.push_back(a.proj * gamma.linear(g) * a.lift);
    a.vbar.push_back(a.proj * gamma.translation(g));
    if (a.mbar.back() == id) {
      a.translation_cosets.push_back(g);
      tgens.push_back(a.vbar.back());
    }
  }
  a.translations = RatLattice::from_generators(a.k, tgens);
  if (a.coords.size() != a.k)
    return a;
  for (const auto& [k, c] : f.certificates) {
    RatVec vc = a.proj * gamma.full_translation(c);
    if (!(a.mbar[k] == id) || vc != RatVec(a.k, Rat(0)))
      return a;
  }
  a.split = true;
  IntMat idm = IntMat::identity(m);
  std::vector<RatVec> egens(tgens.begin(), tgens.begin() + static_cast<long>(a.k));
  for (std::size_t g = 0; g < gamma.coset_count(); ++g) {
    if (!(gamma.linear(g) == idm) || !is_integral(gamma.translation(g) - a.lift * a.vbar[g]))
      continue;
    a.pure_cosets.push_back(g);
    egens.push_back(a.vbar[g]);
  }
  a.elliptic = RatLattice::from_generators(a.k, egens);
  return a;
}

// Coordinates of x in the basis of l, when integral.
std::optional<IntVec> lattice_coordinates(const RatLattice& l, const RatVec& x) {
  std::size_t k = l.rank();
  // Gaussian elimination on [B^T | x]
  std::vector<RatVec> a(k, RatVec(k + 1));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j)
      a[i][j] = l.basis[j][i];
    a[i][k] = x[i];
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    while (p < k && a[p][c] == 0)
      ++p;
    if (p == k)
      throw ConsistencyError("singular lattice basis");
    std::swap(a[p], a[c]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c || a[r][c] == 0)
        continue;
      Rat t = a[r][c] / a[c][c];
      for (std::size_t j = c; j <= k; ++j)
        a[r][j] -= t * a[c][j];
    }
  }
  IntVec out(k);
  for (std::size_t i = 0; i < k; ++i) {
    Rat v = a[i][k] / a[i][i];
    if (!is_integral(v))
      return std::nullopt;
    out[i] = v.get_num();
  }
  return out;
}

CrystalElement power(const CrystalGroup& gamma, const CrystalElement& x, Int n) {
  CrystalElement base = x;
  if (n < 0) {
    base = gamma.inverse(x);
    n = -n;
  }
  CrystalElement out = gamma.identity();
  while (n > 0) {
    if (n % 2 == 1)
      out = gamma.multiply(out, base);
    base = gamma.multiply(base, base);
    n /= 2;
  }
  return out;
}

struct Pi1Context {
  const CrystalGroup& gamma;
  const FGamma& f;
  VAction v;
  std::vector<CrystalElement> kernel;  // elements acting trivially on V, distinct modulo F

  bool same(const CrystalElement& x, const CrystalElement& y) const {
    return f.contains(gamma, gamma.multiply(x, gamma.inverse(y)));
  }
  bool commute(const CrystalElement& x, const CrystalElement& y) const {
    return same(gamma.multiply(x, y), gamma.multiply(y, x));
  }
  RatVec v_translation(const CrystalElement& x) const {
    return v.proj * gamma.full_translation(x);
  }
  CrystalElement with_translation(const RatVec& t) const {
    for (auto g : v.translation_cosets) {
      RatVec d = t - v.vbar[g];
      if (is_integral(d))
        return {g, to_int(v.lift * d)};
    }
    throw ConsistencyError("translation outside the maximal lattice");
  }
};

std::vector<CrystalElement> kernel_elements(const CrystalGroup& gamma, const FGamma& f, const VAction& v) {
  std::size_t m = gamma.rank();
  Sublattice sat = saturation(f.lattice);
  // torsion sat / L
  std::vector<IntVec> torsion{IntVec(m, Int(0))};
  for (std::size_t head = 0; head < torsion.size(); ++head)
    for (const auto& b : sat.basis_vectors()) {
      IntVec y = f.lattice.reduce(add(torsion[head], b));
      if (std::find(torsion.begin(), torsion.end(), y) == torsion.end())
        torsion.push_back(y);
    }
  std::vector<CrystalElement> out;
  Pi1Context ctx{gamma, f, v, {}};
  for (auto g : v.translation_cosets) {
    if (!is_integral(v.vbar[g]))
      continue;
    IntVec base = to_int(v.lift * (-v.vbar[g]));
    for (const auto& t : torsion) {
      CrystalElement x{g, add(base, t)};
      bool dup = false;
      for (const auto& y : out)
        if (ctx.same(x, y)) {
          dup = true;
          break;
        }
      if (!dup)
        out.push_back(x);
    }
  }
  return out;
}

// Labels of pi1 / Lambda~ over the normal free abelian lifts Lambda~ of lattice.
std::set<std::string> quotient_labels(const Pi1Context& ctx, const RatLattice& lattice) {
  std::set<std::string> labels;
  const auto& gamma = ctx.gamma;
  std::size_t k = ctx.v.k;
  if (lattice.rank() != k)
    return labels;
  for (const auto& b : lattice.basis)
    if (!ctx.v.translations.contains(b))
      return labels;
  for (const auto& mb : ctx.v.mbar)
    for (const auto& b : lattice.basis)
      if (!lattice.contains(mb * b))
        return labels;
  std::vector<CrystalElement> base;
  for (const auto& b : lattice.basis)
    base.push_back(ctx.with_translation(b));
  std::size_t nk = ctx.kernel.size();
  std::size_t choices = 1;
  for (std::size_t i = 0; i < k; ++i) {
    choices *= nk;
    if (choices > 4096)
      return labels;
  }
  auto gens = gamma_generators(gamma);
  for (std::size_t code = 0; code < choices; ++code) {
    std::vector<CrystalElement> lift;
    std::size_t c = code;
    for (std::size_t i = 0; i < k; ++i) {
      lift.push_back(gamma.multiply(base[i], ctx.kernel[c % nk]));
      c /= nk;
    }
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i)
      for (std::size_t j = i + 1; j < k && ok; ++j)
        ok = ctx.commute(lift[i], lift[j]);
    if (!ok)
      continue;
    Membership in_sub = [&](const CrystalElement& x) {
      if (!(ctx.v.mbar[x.g] == IntMat::identity(k)))
        return false;
      auto n = lattice_coordinates(lattice, ctx.v_translation(x));
      if (!n)
        return false;
      CrystalElement y = gamma.identity();
      for (std::size_t i = 0; i < k; ++i)
        y = gamma.multiply(y, power(gamma, lift[i], (*n)[i]));
      return ctx.same(x, y);
    };
    for (const auto& h : gens) {
      CrystalElement hi = gamma.inverse(h);
      for (std::size_t i = 0; i < k && ok; ++i)
        ok = in_sub(gamma.multiply(gamma.multiply(h, lift[i]), hi));
      if (!ok)
        break;
    }
    if (!ok)
      continue;
    auto q = enumerate_quotient(gamma, in_sub, 1024);
    if (q)
      labels.insert(identify_finite_group(q->table, q->identity));
  }
  return labels;
}

// Label of pi1 modulo its pure translations along V.
std::optional<std::string> elliptic_quotient_label(const Pi1Context& ctx) {
  const auto& gamma = ctx.gamma;
  const auto& v = ctx.v;
  if (!v.split)
    return std::nullopt;
  IntMat id = IntMat::identity(v.k);
  Membership in_sub = [&](const CrystalElement& x) {
    if (!(v.mbar[x.g] == id))
      return false;
    RatVec t = ctx.v_translation(x);
    if (!v.elliptic.contains(t))
      return false;
    for (auto g : v.pure_cosets) {
      if (!is_integral(t - v.vbar[g]))
        continue;
      RatVec w = gamma.translation(g) - v.lift * v.vbar[g];
      CrystalElement y{g, to_int(v.lift * (t - v.vbar[g]) - w)};
      return ctx.same(x, y);
    }
    throw ConsistencyError("elliptic translation without a pure coset");
  };
  auto q = enumerate_quotient(gamma, in_sub, 4096);
  if (!q)
    return std::nullopt;
  return identify_finite_group(q->table, q->identity);
}

std::string join(const std::set<std::string>& s, const std::string& sep) {
  std::string out;
  for (const auto& x : s)
    out += (out.empty() ? "" : sep) + x;
  return out;
}

}  // namespace

Pi1Descriptor pi1_quotient(const CrystalGroup& gamma, const FGamma& f) {
  Pi1Descriptor d;
  d.abelianization = abelianization(gamma, f);
  std::size_t m = gamma.rank();
  if (f.lattice.rank() == m) {
    d.finite = true;
    Membership in_f = [&](const CrystalElement& x) { return f.contains(gamma, x); };
    auto q = enumerate_quotient(gamma, in_f, 4096);
    if (!q)
      throw ConsistencyError("finite quotient exceeds enumeration cap");
    d.order = q->reps.size();
    d.label = identify_finite_group(q->table, q->identity);
    d.abelian = d.label == "{0}" || d.label.rfind("Z/", 0) == 0;
    if (d.abelian) {
      auto qa = table_abelianization(q->table);
      if (qa.torsion != d.abelianization.torsion || qa.free_rank != d.abelianization.free_rank)
        throw ConsistencyError("abelianization disagrees with the enumerated group");
    }
    d.cover = classify_universal_cover(d);
    return d;
  }
  Pi1Context ctx{gamma, f, v_action(gamma, f), {}};
  ctx.kernel = kernel_elements(gamma, f, ctx.v);
  d.lattice_rank = ctx.v.k;
  d.normal_lattice = ctx.v.translations;
  d.translations = ctx.v.split ? ctx.v.elliptic : ctx.v.translations;
  d.v_coordinates = ctx.v.coords;
  std::set<IntMat> linear_parts(ctx.v.mbar.begin(), ctx.v.mbar.end());
  d.point_group_order = linear_parts.size();
  d.kernel_order = ctx.kernel.size();
  std::size_t n = gamma.shape().complex_dim();
  std::vector<std::size_t> last{2 * n - 2, 2 * n - 1};
  if (d.v_coordinates == last) {
    d.z3_lattice = name_z3_lattice(d.translations);
  } else if (d.lattice_rank == m && n == 3) {
    // section z1 = z2 = 0 of the maximal lattice
    Int den = 1;
    for (const auto& v : d.translations.basis)
      den = lcm(den, lcm_denominator(v));
    std::vector<IntVec> scaled_rows;
    for (const auto& v : d.translations.basis) {
      RatVec s(v);
      for (auto& x : s)
        x *= den;
      scaled_rows.push_back(to_int(s));
    }
    Sublattice big = Sublattice::from_generators(m, scaled_rows);
    IntVec e4(m, Int(0)), e5(m, Int(0));
    e4[4] = 1;
    e5[5] = 1;
    Sublattice plane = Sublattice::from_generators(m, {e4, e5});
    Sublattice sec = lattice_intersection(big, plane);
    std::vector<RatVec> sgens;
    for (const auto& r : sec.basis_vectors())
      sgens.push_back({make_rat(r[4], den), make_rat(r[5], den)});
    d.z3_lattice = name_z3_lattice(RatLattice::from_generators(2, sgens));
  }
  auto labels = quotient_labels(ctx, d.normal_lattice);
  d.normal_quotient = labels.empty() ? "none" : join(labels, " | ");
  auto el = elliptic_quotient_label(ctx);
  d.point_quotient = el ? *el : d.normal_quotient;
  d.cover = classify_universal_cover(d);
  return d;
}

Pi1Descriptor pi1_quotient(const CrystalGroup& gamma) { return pi1_quotient(gamma, f_gamma(gamma)); }

CoverClass classify_universal_cover(const Pi1Descriptor& d) {
  if (d.finite)
    return CoverClass::Finite;
  if (d.lattice_rank == 6)
    return CoverClass::TypeA;
  if (d.lattice_rank == 2)
    return CoverClass::TypeK;
  return CoverClass::Unclassified;
}

bool admits_sequence(const CrystalGroup& gamma, const FGamma& f, const RatLattice& lattice, const std::string& label) {
  if (f.lattice.rank() == gamma.rank())
    return false;
  Pi1Context ctx{gamma, f, v_action(gamma, f), {}};
  ctx.kernel = kernel_elements(gamma, f, ctx.v);
  return quotient_labels(ctx, lattice).count(label) != 0;
}

std::string to_string(const Pi1Descriptor& d) {
  if (d.finite)
    return d.label;
  std::string lat;
  if (d.lattice_rank == 2 && d.z3_lattice)
    lat = *d.z3_lattice;
  else if (d.z3_lattice)
    lat = "Z^" + std::to_string(d.lattice_rank) + "[z3: " + *d.z3_lattice + "]";
  else
    lat = "Z^" + std::to_string(d.lattice_rank);
  return "0->" + lat + "->π1->" + d.point_quotient + "->0";
}

}  // namespace cy
