#include "cy/fixloc.hpp"
#include "cy/pi1.hpp"

#include "doctest.h"
#include "table_data.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace cy;

namespace {

Rat q(long n, long d) { return make_rat(n, d); }

struct Setup {
  FamilySetup f;
  AutGroupDescription aut;
  explicit Setup(FamilySetup fs) : f(std::move(fs)), aut(automorphism_group(f)) {}
};

const Setup& d4() {
  static Setup s(build_d4());
  return s;
}

const Setup& z2() {
  static Setup s(build_z2());
  return s;
}

CrystalGroup gamma_of(const Setup& s, const AutSubgroup& u) {
  return build_gamma(s.f, generator_lifts(s.aut, u), u.order());
}

CrystalGroup gamma_of(const Setup& s, const table_data::Row& row) {
  return gamma_of(s, table_data::subgroup_of(s.f, s.aut, row));
}

std::vector<IntVec> unit_box(std::size_t m) {
  std::vector<IntVec> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i)
    total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    IntVec lam(m);
    std::size_t c = code;
    for (std::size_t j = 0; j < m; ++j) {
      lam[j] = static_cast<long>(c % 3) - 1;
      c /= 3;
    }
    out.push_back(lam);
  }
  return out;
}

// Full multiplication-table presentation of Gamma / F with F seeded by the
// fixed-point elements over the box {-1,0,1}^m.
QuotientInvariants box_oracle(const CrystalGroup& g) {
  std::size_t m = g.rank(), n = g.coset_count(), w = m + n;
  std::set<IntVec> pending;
  Sublattice acc(w);
  auto flush = [&] {
    auto b = acc.basis_vectors();
    b.insert(b.end(), pending.begin(), pending.end());
    acc = Sublattice::from_generators(w, b);
    pending.clear();
  };
  auto add = [&](const IntVec& r) {
    pending.insert(r);
    if (pending.size() > 256)
      flush();
  };
  auto box = unit_box(m);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      IntVec r(w, Int(0));
      r[m + a] += 1;
      r[m + b] += 1;
      r[m + g.product_index(a, b)] -= 1;
      const auto& c = g.correction(a, b);
      for (std::size_t j = 0; j < m; ++j)
        r[j] -= c[j];
      add(r);
    }
    for (std::size_t j = 0; j < m; ++j) {
      IntVec r(w, Int(0));
      for (std::size_t i = 0; i < m; ++i)
        r[i] = g.linear(a)(i, j) - (i == j ? 1 : 0);
      add(r);
    }
    if (a == g.identity_index()) {
      IntVec r(w, Int(0));
      r[m + a] = 1;
      add(r);
    }
    for (const auto& lam : box) {
      if (!has_fixed_point(g, CrystalElement{a, lam}))
        continue;
      IntVec r(w, Int(0));
      r[m + a] = 1;
      for (std::size_t j = 0; j < m; ++j)
        r[j] = lam[j];
      add(r);
    }
  }
  flush();
  return quotient_invariants(acc);
}

std::vector<Int> ints(std::initializer_list<long> xs) {
  std::vector<Int> out;
  for (long x : xs)
    out.push_back(x);
  return out;
}

bool upsilon_free(const Setup& s, const AutSubgroup& u) {
  for (auto c : u.elements)
    if (!s.aut.classes[c].identity && !is_free(s.f, s.aut.classes[c]))
      return false;
  return true;
}

RatLattice lattice2(std::initializer_list<RatVec> gens) { return RatLattice::from_generators(2, gens); }

}  // namespace

TEST_CASE("coset counts of gamma") {
  AutSubgroup trivial = generate_subgroup(d4().aut, {});
  CHECK(gamma_of(d4(), trivial).coset_count() == 16);
  table_data::Row half{{{table_data::z, table_data::z, table_data::half}}, 0, ""};
  CHECK(gamma_of(d4(), half).coset_count() == 32);
  CHECK(gamma_of(z2(), generate_subgroup(z2().aut, {})).coset_count() == 4);
}

TEST_CASE("gamma closure above the cap is a consistency error") {
  table_data::Row half{{{table_data::z, table_data::z, table_data::half}}, 0, ""};
  auto u = table_data::subgroup_of(d4().f, d4().aut, half);
  CHECK_THROWS_AS(build_gamma(d4().f, generator_lifts(d4().aut, u), 1), ConsistencyError);
}

TEST_CASE("gamma multiplication is a group law") {
  std::vector<std::size_t> all;
  for (std::size_t c = 0; c < d4().aut.classes.size(); ++c)
    all.push_back(c);
  auto g = gamma_of(d4(), generate_subgroup(d4().aut, all));
  CHECK(g.coset_count() == 256);
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, g.coset_count() - 1);
  std::uniform_int_distribution<long> coord(-3, 3);
  auto random_element = [&] {
    IntVec lam(g.rank());
    for (auto& x : lam)
      x = coord(rng);
    return CrystalElement{pick(rng), lam};
  };
  for (int trial = 0; trial < 300; ++trial) {
    auto x = random_element(), y = random_element(), z = random_element();
    CHECK(g.multiply(g.multiply(x, y), z) == g.multiply(x, g.multiply(y, z)));
    CHECK(g.multiply(x, g.inverse(x)) == g.identity());
    CHECK(g.multiply(g.identity(), x) == x);
    // forgetting translations is a homomorphism
    CHECK(g.linear(g.multiply(x, y).g) == g.linear(x.g) * g.linear(y.g));
    // translation parts compose as affine maps
    RatVec t = g.full_translation(x) + g.linear(x.g) * g.full_translation(y);
    CHECK(g.full_translation(g.multiply(x, y)) == t);
  }
}

TEST_CASE("fixed points of crystal elements") {
  auto g = gamma_of(d4(), generate_subgroup(d4().aut, {}));
  IntVec e(6, Int(0));
  e[4] = 1;
  CHECK_FALSE(has_fixed_point(g, g.lattice_translation(e)));
  CHECK(has_fixed_point(g, g.identity()));

  TorusShape shape = z2_shape();
  IntMat minus = IntMat::identity(3);
  for (std::size_t i = 0; i < 3; ++i)
    minus(i, i) = -1;
  AffineTorusMap flip(shape, minus, {q(1, 3), q(1, 2), 0, q(1, 4), q(3, 8), q(5, 7)});
  CrystalGroup c(shape, {flip}, 2);
  for (const auto& lam : unit_box(6)) {
    if (lam[0] != 0 && lam[3] != 0)
      continue;
    for (std::size_t k = 0; k < c.coset_count(); ++k)
      if (!(c.linear(k) == IntMat::identity(6)))
        CHECK(has_fixed_point(c, CrystalElement{k, lam}));
  }
}

TEST_CASE("crystal fixed points agree with fixloc on every automorphism class") {
  std::vector<std::size_t> all;
  for (std::size_t c = 0; c < d4().aut.classes.size(); ++c)
    all.push_back(c);
  auto g = gamma_of(d4(), generate_subgroup(d4().aut, all));
  auto box = unit_box(6);
  std::vector<bool> fixes(d4().aut.classes.size(), false);
  for (std::size_t k = 0; k < g.coset_count(); ++k) {
    std::size_t c = d4().aut.class_of(g.point()[k]);
    if (fixes[c])
      continue;
    for (const auto& lam : box)
      if (has_fixed_point(g, CrystalElement{k, lam})) {
        fixes[c] = true;
        break;
      }
  }
  for (std::size_t c = 0; c < fixes.size(); ++c) {
    const auto& cls = d4().aut.classes[c];
    CAPTURE(class_label(d4().f, cls));
    CHECK(fixes[c] == (cls.identity || !is_free(d4().f, cls)));
  }
}

TEST_CASE("abelianized fundamental group of the d4 manifold") {
  auto g = gamma_of(d4(), generate_subgroup(d4().aut, {}));
  auto f = f_gamma(g);
  CHECK(f.trivial());
  auto a = abelianization(g, f);
  CHECK(a.free_rank == 0);
  CHECK(a.torsion == ints({2, 4, 4}));
  auto b = box_oracle(g);
  CHECK(b.torsion == a.torsion);
  CHECK(b.free_rank == a.free_rank);
}

TEST_CASE("lattice alone has free abelianization of rank six") {
  CrystalGroup g(d4_shape(), {}, 1);
  CHECK(g.coset_count() == 1);
  auto a = abelianization(g);
  CHECK(a.free_rank == 6);
  CHECK(a.torsion.empty());
  auto d = pi1_quotient(g);
  CHECK_FALSE(d.finite);
  CHECK(d.lattice_rank == 6);
  CHECK(d.point_quotient == "{0}");
  CHECK(d.cover == CoverClass::TypeA);
}

TEST_CASE("z2z2 manifold: abelianization agrees with the presentation oracle") {
  auto g = gamma_of(z2(), generate_subgroup(z2().aut, {}));
  auto f = f_gamma(g);
  CHECK(f.trivial());
  auto a = abelianization(g, f);
  auto b = box_oracle(g);
  CHECK(a.torsion == b.torsion);
  CHECK(a.free_rank == b.free_rank);
  CHECK(a.free_rank == 0);
  // the holonomy is nontrivial, so Gamma itself is not abelian
  auto x = g.coset_rep(g.generator_indices()[0]), y = g.coset_rep(g.generator_indices()[1]);
  IntVec e(6, Int(0));
  e[0] = 1;
  auto t = g.lattice_translation(e);
  CHECK_FALSE(g.multiply(x, t) == g.multiply(t, x));
  (void)y;
}

TEST_CASE("abelianization agrees with the presentation oracle on all d4 subgroups of order at most two") {
  for (const auto& u : all_subgroups(d4().aut, 2)) {
    auto g = gamma_of(d4(), u);
    auto f = f_gamma(g);
    auto a = abelianization(g, f);
    auto b = box_oracle(g);
    CAPTURE(u.generators.size());
    CHECK(a.torsion == b.torsion);
    CHECK(a.free_rank == b.free_rank);
  }
}

TEST_CASE("abelianization agrees with the presentation oracle on sample table rows") {
  auto t10 = table_data::table10();
  auto t12 = table_data::table12();
  for (const auto* row : {&t10[14], &t10[22], &t10[29], &t12[6]}) {
    auto g = gamma_of(d4(), *row);
    auto a = abelianization(g, f_gamma(g));
    auto b = box_oracle(g);
    CHECK(a.torsion == b.torsion);
    CHECK(a.free_rank == b.free_rank);
  }
}

TEST_CASE("every fixed-point element of the box lies in F") {
  for (const auto& u : all_subgroups(d4().aut, 2)) {
    auto g = gamma_of(d4(), u);
    auto f = f_gamma(g);
    for (std::size_t k = 0; k < g.coset_count(); ++k)
      for (const auto& lam : unit_box(6)) {
        CrystalElement x{k, lam};
        if (has_fixed_point(g, x))
          CHECK(f.contains(g, x));
      }
  }
}

TEST_CASE("F is normal") {
  for (const auto& u : all_subgroups(d4().aut, 2)) {
    auto g = gamma_of(d4(), u);
    auto f = f_gamma(g);
    std::vector<CrystalElement> gens;
    for (auto k : g.generator_indices())
      gens.push_back(g.coset_rep(k));
    for (std::size_t j = 0; j < 6; ++j) {
      IntVec e(6, Int(0));
      e[j] = 1;
      gens.push_back(g.lattice_translation(e));
    }
    for (const auto& [k, cert] : f.certificates) {
      CHECK(f.contains(g, cert));
      for (const auto& h : gens)
        CHECK(f.contains(g, g.multiply(g.multiply(h, cert), g.inverse(h))));
    }
    for (const auto& row : f.lattice.basis_vectors())
      for (const auto& h : gens)
        CHECK(f.contains(g, g.multiply(g.multiply(h, g.lattice_translation(row)), g.inverse(h))));
  }
}

TEST_CASE("F is trivial exactly when the action is free") {
  for (const auto& u : all_subgroups(d4().aut, 4)) {
    auto g = gamma_of(d4(), u);
    CHECK(f_gamma(g).trivial() == upsilon_free(d4(), u));
  }
  std::size_t free_count = 0;
  for (const auto& u : all_subgroups(z2().aut, 2)) {
    if (u.order() == 1)
      continue;
    auto g = gamma_of(z2(), u);
    bool free = upsilon_free(z2(), u);
    free_count += free;
    CHECK(f_gamma(g).trivial() == free);
  }
  CHECK(free_count == 26);
}

TEST_CASE("abelianization does not depend on the generating set") {
  std::mt19937 rng(11);
  for (const auto& row : table_data::table10()) {
    auto u = table_data::subgroup_of(d4().f, d4().aut, row);
    auto g0 = gamma_of(d4(), u);
    auto base = abelianization(g0, f_gamma(g0));
    auto whole = abelianization(g0);
    std::vector<AffineTorusMap> lifts;
    for (auto c : u.elements)
      if (!d4().aut.classes[c].identity) {
        const auto& ls = d4().aut.classes[c].lifts;
        lifts.push_back(ls[rng() % ls.size()]);
      }
    std::shuffle(lifts.begin(), lifts.end(), rng);
    auto gens = d4().f.covering.generators();
    gens.insert(gens.begin(), lifts.begin(), lifts.end());
    CrystalGroup g(d4().f.shape, gens, d4().f.covering.order() * u.order());
    CHECK(g.coset_count() == 64);
    auto other = abelianization(g, f_gamma(g));
    CHECK(other.torsion == base.torsion);
    CHECK(other.free_rank == base.free_rank);
    auto other_whole = abelianization(g);
    CHECK(other_whole.torsion == whole.torsion);
    CHECK(other_whole.free_rank == whole.free_rank);
  }
}

TEST_CASE("finite group identification") {
  auto cyclic = [](std::size_t n) {
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        t[a][b] = (a + b) % n;
    return t;
  };
  auto product = [](const std::vector<std::vector<std::size_t>>& x, const std::vector<std::vector<std::size_t>>& y) {
    std::size_t n = x.size(), m = y.size();
    std::vector<std::vector<std::size_t>> t(n * m, std::vector<std::size_t>(n * m));
    for (std::size_t a = 0; a < n * m; ++a)
      for (std::size_t b = 0; b < n * m; ++b)
        t[a][b] = x[a / m][b / m] * m + y[a % m][b % m];
    return t;
  };
  CHECK(identify_finite_group(cyclic(1), 0) == "{0}");
  CHECK(identify_finite_group(cyclic(2), 0) == "Z/2");
  CHECK(identify_finite_group(product(cyclic(2), cyclic(2)), 0) == "Z/2 x Z/2");
  CHECK(identify_finite_group(product(cyclic(4), cyclic(2)), 0) == "Z/2 x Z/4");
  auto a = table_abelianization(product(cyclic(4), cyclic(2)));
  CHECK(a.torsion == ints({2, 4}));

  // dihedral and quaternion groups of order 8 as signed permutation matrices
  auto table_of = [](const std::vector<IntMat>& elems) {
    std::vector<std::vector<std::size_t>> t(elems.size(), std::vector<std::size_t>(elems.size()));
    for (std::size_t a = 0; a < elems.size(); ++a)
      for (std::size_t b = 0; b < elems.size(); ++b) {
        IntMat p = elems[a] * elems[b];
        t[a][b] = static_cast<std::size_t>(std::find(elems.begin(), elems.end(), p) - elems.begin());
      }
    return t;
  };
  auto close = [](std::vector<IntMat> gens) {
    std::vector<IntMat> elems{IntMat::identity(gens[0].rows())};
    for (std::size_t h = 0; h < elems.size(); ++h)
      for (const auto& g : gens) {
        IntMat p = elems[h] * g;
        if (std::find(elems.begin(), elems.end(), p) == elems.end())
          elems.push_back(p);
      }
    return elems;
  };
  IntMat rot(2, 2), ref(2, 2);
  rot(0, 1) = -1;
  rot(1, 0) = 1;
  ref(0, 0) = 1;
  ref(1, 1) = -1;
  auto d = close({rot, ref});
  CHECK(d.size() == 8);
  CHECK(identify_finite_group(table_of(d), 0) == "D4");
  // quaternion units i, j as 4x4 integer matrices
  IntMat i4(4, 4), j4(4, 4);
  i4(1, 0) = 1;
  i4(0, 1) = -1;
  i4(3, 2) = -1;
  i4(2, 3) = 1;
  j4(2, 0) = 1;
  j4(0, 2) = -1;
  j4(3, 1) = 1;
  j4(1, 3) = -1;
  auto qg = close({i4, j4});
  CHECK(qg.size() == 8);
  CHECK(identify_finite_group(table_of(qg), 0) == "Q8");
}

TEST_CASE("rational lattices and the named z3 lattices") {
  RatVec one{1, 0}, tau{0, 1};
  RatLattice l3 = lattice2({one, tau});
  RatLattice l3p = lattice2({one, {0, q(1, 2)}});
  RatLattice l3pp = lattice2({one, {q(1, 2), q(1, 2)}});
  RatLattice l3ppp = lattice2({{q(1, 2), 0}, tau});
  CHECK(name_z3_lattice(l3) == std::optional<std::string>("Λ3"));
  CHECK(name_z3_lattice(l3p) == std::optional<std::string>("Λ3'"));
  CHECK(name_z3_lattice(l3pp) == std::optional<std::string>("Λ3''"));
  CHECK(name_z3_lattice(l3ppp) == std::optional<std::string>("Λ3'''"));
  CHECK(name_z3_lattice(scaled(l3, q(1, 2))) == std::optional<std::string>("Λ3"));
  CHECK(name_z3_lattice(scaled(l3ppp, 2)) == std::optional<std::string>("Λ3'''"));
  CHECK_FALSE(name_z3_lattice(lattice2({{q(1, 3), 0}, tau})).has_value());
  CHECK(l3p.contains({q(3, 1), q(5, 2)}));
  CHECK_FALSE(l3p.contains({q(1, 2), 0}));
  CHECK(lattice2({one, tau, {q(1, 2), q(1, 2)}}) == l3pp);
  CHECK(l3pp.rank() == 2);
}

TEST_CASE("cover classification") {
  Pi1Descriptor d;
  d.finite = true;
  CHECK(classify_universal_cover(d) == CoverClass::Finite);
  d.finite = false;
  d.lattice_rank = 6;
  CHECK(classify_universal_cover(d) == CoverClass::TypeA);
  d.lattice_rank = 2;
  CHECK(classify_universal_cover(d) == CoverClass::TypeK);
  d.lattice_rank = 4;
  CHECK(classify_universal_cover(d) == CoverClass::Unclassified);
  CHECK(to_string(CoverClass::TypeK) == "TypeK");
}

TEST_CASE("finite fundamental groups of order-two quotients") {
  using namespace table_data;
  auto pi1 = [](const Translation& t) {
    return pi1_quotient(gamma_of(d4(), Row{{t}, 0, ""}));
  };
  auto a = pi1({tau, tau1, half});
  CHECK(a.finite);
  CHECK(a.order == std::optional<std::size_t>(1));
  CHECK(to_string(a) == "{0}");
  CHECK(a.cover == CoverClass::Finite);
  for (const auto& t3 : {z, tau, tau1}) {
    auto b = pi1({tau, tau, t3});
    CHECK(to_string(b) == "Z/2 x Z/4");
    CHECK(b.order == std::optional<std::size_t>(8));
    CHECK(b.abelianization.torsion == ints({2, 4}));
    CHECK(to_string(pi1({tau, tau1, t3})) == "Z/2");
  }
  CHECK(to_string(pi1({tau, tau, half})) == "Z/2");
  CHECK(to_string(pi1({z, half, half})) == "Z/2");
}

TEST_CASE("order-two quotient by (0, 1/2, t3) with t3 not 1/2 has pi1 Z/2 x Z/4") {
  using namespace table_data;
  for (const auto& t3 : {z, tau, tau1}) {
    auto g = gamma_of(d4(), Row{{{z, half, t3}}, 0, ""});
    auto d = pi1_quotient(g);
    CHECK(d.finite);
    CHECK(to_string(d) == "Z/2 x Z/4");
    auto b = box_oracle(g);
    CHECK(b.torsion == ints({2, 4}));
  }
}

TEST_CASE("infinite fundamental groups") {
  using namespace table_data;
  RatLattice l3p = lattice2({{1, 0}, {0, q(1, 2)}});

  auto a = pi1_quotient(gamma_of(d4(), Row{{{z, z, tau}}, 0, ""}));
  CHECK_FALSE(a.finite);
  CHECK(a.lattice_rank == 6);
  CHECK(a.cover == CoverClass::TypeA);
  CHECK(a.point_quotient == "D4");
  CHECK(a.z3_lattice == std::optional<std::string>("Λ3'"));
  CHECK(to_string(a) == "0->Z^6[z3: Λ3']->π1->D4->0");
  // pure translations: the torus lattice with z3 refined, plus (1/2, 1/2, 0)
  RatVec w(6, Rat(0));
  w[0] = q(1, 2);
  w[2] = q(1, 2);
  CHECK(a.translations.contains(w));
  CHECK(a.abelianization.torsion == ints({2, 4, 4}));

  auto b = pi1_quotient(gamma_of(d4(), Row{{{z, z, tau1}}, 0, ""}));
  CHECK(to_string(b) == "0->Z^6[z3: Λ3'']->π1->D4->0");
  CHECK(b.cover == CoverClass::TypeA);

  auto g = gamma_of(d4(), Row{{{z, z, half}}, 0, ""});
  auto f = f_gamma(g);
  auto c = pi1_quotient(g, f);
  CHECK(c.lattice_rank == 2);
  CHECK(c.cover == CoverClass::TypeK);
  CHECK(c.v_coordinates == std::vector<std::size_t>{4, 5});
  RatLattice l3ppp = lattice2({{q(1, 2), 0}, {0, 1}});
  CHECK(c.translations == l3ppp);
  CHECK(to_string(c) == "0->Λ3'''->π1->Z/2 x Z/2->0");
  // r acts on z3 by 1/4 and on the K3 factor nontrivially
  CHECK(c.normal_lattice == lattice2({{q(1, 4), 0}, {0, 1}}));
  CHECK(c.normal_quotient == "Z/2");
  CHECK(admits_sequence(g, f, l3ppp, "Z/2 x Z/2"));
  CHECK_FALSE(admits_sequence(g, f, l3p, "Z/2 x Z/2"));

  auto h = gamma_of(d4(), Row{{{z, z, tau}, {z, z, tau1}}, 0, ""});
  auto e = pi1_quotient(h);
  CHECK(e.cover == CoverClass::TypeK);
  CHECK(e.translations == lattice2({{q(1, 2), 0}, {0, q(1, 2)}}));
  CHECK(e.z3_lattice == std::optional<std::string>("Λ3"));
  CHECK(e.point_quotient == "Z/2 x Z/2");
}

TEST_CASE("period relabeling symmetry") {
  // tau' -> tau' + 1 swaps tau'/2 and (tau'+1)/2 on the third factor
  using namespace table_data;
  auto swap3 = [](const FactorValue& v) { return v == tau ? tau1 : v == tau1 ? tau : v; };
  for (const auto& row : table_data::table10()) {
    Row other = row;
    for (auto& t : other.gens)
      t.t3 = swap3(t.t3);
    auto a = pi1_quotient(gamma_of(d4(), row));
    auto b = pi1_quotient(gamma_of(d4(), other));
    CHECK(a.finite == b.finite);
    CHECK(a.abelianization.torsion == b.abelianization.torsion);
    if (a.finite)
      CHECK(a.label == b.label);
  }
}
