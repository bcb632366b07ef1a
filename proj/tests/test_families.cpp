#include "cy/families.hpp"

#include "doctest.h"

#include <set>

using namespace cy;

namespace {

Rat h(long n, long d = 2) { return make_rat(n, d); }

std::vector<FactorValue> two_torsion() { return {{0, 0}, {h(1), 0}, {0, h(1)}, {h(1), h(1)}}; }

RatVec pack(const FactorValue& a, const FactorValue& b, const FactorValue& c) {
  return {a.re, a.im, b.re, b.im, c.re, c.im};
}

bool normalizes(const FiniteAffineGroup& g, const AffineTorusMap& e) {
  for (const auto& x : g.elements())
    if (!g.contains(conjugate(x, e)))
      return false;
  return true;
}

// dim of {X : C X C^T = X for all g}, the invariants of V (x) V
std::size_t invariant_tensor_dim(const FiniteAffineGroup& g) {
  std::size_t n = g.shape().complex_dim();
  std::size_t n2 = n * n;
  IntMat stacked(g.order() * n2, n2);
  std::size_t row = 0;
  for (const auto& e : g.elements()) {
    const IntMat& c = e.complex_linear();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j, ++row)
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = 0; l < n; ++l)
            stacked(row, k * n + l) = c(i, k) * c(j, l) - ((i == k && j == l) ? 1 : 0);
  }
  return n2 - rank(stacked);
}

}  // namespace

TEST_CASE("d4 builder") {
  auto f = build_d4();
  CHECK(f.covering.order() == 16);
  CHECK(f.covering.generator_labels() == std::vector<std::string>{"r", "s"});
  for (const auto& e : f.covering.elements())
    if (!e.is_identity())
      CHECK_FALSE(has_fixed_point(e));
  CHECK_THROWS_AS(build_d4({0, h(1)}, {0, h(1)}, {h(1, 4), 0}), InvalidParameters);
  CHECK_THROWS_AS(build_d4({h(1), h(1)}, {0, h(1)}, {0, 0}), InvalidParameters);
  CHECK_THROWS_AS(build_d4({h(1), h(1)}, {0, h(1)}, {h(1, 8), 0}), InvalidParameters);
  CHECK_THROWS_AS(build_d4({0, 0}, {0, 0}, {h(1, 4), 0}), InvalidParameters);
  CHECK_THROWS_AS(build_d4({h(1, 4), 0}, {0, h(1)}, {h(1, 4), 0}), InvalidParameters);
}

TEST_CASE("z2z2 builder") {
  auto f = build_z2();
  CHECK(f.covering.order() == 4);
  for (const auto& e : f.covering.elements()) {
    if (!e.is_identity()) {
      CHECK_FALSE(e.is_translation());
      CHECK_FALSE(has_fixed_point(e));
    }
  }
  CHECK_THROWS_AS(build_z2({h(1), 0}, {h(1), 0}, {0, 0}), InvalidParameters);
  CHECK_THROWS_AS(build_z2({h(1, 4), 0}, {h(1), 0}, {h(1), 0}), InvalidParameters);
  CHECK_NOTHROW(build_z2({0, h(1)}, {h(1), h(1)}, {h(1), 0}));
}

TEST_CASE("d4 automorphism group") {
  auto f = build_d4();
  auto aut = automorphism_group(f);
  CHECK(aut.normalizer_elements.size() == 256);
  CHECK(aut.quotient_order == 16);
  CHECK(aut.quotient_order * f.covering.order() == aut.normalizer_elements.size());
  CHECK(aut.exponent == 2);
  CHECK(aut.classes[0].identity);
  CHECK_FALSE(aut.lower_bound);
  for (const auto& e : aut.normalizer_elements)
    REQUIRE(normalizes(f.covering, e));
  // oracle: translations with t1, t2 in E[2], t3 in E'[2] that normalize H, up to w
  std::set<RatVec> oracle;
  for (auto t1 : two_torsion())
    for (auto t2 : two_torsion())
      for (auto t3 : two_torsion()) {
        auto e = AffineTorusMap::translation_by(f.shape, pack(t1, t2, t3));
        if (normalizes(f.covering, e))
          oracle.insert(e.translation());
      }
  CHECK(oracle.size() == 32);
  std::size_t covered = 0;
  for (const auto& c : aut.classes) {
    CHECK(c.volume_preserving());
    REQUIRE(c.translation_rep.has_value());
    const RatVec& t = c.translation_rep->translation();
    CHECK(oracle.count(t) == 1);
    // t1 + t2 in {0, 1/2}
    Rat s_re = frac(t[0] + t[2]), s_im = frac(t[1] + t[3]);
    CHECK(s_im == 0);
    CHECK((s_re == 0 || s_re == h(1)));
    for (const auto& x : c.lifts)
      if (x.is_translation())
        ++covered;
  }
  CHECK(covered == 32);
}

TEST_CASE("z2z2 automorphism group") {
  auto f = build_z2();
  auto aut = automorphism_group(f);
  CHECK(aut.normalizer_elements.size() == 512);
  CHECK(aut.quotient_order == 128);
  CHECK(aut.exponent == 2);
  std::size_t non_symplectic = 0;
  for (const auto& c : aut.classes)
    if (!c.volume_preserving())
      ++non_symplectic;
  CHECK(non_symplectic == 64);
  CHECK(automorphism_group(build_z2(false)).lower_bound);
}

TEST_CASE("z2z2 normalizer agrees with a brute-force search on E[4]") {
  auto f = build_z2();
  auto aut = automorphism_group(f);
  std::set<AffineTorusMap> found;
  for (int signs = 0; signs < 8; ++signs) {
    IntMat c = IntMat::identity(3);
    for (int i = 0; i < 3; ++i)
      if (signs >> i & 1)
        c(i, i) = -1;
    for (int code = 0; code < 4096; ++code) {
      RatVec t(6);
      for (int i = 0; i < 6; ++i)
        t[i] = make_rat((code >> (2 * i)) & 3, 4);
      AffineTorusMap e(f.shape, c, t);
      if (normalizes(f.covering, e))
        found.insert(e);
    }
  }
  std::set<AffineTorusMap> got(aut.normalizer_elements.begin(), aut.normalizer_elements.end());
  CHECK(found == got);
}

TEST_CASE("class arithmetic is a group") {
  auto f = build_d4();
  auto aut = automorphism_group(f);
  std::size_t n = aut.classes.size();
  for (std::size_t a = 0; a < n; ++a) {
    CHECK(aut.multiply(a, 0) == a);
    CHECK(aut.multiply(a, a) == 0);
    for (std::size_t b = 0; b < n; ++b)
      CHECK(aut.multiply(a, b) == aut.multiply(b, a));
  }
}

TEST_CASE("free automorphisms by closed form") {
  auto d4 = build_d4();
  auto aut = automorphism_group(d4);
  auto free = free_automorphisms(d4, aut);
  REQUIRE(free.size() == 2);
  std::set<std::string> labels;
  for (auto i : free)
    labels.insert(class_label(d4, aut.classes[i]));
  CHECK(labels == std::set<std::string>{"(0, 0, τ'/2)", "(0, 0, 1/2+τ'/2)"});

  auto z2 = build_z2();
  auto zaut = automorphism_group(z2);
  auto zfree = free_automorphisms(z2, zaut);
  CHECK(zfree.size() == 26);
  for (auto i : zfree) {
    const auto& c = zaut.classes[i];
    CHECK(c.translation_rep.has_value());
    CHECK_FALSE(c.identity);
  }
  CHECK_FALSE(zaut.classes[0].free_closed_form);
}

TEST_CASE("moduli dimension") {
  CHECK(moduli_dimension(build_d4()) == 2);
  CHECK(moduli_dimension(build_z2()) == 3);
  TorusShape one{{"τ"}};
  CHECK(moduli_dimension(generate(one, {})) == 1);
  CHECK(moduli_dimension(build_d4()) == invariant_tensor_dim(build_d4().covering));
  CHECK(moduli_dimension(build_z2()) == invariant_tensor_dim(build_z2().covering));
  // isotypic count: D4 acts on C^3 as rho (2-dim) plus a sign, each of multiplicity 2 in the
  // real lattice, so sum k(m - k) with m = 2, k = 1 over both
  CHECK(moduli_dimension(build_d4()) == 1 * (2 - 1) + 1 * (2 - 1));
  // Z2Z2: three distinct nontrivial characters, one per factor
  CHECK(moduli_dimension(build_z2()) == 3 * (1 * (2 - 1)));
}

TEST_CASE("degree-two moduli map") {
  ModuliLabel m{FamilyTag::D4, {1, 0}};
  CHECK(to_string(m) == "(mu, mu')");
  auto img = double_cover_map(m);
  CHECK(to_string(img) == "(mu, 2*mu')");
  auto [p, q] = preimages(m);
  CHECK(to_string(p) == "(mu, mu'/2)");
  CHECK(to_string(q) == "(mu, (mu'+1)/2)");
  CHECK(double_cover_map(p).equivalent(m));
  CHECK(double_cover_map(q).equivalent(m));
  CHECK_FALSE(double_cover_map(q).second == m.second);
  CHECK_FALSE(p.equivalent(q));
  ModuliLabel z{FamilyTag::Z2Z2, {1, 0}};
  CHECK_THROWS_AS(double_cover_map(z), UnsupportedError);
  CHECK_THROWS_AS(preimages(z), UnsupportedError);
}

TEST_CASE("alternative d4 parameters") {
  auto f = build_d4({h(1), 0}, {0, h(1)}, {h(3, 4), 0});
  auto aut = automorphism_group(f);
  CHECK(aut.quotient_order == 16);
  CHECK(free_automorphisms(f, aut).size() == 2);
}
