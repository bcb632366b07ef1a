#include "cy/torus.hpp"

#include "doctest.h"

using namespace cy;

namespace {

const TorusShape d4_shape{{"τ", "τ", "τ'"}};
const TorusShape z2_shape{{"τ1", "τ2", "τ3"}};

RatVec vec(std::initializer_list<Rat> xs) { return RatVec(xs); }
Rat h(long n, long d = 2) { return make_rat(n, d); }

AffineTorusMap d4_r() {
  return AffineTorusMap(d4_shape, IntMat{{0, 1, 0}, {-1, 0, 0}, {0, 0, 1}}, vec({0, 0, 0, 0, h(1, 4), 0}));
}

AffineTorusMap d4_s() {
  // u1 = (1/2, 1/2), u2 = (0, 1/2), translation (u1, u1+u2, 0)
  return AffineTorusMap(d4_shape, IntMat{{0, 1, 0}, {1, 0, 0}, {0, 0, -1}}, vec({h(1), h(1), 0, h(1), 0, 0}));
}

AffineTorusMap z_a() {
  return AffineTorusMap(z2_shape, IntMat{{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}}, vec({0, 0, 0, 0, h(1), 0}));
}

AffineTorusMap z_b() {
  return AffineTorusMap(z2_shape, IntMat{{-1, 0, 0}, {0, 1, 0}, {0, 0, -1}}, vec({h(1), 0, h(1), 0, 0, 0}));
}

}  // namespace

TEST_CASE("maps reject mixed periods and non-invertible parts") {
  CHECK_THROWS_AS(AffineTorusMap(z2_shape, IntMat{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}, RatVec(6, Rat(0))),
                  std::invalid_argument);
  CHECK_NOTHROW(AffineTorusMap(d4_shape, IntMat{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}, RatVec(6, Rat(0))));
  CHECK_THROWS_AS(AffineTorusMap(d4_shape, IntMat{{2, 0, 0}, {0, 1, 0}, {0, 0, 1}}, RatVec(6, Rat(0))),
                  std::invalid_argument);
  CHECK_THROWS_AS(AffineTorusMap(d4_shape, IntMat::identity(2), RatVec(4, Rat(0))), DimensionError);
}

TEST_CASE("d4 generators") {
  auto r = d4_r();
  auto s = d4_s();
  CHECK(order(r) == 4u);
  CHECK(order(s) == 4u);
  // s^2 is translation by (u1 + u2, u1 + u2, 0)
  auto w = compose(s, s);
  CHECK(w.is_translation());
  CHECK(w.translation() == vec({h(1), 0, h(1), 0, 0, 0}));
  // s r s^-1 = r^-1 up to translation by w
  auto c = conjugate(r, s);
  CHECK(c.complex_linear() == inverse(r).complex_linear());
  auto g = generate(d4_shape, {r, s});
  CHECK(g.order() == 16);
  CHECK(g.contains(w));
  std::size_t translations = 0;
  for (const auto& e : g.elements()) {
    CHECK_FALSE((has_fixed_point(e) && !e.is_identity()));
    if (e.is_translation())
      ++translations;
  }
  CHECK(translations == 2);
}

TEST_CASE("z2z2 generators") {
  auto a = z_a();
  auto b = z_b();
  CHECK(order(a) == 2u);
  CHECK(order(b) == 2u);
  auto g = generate(z2_shape, {a, b});
  CHECK(g.order() == 4);
  for (const auto& e : g.elements())
    if (!e.is_identity())
      CHECK_FALSE(has_fixed_point(e));
}

TEST_CASE("composition, inverse and power") {
  auto r = d4_r();
  auto s = d4_s();
  auto rs = compose(r, s);
  RatVec x = vec({h(1, 3), h(1, 5), h(2, 7), 0, h(1, 8), h(5, 6)});
  CHECK(rs.apply(x) == r.apply(s.apply(x)));
  CHECK(compose(rs, inverse(rs)).is_identity());
  CHECK(power(r, 4).is_identity());
  CHECK(power(r, 0).is_identity());
  CHECK(power(r, 2) == compose(r, r));
}

TEST_CASE("volume form action") {
  CHECK(volume_form_action(d4_r()).det == 1);
  CHECK(volume_form_action(d4_s()).det == 1);
  CHECK(volume_form_action(z_a()).preserves());
  auto flip = AffineTorusMap(z2_shape, IntMat{{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, RatVec(6, Rat(0)));
  CHECK(volume_form_action(flip).det == -1);
  CHECK_FALSE(volume_form_action(flip).preserves());
}

TEST_CASE("ages of involutions") {
  auto two = AffineTorusMap(z2_shape, IntMat{{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}}, RatVec(6, Rat(0)));
  CHECK(age_at_fixed_point(two) == 1);
  auto three = AffineTorusMap(z2_shape, IntMat{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}, RatVec(6, Rat(0)));
  CHECK(age_at_fixed_point(three) == h(3));
  CHECK_THROWS_AS(age_at_fixed_point(z_a()), UnsupportedError);
  CHECK_THROWS_AS(age_at_fixed_point(d4_r()), UnsupportedError);
}

TEST_CASE("fixed points of a half turn") {
  auto m = AffineTorusMap(z2_shape, IntMat{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}, RatVec(6, Rat(0)));
  auto f = fixed_points(m);
  CHECK(f.dim() == 0);
  CHECK(f.offsets.size() == 64);
  for (const auto& p : f.offsets)
    CHECK(m.apply(p) == p);
}

TEST_CASE("map formatting") {
  CHECK(format_map(d4_shape, d4_r()) == "(z2, -z1, z3 + 1/4)");
  CHECK(format_map(d4_shape, d4_s()) == "(z2 + 1/2+τ/2, z1 + τ/2, -z3)");
  CHECK(format_value({h(1), h(1)}, "τ") == "1/2+τ/2");
  CHECK(format_value({0, h(3, 4)}, "τ'") == "3τ'/4");
  CHECK(format_value({0, 0}, "τ") == "0");
  CHECK(format_value({0, h(-1)}, "τ") == "-τ/2");
}

TEST_CASE("generate caps infinite groups") {
  auto t = AffineTorusMap(z2_shape, IntMat{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, vec({h(1, 1000), 0, 0, 0, 0, 0}));
  CHECK_THROWS_AS(generate(z2_shape, {t}, 64), NotFiniteUnderCap);
  CHECK_FALSE(order(t, 64).has_value());
}
