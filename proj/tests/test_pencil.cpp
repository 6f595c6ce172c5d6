#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "harness/generator.hpp"
#include "spectral/cohomology.hpp"
#include "spectral/curve.hpp"
#include "spectral/loop_orbit.hpp"
#include "spectral/pencil.hpp"

using namespace spectral;
using harness::Rng;

namespace {

using GQ = GaussianRational;

GQ gq(long num, long den = 1) { return GQ(Rational(num, den)); }

// E1: the unit quadruple (X, Y, F, G) = (0, 0, 1, 1); det M = zeta*eta - 1.
Quadruple<GQ> e1() {
  Quadruple<GQ> q;
  q.k = q.l = 1;
  q.x = Matrix<GQ>(1, 1);
  q.y = Matrix<GQ>(1, 1);
  q.f = Matrix<GQ>(1, 1, {gq(1)});
  q.g = Matrix<GQ>(1, 1, {gq(1)});
  return q;
}

// k=1, l=2: X=0, Y=diag(0,1), F=(1,0), G=(1,0)^T; det M = (ze-1)(1-e).
Quadruple<GQ> k1l2() {
  Quadruple<GQ> q;
  q.k = 1;
  q.l = 2;
  q.x = Matrix<GQ>(1, 1);
  q.y = Matrix<GQ>(2, 2);
  q.y(1, 1) = gq(1);
  q.f = Matrix<GQ>(1, 2, {gq(1), gq(0)});
  q.g = Matrix<GQ>(2, 1, {gq(1), gq(0)});
  return q;
}

// Block-diagonal direct sum of two copies of E1.
Quadruple<GQ> e1_plus_e1() {
  Quadruple<GQ> q;
  q.k = q.l = 2;
  q.x = Matrix<GQ>(2, 2);
  q.y = Matrix<GQ>(2, 2);
  q.f = Matrix<GQ>::identity(2);
  q.g = Matrix<GQ>::identity(2);
  return q;
}

BiPoly<GQ> ze_minus_1() { return BiPoly<GQ>::from_table(1, 1, {gq(-1), gq(0), gq(0), gq(1)}); }

}  // namespace

TEST_CASE("embed/eval agree and normalize is a left inverse of embed") {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    auto q = harness::random_quadruple<GQ>(rng, 1 + rng.below(3), 1 + rng.below(3));
    Pencil<GQ> p = q.embed();
    GQ z = gq(rng.int_in(-3, 3)), e = gq(rng.int_in(-3, 3));
    CHECK(p.eval(z, e) == q.eval(z, e));
    auto [q2, gauge] = normalize(p);
    CHECK(gauge == Matrix<GQ>::identity(p.n()));
    CHECK(q2.x == q.x);
    CHECK(q2.y == q.y);
    CHECK(q2.f == q.f);
    CHECK(q2.g == q.g);
  }
}

TEST_CASE("normalize: worked 2x2 example") {
  // k=l=1, A0=(0,1)^T, A1=(1,0)^T, B0=(1,0)^T, B1=(0,1)^T
  Pencil<GQ> p;
  p.k = p.l = 1;
  p.a0 = Matrix<GQ>(2, 1, {gq(0), gq(1)});
  p.a1 = Matrix<GQ>(2, 1, {gq(1), gq(0)});
  p.b0 = Matrix<GQ>(2, 1, {gq(1), gq(0)});
  p.b1 = Matrix<GQ>(2, 1, {gq(0), gq(1)});
  auto [q, gauge] = normalize(p);
  CHECK(gauge == -Matrix<GQ>::identity(2));
  CHECK(q.x(0, 0) == gq(0));
  CHECK(q.y(0, 0) == gq(0));
  CHECK(q.f(0, 0) == gq(-1));
  CHECK(q.g(0, 0) == gq(-1));
  // determinants of the two presentations are proportional
  auto d1 = spectral_det(p), d2 = spectral_det(q);
  CHECK(d1.lex_normalized() == d2.lex_normalized());
}

TEST_CASE("normalize: point at infinity fails loudly, a chart swap repairs") {
  Pencil<GQ> p;
  p.k = p.l = 1;
  p.a0 = Matrix<GQ>(2, 1, {gq(0), gq(1)});
  p.a1 = Matrix<GQ>(2, 1, {gq(1), gq(0)});
  p.b0 = Matrix<GQ>(2, 1, {gq(1), gq(1)});
  p.b1 = Matrix<GQ>(2, 1, {gq(2), gq(0)});  // (A1|B1) singular
  CHECK_THROWS_AS(normalize(p), PointAtInfinityOnSupportError);
  // a pure shift leaves A1, B1 untouched and cannot repair this
  Pencil<GQ> shifted = mobius_shift(p, gq(1), gq(-2));
  CHECK(shifted.a0 == p.a0 + p.a1);
  CHECK(shifted.b0 == p.b0 + p.b1 * gq(-2));
  CHECK(shifted.a1 == p.a1);
  CHECK_THROWS_AS(normalize(shifted), PointAtInfinityOnSupportError);
  // swapping the zeta chart moves the support off (inf, inf)
  Pencil<GQ> moved = mobius_transform(p, MobiusMap<GQ>::chart_swap(), MobiusMap<GQ>::identity());
  auto [q, gauge] = normalize(moved);
  // zero sets correspond under zeta -> 1/zeta: det p = zeta - 1 - 2 eta has
  // the root (1, 0)
  CHECK(det(p.eval(gq(1), gq(0))) == gq(0));
  CHECK(det(moved.eval(gq(1), gq(0))) == gq(0));
}

TEST_CASE("spectral_det golden values") {
  CHECK(spectral_det(e1()) == ze_minus_1());
  CHECK(spectral_det(e1_plus_e1()) == ze_minus_1() * ze_minus_1());
  // (ze - 1)(1 - e) with the literal block-order sign
  BiPoly<GQ> expect =
      ze_minus_1() * BiPoly<GQ>::from_table(0, 1, {gq(1), gq(-1)});
  CHECK(spectral_det(k1l2()) == expect);
  CHECK(expect.coeff(0, 0) == gq(-1));
  CHECK(expect.coeff(0, 1) == gq(1));
  CHECK(expect.coeff(1, 1) == gq(1));
  CHECK(expect.coeff(1, 2) == gq(-1));
}

TEST_CASE("spectral_det: identically zero determinant") {
  Pencil<GQ> p;
  p.k = p.l = 1;
  p.a0 = Matrix<GQ>(2, 1);
  p.a1 = Matrix<GQ>(2, 1);
  p.b0 = Matrix<GQ>(2, 1, {gq(1), gq(0)});
  p.b1 = Matrix<GQ>(2, 1);
  CHECK_THROWS_AS(spectral_det(p), ZeroDeterminantError);
}

TEST_CASE("act_full scales the determinant by det g / det h1 det h2") {
  auto q = e1();
  Pencil<GQ> p = q.embed();
  CHECK(act_full(p, Matrix<GQ>::identity(2), Matrix<GQ>::identity(1),
                 Matrix<GQ>::identity(1))
            .eval(gq(2), gq(3)) == p.eval(gq(2), gq(3)));
  // scalar g = 2I: det scaled by 2^n = 4
  Pencil<GQ> scaled = act_full(p, Matrix<GQ>::identity(2) * gq(2), Matrix<GQ>::identity(1),
                               Matrix<GQ>::identity(1));
  CHECK(spectral_det(scaled) == spectral_det(p) * gq(4));

  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    auto qq = harness::random_quadruple<GQ>(rng, 2, 2);
    Pencil<GQ> pp = qq.embed();
    Matrix<GQ> g = harness::random_invertible<GQ>(rng, 4);
    Matrix<GQ> h1 = harness::random_invertible<GQ>(rng, 2);
    Matrix<GQ> h2 = harness::random_invertible<GQ>(rng, 2);
    GQ factor = det(g) / (det(h1) * det(h2));
    CHECK(spectral_det(act_full(pp, g, h1, h2)) == spectral_det(pp) * factor);
  }
  Matrix<GQ> sing(2, 2);
  CHECK_THROWS_AS(act_full(p, sing, Matrix<GQ>::identity(1), Matrix<GQ>::identity(1)),
                  SingularGroupElementError);
}

TEST_CASE("act_K preserves the determinant and the spectra of X, Y") {
  auto q = e1();
  auto q2 = act_K(q, Matrix<GQ>(1, 1, {gq(2)}), Matrix<GQ>(1, 1, {gq(2)}));
  CHECK(q2.f == q.f);  // g F h^{-1} = 2 * 1 * 1/2
  CHECK(q2.g == q.g);

  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    auto qq = harness::random_quadruple<GQ>(rng, 2, 3);
    Matrix<GQ> g = harness::random_invertible<GQ>(rng, 2);
    Matrix<GQ> h = harness::random_invertible<GQ>(rng, 3);
    auto moved = act_K(qq, g, h);
    CHECK(spectral_det(moved) == spectral_det(qq));
    CHECK(charpoly(moved.x) == charpoly(qq.x));
    CHECK(charpoly(moved.y) == charpoly(qq.y));
  }
}

TEST_CASE("minimal_polynomial: reduced, non-reduced and non-split supports") {
  CHECK(minimal_polynomial(e1()) == ze_minus_1());

  // direct sum: det (ze-1)^2 but minimal ze-1
  CHECK(spectral_det(e1_plus_e1()) == ze_minus_1() * ze_minus_1());
  CHECK(minimal_polynomial(e1_plus_e1()) == ze_minus_1());

  // non-split double structure [[T, I], [0, T]]: minimal = det = -(ze-1)^2
  // in the (A|B) column order of the pencil
  Pencil<GQ> p;
  p.k = p.l = 2;
  p.a0 = Matrix<GQ>(4, 2, {gq(0), gq(1), gq(1), gq(0), gq(0), gq(0), gq(0), gq(1)});
  p.a1 = Matrix<GQ>(4, 2, {gq(-1), gq(0), gq(0), gq(0), gq(0), gq(-1), gq(0), gq(0)});
  p.b0 = Matrix<GQ>(4, 2, {gq(1), gq(0), gq(0), gq(1), gq(0), gq(1), gq(0), gq(0)});
  p.b1 = Matrix<GQ>(4, 2, {gq(0), gq(0), gq(-1), gq(0), gq(0), gq(0), gq(0), gq(-1)});
  BiPoly<GQ> d = spectral_det(p);
  CHECK(d == -(ze_minus_1() * ze_minus_1()));
  CHECK(minimal_polynomial(p) == d);
}

TEST_CASE("minimal_polynomial is exact-backend only") {
  Quadruple<Complex> q;
  q.k = q.l = 1;
  q.x = Matrix<Complex>(1, 1);
  q.y = Matrix<Complex>(1, 1);
  q.f = Matrix<Complex>(1, 1, {Complex(1, 0)});
  q.g = Matrix<Complex>(1, 1, {Complex(1, 0)});
  CHECK_THROWS_AS(minimal_polynomial(q), BackendUnsupportedError);
}

TEST_CASE("minimal polynomial divides the determinant with exact quotient") {
  Rng rng(15);
  for (int t = 0; t < 8; ++t) {
    auto q = harness::random_quadruple<GQ>(rng, 1 + rng.below(2), 1 + rng.below(2));
    auto d = spectral_det(q);
    auto m = minimal_polynomial(q);
    CHECK_NOTHROW(exact_div(d, m));
  }
}

TEST_CASE("spectral_curve bundles det, squarefree part and minimal polynomial") {
  auto c = spectral_curve(e1_plus_e1().embed());
  CHECK(c.det_poly == ze_minus_1() * ze_minus_1());
  REQUIRE(c.squarefree.has_value());
  REQUIRE(c.minimal.has_value());
  CHECK(*c.squarefree == ze_minus_1());
  CHECK(*c.minimal == ze_minus_1());
  CHECK_NOTHROW(exact_div(c.det_poly, *c.minimal));
  CHECK_NOTHROW(exact_div(*c.minimal, *c.squarefree));
}

TEST_CASE("bipurity: E1 passes, G = 0 fails vertically with witness") {
  auto r1 = bipurity_check(e1());
  CHECK(r1.vertical_ok);
  CHECK(r1.horizontal_ok);

  auto q = e1();
  q.g = Matrix<GQ>(1, 1);  // kill G
  auto r2 = bipurity_check(q);
  CHECK_FALSE(r2.vertical_ok);
  REQUIRE(r2.vertical_witnesses.size() == 1);
  CHECK(r2.vertical_witnesses[0].first == gq(0));
  // witness v satisfies (X - z0) v = 0 and G v = 0
  CHECK(r2.vertical_witnesses[0].second(0, 0) != gq(0));
}

TEST_CASE("bipurity: the k=1,l=2 example has a horizontal line component") {
  // det M = (ze-1)(1-e): the sheaf contains a direct summand supported on
  // the horizontal line eta = 1, witnessed by w = e_2.
  auto r = bipurity_check(k1l2());
  CHECK(r.vertical_ok);
  CHECK_FALSE(r.horizontal_ok);
  REQUIRE(r.horizontal_witnesses.size() == 1);
  CHECK(r.horizontal_witnesses[0].first == gq(1));
  const Matrix<GQ>& w = r.horizontal_witnesses[0].second;
  REQUIRE(w.cols() == 1);
  CHECK(w(0, 0) == gq(0));
  CHECK(w(1, 0) != gq(0));
}

TEST_CASE("bipurity on the float backend") {
  Quadruple<Complex> q;
  q.k = q.l = 1;
  q.x = Matrix<Complex>(1, 1);
  q.y = Matrix<Complex>(1, 1);
  q.f = Matrix<Complex>(1, 1, {Complex(1, 0)});
  q.g = Matrix<Complex>(1, 1, {Complex(1, 0)});
  auto r = bipurity_check(q);
  CHECK(r.vertical_ok);
  CHECK(r.horizontal_ok);
  q.g(0, 0) = 0;
  auto r2 = bipurity_check(q);
  CHECK_FALSE(r2.vertical_ok);
}

TEST_CASE("geometric resolution check") {
  std::vector<std::optional<GQ>> zs{gq(0), gq(1), std::nullopt};
  std::vector<std::optional<GQ>> es{gq(0), gq(1), std::nullopt};
  CHECK(geometric_resolution_check(e1(), zs, es));

  auto bad = e1();
  bad.g = Matrix<GQ>(1, 1);
  CHECK_FALSE(geometric_resolution_check(bad, {gq(0)}, {}));

  Rng rng(21);
  int bipure_seen = 0;
  for (int t = 0; t < 10; ++t) {
    auto q = harness::random_quadruple<GQ>(rng, 1 + rng.below(2), 1 + rng.below(2));
    auto rep = bipurity_check(q);
    if (!(rep.vertical_ok && rep.horizontal_ok)) continue;
    ++bipure_seen;
    std::vector<std::optional<GQ>> samples;
    for (int s = -5; s <= 4; ++s) samples.push_back(gq(s));
    CHECK(geometric_resolution_check(q, samples, samples));
  }
  CHECK(bipure_seen > 0);
}

TEST_CASE("subbundle fibres span the vanishing-section spaces") {
  // E1: V_{z0} is spanned by (X - z0; G) = (-z0, 1)^T
  auto f0 = subbundle_fibre(e1(), FibreDirection::vertical, std::optional<GQ>(gq(2)));
  REQUIRE(f0.basis.cols() == 1);
  // the span contains (-2, 1)^T: check proportionality
  CHECK(f0.basis(0, 0) * gq(1) == f0.basis(1, 0) * gq(-2));
  auto finf = subbundle_fibre(e1(), FibreDirection::vertical, std::optional<GQ>{});
  REQUIRE(finf.basis.cols() == 1);
  CHECK(finf.basis(1, 0) == gq(0));  // A1 block = (-1, 0)^T

  // non-bipure direction: the fibre drops at the witness point
  auto bad = e1();
  bad.g = Matrix<GQ>(1, 1);
  auto fdrop = subbundle_fibre(bad, FibreDirection::vertical, std::optional<GQ>(gq(0)));
  CHECK(fdrop.basis.cols() == 0);
}

TEST_CASE("two gauge triples on the same pencil agree downstream") {
  Rng rng(29);
  harness::GenConstraints cons;
  cons.x_mults = std::vector<int>{1, 1};
  cons.y_mults = std::vector<int>{1, 1};
  auto q = harness::random_quadruple<GQ>(rng, 2, 2, cons);
  Pencil<GQ> p = q.embed();
  for (int t = 0; t < 3; ++t) {
    Matrix<GQ> g = harness::random_invertible<GQ>(rng, 4);
    Matrix<GQ> h1 = harness::random_invertible<GQ>(rng, 2);
    Matrix<GQ> h2 = harness::random_invertible<GQ>(rng, 2);
    auto [qa, ga] = normalize(act_full(p, g, h1, h2));
    // same sheaf: equal cohomology dims, Hilbert data and orbit invariants
    CHECK(sheaf_cohomology(qa, Twist{0, 1}).first == 2);
    CHECK(hilbert_polynomial(qa) == hilbert_polynomial(q));
    CHECK(same_orbit(orbit_invariants(to_rational_map(qa)),
                     orbit_invariants(to_rational_map(q))));
  }
}

TEST_CASE("sample_curve: E1 hyperbola and its degree drop at zeta = 0") {
  Quadruple<Complex> q;
  q.k = q.l = 1;
  q.x = Matrix<Complex>(1, 1);
  q.y = Matrix<Complex>(1, 1);
  q.f = Matrix<Complex>(1, 1, {Complex(1, 0)});
  q.g = Matrix<Complex>(1, 1, {Complex(1, 0)});
  auto s = sample_curve(q.embed(), {Complex(2, 0), Complex(0, 0)});
  REQUIRE(s.points.size() == 1);
  CHECK(std::abs(s.points[0].second - Complex(0.5, 0)) < 1e-12);
  REQUIRE(s.degree_drops.size() == 1);
  CHECK(s.degree_drops[0].first == Complex(0, 0));
  CHECK(s.degree_drops[0].second == 1);
}
