#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "harness/generator.hpp"
#include "spectral/bipoly.hpp"
#include "spectral/charpoly.hpp"
#include "spectral/conjclass.hpp"
#include "spectral/eigensolve.hpp"
#include "spectral/linalg.hpp"

using namespace spectral;
using harness::Rng;

namespace {

using GQ = GaussianRational;

GQ gq(long num, long den = 1) { return GQ(Rational(num, den)); }

Matrix<GQ> mat2(long a, long b, long c, long d) {
  return Matrix<GQ>(2, 2, {gq(a), gq(b), gq(c), gq(d)});
}

BiPoly<GQ> zeta_eta_minus_1() {
  // zeta*eta - 1
  return BiPoly<GQ>::from_table(1, 1, {gq(-1), gq(0), gq(0), gq(1)});
}

}  // namespace

TEST_CASE("gaussian rational field arithmetic") {
  GQ a(Rational(1, 3), Rational(2, 5));
  GQ b(Rational(-2, 7), Rational(1, 2));
  CHECK(a * b / b == a);
  CHECK((a + b) - b == a);
  CHECK(a * GQ::i() * GQ::i() == -a);
  CHECK(a.conj().conj() == a);
  CHECK_THROWS_AS(a / GQ(0), Error);
}

TEST_CASE("rank examples") {
  CHECK(rank(Matrix<GQ>::identity(3)) == 3);
  CHECK(rank(Matrix<GQ>(2, 4)) == 0);
  Matrix<Complex> m(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 1e-15;
  CHECK(rank(m) == 1);  // 1e-15 below 1e-9 * sigma_max
  m(1, 1) = 1e-3;
  CHECK(rank(m) == 2);
}

TEST_CASE("exact rank-nullity on random matrices") {
  Rng rng(42);
  for (int t = 0; t < 100; ++t) {
    std::size_t r = 1 + rng.below(5), c = 1 + rng.below(5);
    Matrix<GQ> m = harness::random_matrix<GQ>(rng, r, c);
    CHECK(rank(m) + kernel(m).cols() == c);
  }
}

TEST_CASE("exact determinant and inverse") {
  Matrix<GQ> m = mat2(1, 2, 3, 4);
  CHECK(det(m) == gq(-2));
  Matrix<GQ> mi = inverse(m);
  CHECK(m * mi == Matrix<GQ>::identity(2));
  CHECK_THROWS_AS(inverse(mat2(1, 2, 2, 4)), SingularMatrixError);
}

TEST_CASE("charpoly examples") {
  // zero 2x2 -> lambda^2
  auto p0 = charpoly(Matrix<GQ>(2, 2));
  CHECK(p0.degree() == 2);
  CHECK(p0.coeff(0) == gq(0));
  CHECK(p0.coeff(1) == gq(0));
  CHECK(p0.coeff(2) == gq(1));
  // diag(a, b) -> lambda^2 - (a+b) lambda + ab
  Matrix<GQ> d(2, 2);
  d(0, 0) = gq(3, 2);
  d(1, 1) = gq(-5);
  auto pd = charpoly(d);
  CHECK(pd.coeff(1) == -(gq(3, 2) + gq(-5)));
  CHECK(pd.coeff(0) == gq(3, 2) * gq(-5));
  // [[1,2],[3,4]] -> lambda^2 - 5 lambda - 2
  auto p = charpoly(mat2(1, 2, 3, 4));
  CHECK(p.coeff(1) == gq(-5));
  CHECK(p.coeff(0) == gq(-2));
}

TEST_CASE("adjugate identity adj(M) * M = det(M) I") {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 1 + rng.below(4);
    Matrix<GQ> m = harness::random_matrix<GQ>(rng, n, n);
    auto [p, adj] = charpoly_adjugate(m);
    Matrix<GQ> expect = Matrix<GQ>::identity(n) * det(m);
    CHECK(adj * m == expect);
  }
}

TEST_CASE("charpoly invariant under conjugation") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 1 + rng.below(4);
    Matrix<GQ> m = harness::random_matrix<GQ>(rng, n, n);
    Matrix<GQ> g = harness::random_invertible<GQ>(rng, n);
    CHECK(charpoly(g * m * inverse(g)) == charpoly(m));
  }
}

TEST_CASE("det(lambda I_l - GF) = lambda^(l-k) det(lambda I_k - FG)") {
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    std::size_t k = 1 + rng.below(3);
    std::size_t l = k + rng.below(3);
    Matrix<GQ> f = harness::random_matrix<GQ>(rng, k, l);
    Matrix<GQ> g = harness::random_matrix<GQ>(rng, l, k);
    auto p_small = charpoly(f * g);  // degree k
    auto p_big = charpoly(g * f);    // degree l
    for (std::size_t j = 0; j < l - k; ++j) CHECK(p_big.coeff(j) == gq(0));
    for (std::size_t j = 0; j <= k; ++j) CHECK(p_big.coeff(j + (l - k)) == p_small.coeff(j));
  }
}

TEST_CASE("eigen examples") {
  Matrix<GQ> d(3, 3);
  d(0, 0) = gq(1);
  d(1, 1) = gq(1);
  d(2, 2) = gq(2);
  auto e = eigen(d);
  REQUIRE(e.size() == 2);
  CHECK(e[0].first == gq(1));
  CHECK(e[0].second == 2);
  CHECK(e[1].first == gq(2));
  CHECK(e[1].second == 1);

  Matrix<GQ> nil(2, 2);
  nil(0, 1) = gq(1);
  auto en = eigen(nil);
  REQUIRE(en.size() == 1);
  CHECK(en[0].first == gq(0));
  CHECK(en[0].second == 2);

  // [[0,-1],[1,0]]: eigenvalues +-i over the Gaussian rationals
  Matrix<GQ> rot = mat2(0, -1, 1, 0);
  auto er = eigen(rot);
  REQUIRE(er.size() == 2);
  CHECK(er[0].first == -GQ::i());
  CHECK(er[1].first == GQ::i());

  // lambda^2 + 2 does not split over Q(i)
  Matrix<GQ> ns = mat2(0, -2, 1, 0);
  CHECK_THROWS_AS(eigen(ns), NonSplittingError);
}

TEST_CASE("float eigen clustering") {
  Matrix<Complex> d(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 1.0 + 1e-12;
  d(2, 2) = 2.0;
  auto e = eigen(d);
  REQUIRE(e.size() == 2);
  CHECK(e[0].second == 2);
  CHECK(std::abs(e[0].first - Complex(1.0, 0)) < 1e-9);
  CHECK(e[1].second == 1);
}

TEST_CASE("diagonalize reconstructs the matrix") {
  Rng rng(17);
  for (int t = 0; t < 10; ++t) {
    Matrix<GQ> m = harness::random_diagonalizable<GQ>(rng, {1, 2});
    auto d = diagonalize(m);
    Matrix<GQ> dd(3, 3);
    std::size_t off = 0;
    for (std::size_t i = 0; i < d.eigenvalues.size(); ++i)
      for (int c = 0; c < d.multiplicities[i]; ++c, ++off) dd(off, off) = d.eigenvalues[i];
    CHECK(d.v * dd * d.v_inv == m);
  }
  Matrix<GQ> nil(2, 2);
  nil(0, 1) = gq(1);
  CHECK_THROWS_AS(diagonalize(nil), NotDiagonalizableError);
}

TEST_CASE("unipoly divmod, gcd, interpolation") {
  auto p = UniPoly<GQ>::from_coeffs({gq(-1), gq(0), gq(1)});  // x^2 - 1
  auto q = UniPoly<GQ>::from_coeffs({gq(-1), gq(1)});         // x - 1
  auto [quot, rem] = divmod(p, q);
  CHECK(rem.is_zero());
  CHECK(quot == UniPoly<GQ>::from_coeffs({gq(1), gq(1)}));
  CHECK(gcd(p, q) == q.monic());

  std::vector<GQ> nodes{gq(0), gq(1), gq(2)}, vals;
  for (const auto& n : nodes) vals.push_back(p.eval(n));
  CHECK(interpolate(nodes, vals) == p);
}

TEST_CASE("bipoly arithmetic and interpolation") {
  auto p = zeta_eta_minus_1();
  CHECK(p.eval(gq(2), gq(3)) == gq(5));
  CHECK(p.degree_zeta() == 1);
  CHECK(p.degree_eta() == 1);
  auto p2 = p * p;
  CHECK(p2.coeff(2, 2) == gq(1));
  CHECK(p2.coeff(1, 1) == gq(-2));
  CHECK(p2.coeff(0, 0) == gq(1));

  std::vector<GQ> zn{gq(0), gq(1), gq(2)}, en{gq(0), gq(1), gq(2)};
  std::vector<std::vector<GQ>> vals(3, std::vector<GQ>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) vals[i][j] = p2.eval(zn[i], en[j]);
  CHECK(interpolate2(zn, en, vals) == p2);

  // substitution views
  CHECK(p2.eval_zeta(gq(2)) ==
        UniPoly<GQ>::from_coeffs({gq(1), gq(-4), gq(4)}));  // (2 eta - 1)^2
}

TEST_CASE("bipoly_gcd examples") {
  auto p = zeta_eta_minus_1();
  auto p2 = p * p;

  // gcd(p, 0) -> p normalized
  CHECK(bipoly_gcd(p2, BiPoly<GQ>()) == p2.lex_normalized());

  // gcd((ze-1)^2, d/dz (ze-1)^2) -> ze-1
  CHECK(bipoly_gcd(p2, p2.derivative_zeta()) == p);

  // gcd(ze-1, z+e) -> 1
  auto sum = BiPoly<GQ>::from_table(1, 1, {gq(0), gq(1), gq(1), gq(0)});
  CHECK(bipoly_gcd(p, sum) == BiPoly<GQ>(gq(1)));
}

TEST_CASE("bipoly_gcd: zeta-free inputs reduce to the univariate gcd in eta") {
  auto e2m1 = BiPoly<GQ>::from_table(0, 2, {gq(-1), gq(0), gq(1)});  // eta^2 - 1
  auto em1 = BiPoly<GQ>::from_table(0, 1, {gq(-1), gq(1)});          // eta - 1
  CHECK(bipoly_gcd(e2m1, em1) == em1);
  auto mixed = BiPoly<GQ>::monomial(1, 0, gq(1)) * em1;  // zeta (eta - 1)
  CHECK(bipoly_gcd(mixed, e2m1) == em1);
}

TEST_CASE("bipoly_gcd of common-multiple pairs is associate to r*gcd(p,q)") {
  Rng rng(23);
  auto random_bipoly = [&](int dz, int de) {
    std::vector<GQ> table;
    for (int i = 0; i < (dz + 1) * (de + 1); ++i)
      table.push_back(GQ(Rational(rng.int_in(-4, 4)), Rational(rng.int_in(-2, 2))));
    return BiPoly<GQ>::from_table(dz, de, table);
  };
  int done = 0;
  for (int t = 0; t < 20 && done < 8; ++t) {
    auto p = random_bipoly(1, 1), q = random_bipoly(1, 1), r = random_bipoly(1, 1);
    if (p.is_zero() || q.is_zero() || r.is_zero()) continue;
    auto lhs = bipoly_gcd(p * r, q * r);
    auto rhs = (bipoly_gcd(p, q) * r).lex_normalized();
    CHECK(lhs == rhs);
    ++done;
  }
  CHECK(done > 0);
}

TEST_CASE("squarefree part") {
  auto p = zeta_eta_minus_1();
  CHECK(squarefree_part(p * p) == p);
  // factor independent of zeta: (eta^2) * (ze-1)^2 -> eta*(ze-1) normalized
  auto eta2 = BiPoly<GQ>::monomial(0, 2, gq(1));
  auto sf = squarefree_part(eta2 * p * p);
  auto expect = (BiPoly<GQ>::monomial(0, 1, gq(1)) * p).lex_normalized();
  CHECK(sf == expect);
}

TEST_CASE("exact division of bipolys") {
  auto p = zeta_eta_minus_1();
  auto q = p * p * p;
  CHECK(exact_div(q, p * p) == p);
  auto sum = BiPoly<GQ>::from_table(1, 1, {gq(0), gq(1), gq(1), gq(0)});
  CHECK_THROWS_AS(exact_div(p, sum), Error);
}

TEST_CASE("conjugacy class invariants") {
  // J_2(0) vs diag(0, 0): same charpoly, different rank sequence
  Matrix<GQ> j2(2, 2);
  j2(0, 1) = gq(1);
  Matrix<GQ> z(2, 2);
  CHECK_FALSE(same_class(conj_class(j2), conj_class(z)));
  CHECK(same_class(conj_class(j2), conj_class(j2)));

  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    Matrix<GQ> m = harness::random_diagonalizable<GQ>(rng, {2, 1});
    Matrix<GQ> g = harness::random_invertible<GQ>(rng, 3);
    CHECK(conjugate(m, g * m * inverse(g)));
  }
}

TEST_CASE("float-only operations refuse gcd; float charpoly similarity") {
  Matrix<Complex> a(2, 2);
  a(0, 0) = Complex(1, 0);
  BiPoly<Complex> p(Complex(1, 0));
  CHECK_THROWS_AS(bipoly_gcd(p, p), BackendUnsupportedError);
  CHECK_THROWS_AS(squarefree_part(p), BackendUnsupportedError);

  Rng rng(37);
  for (int t = 0; t < 10; ++t) {
    std::size_t n = 1 + rng.below(4);
    Matrix<Complex> m = harness::random_matrix<Complex>(rng, n, n);
    Matrix<Complex> g = Matrix<Complex>::identity(n) +
                        harness::random_matrix<Complex>(rng, n, n) * Complex(0.3, 0);
    auto p1 = charpoly(g * m * inverse(g));
    auto p2 = charpoly(m);
    REQUIRE(p1.degree() == p2.degree());
    for (int i = 0; i <= p1.degree(); ++i)
      CHECK(std::abs(p1.coeff(static_cast<std::size_t>(i)) -
                     p2.coeff(static_cast<std::size_t>(i))) <= 1e-9 * 100);
  }
}

TEST_CASE("tolerance config validation") {
  ToleranceConfig tol;
  tol.validate();
  tol.eig_tol = 0;
  CHECK_THROWS_AS(tol.validate(), Error);
}
