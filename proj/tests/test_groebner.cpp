#include <gtest/gtest.h>

#include <random>

#include "monadlab/hilbert.hpp"
#include "monadlab/parse.hpp"
#include "oracles.hpp"

using namespace monadlab;

namespace {

RingPtr<Fp> fp() {
  static auto r = makeRing<Fp>();
  return r;
}

template <class F>
std::vector<Poly<F>> polys(const RingPtr<F>& R, std::initializer_list<const char*> texts) {
  std::vector<Poly<F>> out;
  for (const char* t : texts) out.push_back(parsePoly(t, R));
  return out;
}

template <class F>
std::vector<Poly<F>> basisPolys(const GroebnerBasis<F>& gb) {
  std::vector<Poly<F>> out;
  for (std::size_t i = 0; i < gb.size(); ++i) out.push_back(vecEntry(gb.ring(), gb.generator(i), 0));
  return out;
}

// Random homogeneous polynomial of degree d with a few terms.
Poly<Fp> randomForm(std::mt19937& rng, const RingPtr<Fp>& R, int d, int terms) {
  auto mons = oracle::monomialsOfDegree(d);
  std::uniform_int_distribution<std::size_t> pick(0, mons.size() - 1);
  std::uniform_int_distribution<int> coef(-5, 5);
  std::vector<PolyTerm<Fp>> ts;
  for (int i = 0; i < terms; ++i) ts.push_back({mons[pick(rng)], R->field.fromInt(coef(rng))});
  return Poly<Fp>::fromTerms(R, ts);
}

}  // namespace

TEST(Groebner, TwistedCubic) {
  auto R = fp();
  auto I = polys(R, {"x*z - y^2", "y*w - z^2", "x*w - y*z"});
  auto gb = idealGroebnerBasis(R, I);
  EXPECT_TRUE(isGroebnerBasis(gb));
  EXPECT_TRUE(oracle::allSPolysReduce(basisPolys(gb)));
  EXPECT_EQ(normalForm(parsePoly("y^2", R), gb), parsePoly("x*z", R));
  EXPECT_TRUE(gb.isReduced());
  EXPECT_EQ(krullDim(gb), 2);
  auto h = hilbertSeriesQuotient(gb);
  // (1 + 2t) / (1 - t)^2
  std::vector<long long> q;
  EXPECT_EQ(h.reduced(q), 2);
  EXPECT_EQ(q, (std::vector<long long>{1, 2}));
  for (int d = 0; d < 8; ++d) EXPECT_EQ(h.valueAt(d), 3 * d + 1);
  EXPECT_EQ(h.polynomialAt(10), 31);
}

TEST(Groebner, LinearForms) {
  auto R = fp();
  auto gb = idealGroebnerBasis(R, polys(R, {"x + y", "x - y"}));
  auto b = basisPolys(gb);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0], parsePoly("x", R));
  EXPECT_EQ(b[1], parsePoly("y", R));
}

TEST(Groebner, Membership) {
  auto R = fp();
  auto gb = idealGroebnerBasis(R, polys(R, {"x*z - y^2", "y*w - z^2", "x*w - y*z"}));
  auto f = parsePoly("(x*z - y^2)*(x + w) + z*(y*w - z^2)", R);
  EXPECT_TRUE(gb.contains(vecFromPolys(std::vector<Poly<Fp>>{f})));
  EXPECT_FALSE(gb.contains(vecFromPolys(std::vector<Poly<Fp>>{parsePoly("x*y", R)})));
}

TEST(Groebner, UnitAndZeroDimensional) {
  auto R = fp();
  EXPECT_EQ(krullDim(R, polys(R, {"x", "1 + 0*y"})), -1);
  EXPECT_TRUE(isZeroDimensional(R, polys(R, {"x^2", "y^3", "z", "w^5 + x*w^4"})));
  EXPECT_FALSE(isZeroDimensional(R, polys(R, {"x^2", "y^3", "z"})));
  EXPECT_EQ(krullDim(R, polys(R, {"x*y"})), 3);
}

TEST(Groebner, ModuleBasis) {
  auto R = fp();
  GradedFree F0({0, 0});
  // columns (x, y) and (z, w) in S^2
  std::vector<Vec<Fp>> g = {vecFromPolys(polys(R, {"x", "y"})), vecFromPolys(polys(R, {"z", "w"}))};
  auto gb = groebnerBasis(R, F0, g);
  EXPECT_TRUE(isGroebnerBasis(gb));
  // the determinant relation: w*(x,y) - y*(z,w) = (xw - yz, 0)
  auto v = vecAdd(*R, vecMulPoly(*R, parsePoly("w", R), g[0]), vecMulPoly(*R, parsePoly("y", R), g[1]), true);
  EXPECT_TRUE(gb.contains(v));
  for (int d = 0; d < 5; ++d)
    EXPECT_EQ(hilbertSeriesQuotient(gb).valueAt(d), 2 * static_cast<long long>(oracle::monomialsOfDegree(d).size()) -
                                                        static_cast<long long>(oracle::spanDim(*R, F0, g, d)));
}

TEST(Groebner, NormalFormIdempotent) {
  std::mt19937 rng(7);
  auto R = fp();
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Poly<Fp>> I;
    for (int i = 0; i < 3; ++i) I.push_back(randomForm(rng, R, 2, 3));
    auto gb = idealGroebnerBasis(R, I);
    for (int i = 0; i < 5; ++i) {
      auto f = randomForm(rng, R, 3, 5);
      auto n = normalForm(f, gb);
      EXPECT_EQ(normalForm(n, gb), n);
      EXPECT_TRUE(gb.contains(vecFromPolys(std::vector<Poly<Fp>>{f - n})));
    }
  }
}

TEST(GroebnerProperty, RandomIdealsAgainstOracle) {
  std::mt19937 rng(12345);
  auto R = fp();
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Poly<Fp>> I;
    int n = 2 + trial % 3;
    for (int i = 0; i < n; ++i) I.push_back(randomForm(rng, R, 2 + i % 2, 3 + trial % 4));
    auto gb = idealGroebnerBasis(R, I);
    auto b = basisPolys(gb);
    ASSERT_TRUE(oracle::allSPolysReduce(b)) << "trial " << trial;
    for (const auto& f : I) EXPECT_TRUE(oracle::divide(f, b).isZero());
    auto h = hilbertSeriesQuotient(gb);
    GradedFree S({0});
    auto vecs = idealVecs(I);
    for (int d = 0; d <= 5; ++d)
      EXPECT_EQ(h.valueAt(d), static_cast<long long>(oracle::monomialsOfDegree(d).size()) -
                                  static_cast<long long>(oracle::spanDim(*R, S, vecs, d)))
          << "trial " << trial << " degree " << d;
  }
}

TEST(GroebnerProperty, OrderIndependentHilbertFunction) {
  std::mt19937 rng(99);
  auto R1 = makeRing<Fp>(Fp(), MonomialOrder::GRevLex);
  auto R2 = makeRing<Fp>(Fp(), MonomialOrder::GLex);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Poly<Fp>> I1;
    for (int i = 0; i < 3; ++i) I1.push_back(randomForm(rng, R1, 2, 4));
    std::vector<Poly<Fp>> I2;
    for (const auto& f : I1) I2.push_back(parsePoly(f.toString(), R2));
    auto h1 = hilbertSeriesQuotient(idealGroebnerBasis(R1, I1));
    auto h2 = hilbertSeriesQuotient(idealGroebnerBasis(R2, I2));
    EXPECT_EQ(h1.coeffs, h2.coeffs);
    EXPECT_EQ(h1.low, h2.low);
  }
}

TEST(GroebnerProperty, QQMatchesFp) {
  auto Q = makeRing<QQ>();
  auto P = fp();
  const char* gens[] = {"x^2 - 3*y*z", "2*x*y + 5*w^2", "z^2 - x*w + 7*y^2"};
  std::vector<Poly<QQ>> iq;
  std::vector<Poly<Fp>> ip;
  for (const char* g : gens) {
    iq.push_back(parsePoly(g, Q));
    ip.push_back(parsePoly(g, P));
  }
  auto hq = hilbertSeriesQuotient(idealGroebnerBasis(Q, iq));
  auto hp = hilbertSeriesQuotient(idealGroebnerBasis(P, ip));
  EXPECT_EQ(hq.coeffs, hp.coeffs);
  EXPECT_EQ(hq.dimension(), 1);
}

TEST(Groebner, DegreeBoundTruncates) {
  auto R = fp();
  GroebnerOptions opt;
  opt.degreeBound = 2;
  auto gb = idealGroebnerBasis(R, polys(R, {"x*z - y^2", "y*w - z^2", "x*w - y*z", "x^3 + w^3"}), opt);
  for (std::size_t i = 0; i < gb.size(); ++i) EXPECT_LE(gb.degree(i), 2);
  EXPECT_FALSE(gb.complete());
}

TEST(Groebner, MinimalGenerators) {
  auto R = fp();
  GradedFree S({0});
  auto v = idealVecs(polys(R, {"x", "x*y", "y", "x + y", "z^2"}));
  auto m = minimalGenerators(R, S, v);
  EXPECT_EQ(m.size(), 3u);
}

TEST(Hilbert, MonomialExamples) {
  // S / (x, y, z, w) = 1
  auto h = hilbertSeriesMonomial({Monomial::var(0), Monomial::var(1), Monomial::var(2), Monomial::var(3)});
  EXPECT_EQ(h.valueAt(0), 1);
  EXPECT_EQ(h.valueAt(1), 0);
  EXPECT_EQ(h.dimension(), 0);
  EXPECT_EQ(hilbertSeriesMonomial({}).valueAt(2), 10);
  EXPECT_EQ(hilbertSeriesMonomial({Monomial()}).isZero(), true);
  EXPECT_EQ(hilbertSeriesFree(GradedFree({-1, 2})).valueAt(1), 10);
  EXPECT_EQ(hilbertSeriesMonomial({Monomial::var(0, 2)}).toString(), "1 - t^2");
}
