#include <gtest/gtest.h>

#include <random>

#include "monadlab/parse.hpp"

using namespace monadlab;

namespace {

RingPtr<QQ> qq() {
  static auto r = makeRing<QQ>();
  return r;
}
RingPtr<Fp> fp(std::uint32_t p = 32003) { return makeRing<Fp>(Fp(p)); }

template <class F>
Poly<F> randomPoly(std::mt19937& rng, const RingPtr<F>& R, int maxTerms = 8, int maxDeg = 6) {
  std::uniform_int_distribution<int> nt(0, maxTerms), cd(-9, 9), ed(0, maxDeg);
  std::vector<PolyTerm<F>> ts;
  int n = nt(rng);
  for (int i = 0; i < n; ++i) {
    int e[4], budget = ed(rng);
    for (int v = 0; v < 4; ++v) {
      e[v] = std::uniform_int_distribution<int>(0, budget)(rng);
      budget -= e[v];
    }
    ts.push_back({Monomial::fromExponents(e[0], e[1], e[2], e[3]), R->field.fromInt(cd(rng))});
  }
  return Poly<F>::fromTerms(R, ts);
}

template <class F>
bool canonical(const Poly<F>& p) {
  const auto& t = p.terms();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (p.field().isZero(t[i].coef)) return false;
    if (i && p.ring()->key(t[i - 1].mono) <= p.ring()->key(t[i].mono)) return false;
  }
  return true;
}

}  // namespace

TEST(Field, FpArithmetic) {
  Fp k(7);
  EXPECT_EQ(k.add(5, 4), 2u);
  EXPECT_EQ(k.sub(2, 5), 4u);
  EXPECT_EQ(k.mul(3, 5), 1u);
  EXPECT_EQ(k.inv(3), 5u);
  EXPECT_EQ(k.fromInt(-1), 6u);
  EXPECT_THROW(k.inv(0), FieldError);
  EXPECT_THROW(Fp(4), FieldError);
  for (std::uint32_t a = 1; a < 7; ++a) EXPECT_EQ(k.mul(a, k.inv(a)), 1u);
}

TEST(Field, QQDivisionByZero) {
  QQ k;
  EXPECT_THROW(k.div(k.one(), k.zero()), FieldError);
  EXPECT_EQ(k.div(k.fromInt(1), k.fromInt(2)), mpq_class(1, 2));
}

TEST(Monomial, Divisibility) {
  auto a = Monomial::fromExponents(1, 2, 0, 3), b = Monomial::fromExponents(2, 2, 1, 3);
  EXPECT_TRUE(a.divides(b));
  EXPECT_FALSE(b.divides(a));
  EXPECT_EQ(a.quotientOf(b), Monomial::fromExponents(1, 0, 1, 0));
  EXPECT_EQ(a.lcm(Monomial::fromExponents(0, 5, 1, 0)), Monomial::fromExponents(1, 5, 1, 3));
  EXPECT_EQ(a.degree(), 6);
  EXPECT_THROW(Monomial::fromExponents(20000, 20000, 0, 0), DegreeOverflow);
  EXPECT_THROW(Monomial::var(0, 20000) * Monomial::var(1, 20000), DegreeOverflow);
}

TEST(Monomial, GrevlexOrder) {
  auto R = qq();
  // x > y > z > w, and xw < xz < y^2 under grevlex.
  auto k = [&](int a, int b, int c, int d) { return R->key(Monomial::fromExponents(a, b, c, d)); };
  EXPECT_GT(k(1, 0, 0, 0), k(0, 1, 0, 0));
  EXPECT_GT(k(0, 0, 1, 0), k(0, 0, 0, 1));
  EXPECT_GT(k(0, 2, 0, 0), k(1, 0, 1, 0));
  EXPECT_GT(k(1, 0, 1, 0), k(1, 0, 0, 1));
  EXPECT_GT(k(0, 2, 0, 0), k(1, 0, 0, 1));
  EXPECT_GT(k(0, 0, 0, 2), k(1, 0, 0, 0));
}

TEST(Parse, Examples) {
  auto R = qq();
  auto f = parsePoly("x*z + y^2", R);
  EXPECT_EQ(f.size(), 2u);
  EXPECT_EQ(f.homogeneousDegree().value(), 2);
  EXPECT_EQ(f.toString(), "y^2 + x*z");
  EXPECT_TRUE(parsePoly("y*w - w^2 - (y*w - w^2)", R).isZero());
  auto g = parsePoly("w^5", R);
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.homogeneousDegree().value(), 5);
}

TEST(Parse, Grammar) {
  auto R = qq();
  EXPECT_EQ(parsePoly("x*z + y^(2)", R), parsePoly("xz+y^2", R));
  EXPECT_EQ(parsePoly("2x^2w", R).toString(), "2*x^2*w");
  EXPECT_EQ(parsePoly("-(x+y)^2", R).toString(), "-x^2 - 2*x*y - y^2");
  EXPECT_EQ(parsePoly("x/2", R).toString(), "1/2*x");
  EXPECT_EQ(parsePoly("123456789012345678901234567890", R).toString(), "123456789012345678901234567890");
}

TEST(Parse, Errors) {
  auto R = qq();
  try {
    parsePoly("x + q", R);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
    EXPECT_NE(std::string(e.what()).find("unknown variable"), std::string::npos);
  }
  EXPECT_THROW(parsePoly("x^-2", R), ParseError);
  EXPECT_THROW(parsePoly("x +", R), ParseError);
  EXPECT_THROW(parsePoly("(x", R), ParseError);
  EXPECT_THROW(parsePoly("", R), ParseError);
  EXPECT_THROW(parsePoly("x/y", R), ParseError);
  EXPECT_THROW(parsePoly("x/0", R), ParseError);
}

TEST(Poly, Arithmetic) {
  auto R = qq();
  auto p = [&](const char* s) { return parsePoly(s, R); };
  EXPECT_TRUE((p("x") + p("-x")).isZero());
  EXPECT_EQ((p("x^2") + p("y^2")).size(), 2u);
  EXPECT_EQ(p("x^3+z^3") + p("w^3-x^3"), p("z^3+w^3"));
  EXPECT_EQ(p("x+y") * p("1"), p("x+y"));
  EXPECT_EQ(p("x+y") * p("x-y"), p("x^2-y^2"));
  auto R3 = fp(3);
  EXPECT_EQ(parsePoly("(x+y)^3", R3), parsePoly("x^3+y^3", R3));
}

TEST(Poly, HomogeneousDegree) {
  auto R = qq();
  EXPECT_EQ(parsePoly("x^2*w", R).homogeneousDegree().value(), 3);
  EXPECT_FALSE(parsePoly("x^2 + w", R).homogeneousDegree().value().has_value());
  EXPECT_EQ(parsePoly("x^2 + w", R).homogeneousDegree().kind, HomDegree::Kind::Inhomogeneous);
  EXPECT_TRUE(parsePoly("0", R).homogeneousDegree().isZero());
}

TEST(Poly, RingMismatch) {
  auto a = makeRing<QQ>(), b = makeRing<QQ>(QQ(), MonomialOrder::GLex);
  EXPECT_THROW(Poly<QQ>::variable(a, 0) + Poly<QQ>::variable(b, 0), RingMismatch);
}

TEST(PolyProperty, RingAxioms) {
  std::mt19937 rng(12345);
  auto R = qq();
  for (int it = 0; it < 200; ++it) {
    auto a = randomPoly(rng, R), b = randomPoly(rng, R), c = randomPoly(rng, R);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_TRUE((a - a).isZero());
    EXPECT_TRUE(canonical(a * b + c));
    EXPECT_TRUE(canonical(a - b * c));
  }
}

TEST(PolyProperty, ParsePrintFixedPoint) {
  std::mt19937 rng(7);
  auto R = qq();
  auto Rp = fp();
  for (int it = 0; it < 200; ++it) {
    auto a = randomPoly(rng, R) * randomPoly(rng, R, 3, 2);
    EXPECT_EQ(parsePoly(a.toString(), R), a);
    auto b = randomPoly(rng, Rp);
    EXPECT_EQ(parsePoly(b.toString(), Rp), b);
  }
}

TEST(PolyProperty, FpMatchesReducedQQ) {
  std::mt19937 rng(99);
  auto R = qq();
  Fp k(32003);
  auto Rp = fp();
  auto red = [&](const Poly<QQ>& f) { return f.mapCoefficients<Fp>(Rp, [&](const mpq_class& c) { return k.fromMpq(c); }); };
  for (int it = 0; it < 200; ++it) {
    auto a = randomPoly(rng, R), b = randomPoly(rng, R), c = randomPoly(rng, R);
    auto q = a * b - c * c + a;
    auto p = red(a) * red(b) - red(c) * red(c) + red(a);
    EXPECT_EQ(red(q), p);
  }
}
