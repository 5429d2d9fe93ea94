// Acceptance run: one PASS/FAIL line per criterion. Expected values and time
// limits are pinned below. A criterion on the known-unattainable list still
// prints FAIL when it fails, but does not change the exit status.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "monadlab/components.hpp"
#include "monadlab/fixtures.hpp"
#include "monadlab/monad_io.hpp"
#include "monadlab/reports.hpp"
#include "oracles.hpp"

using namespace monadlab;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  template <class T>
  void equal(const T& got, const T& want, const std::string& what) {
    std::ostringstream os;
    os << what << " = " << got;
    if (!(got == want)) os << " (expected " << want << ")";
    check(got == want, os.str());
  }
};

struct Criterion {
  int id;
  std::string title;
  double limitSeconds;
  std::function<void(Outcome&)> run;
};

// Criteria whose failure is explained in the project notes. They must still fail
// loudly; the entry only keeps the exit status usable.
const std::set<int> kKnownUnattainable = {2};

RingPtr<Fp> fp() {
  static auto r = makeRing<Fp>(Fp(32003));
  return r;
}

std::string str(const std::vector<long long>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

struct Named {
  std::string name;
  FixtureParams params;
  std::string label() const {
    std::string s = name;
    for (const auto& [k, v] : params) s += " " + k + "=" + std::to_string(v);
    return s;
  }
};

// Every bundled fixture at the parameters the published numbers use.
std::vector<Named> fixtureCorpus() {
  return {{"thm34", {}},
          {"table1-row1", {}},
          {"table1-row2", {}},
          {"table1-row3", {}},
          {"ex32", {}},
          {"M0", {{"a", 2}}},
          {"M0", {{"a", 3}}},
          {"M0", {{"a", 4}}},
          {"family2", {{"a", 3}}},
          {"family2", {{"a", 4}}},
          {"family2-tilde", {{"a", 3}}},
          {"k3", {{"a", 3}, {"b", 0}}},
          {"k3", {{"a", 3}, {"b", 1}}},
          {"k3", {{"a", 3}, {"b", 2}}},
          {"k4", {{"a", 3}, {"b", 0}}},
          {"k4", {{"a", 3}, {"b", 1}}},
          {"k4", {{"a", 3}, {"b", 2}}}};
}

void criterion1(Outcome& o) {
  std::vector<long long> e;
  for (const char* n : {"table1-row1", "table1-row2", "table1-row3"}) e.push_back(tangentDim(fixture(fp(), n)));
  o.equal(str(e), std::string("(45,48,45)"), "tangent dimensions of the three c2 = 6 rows");
}

void criterion2(Outcome& o) {
  auto m = fixture(fp(), "thm34");
  auto ch = chernClasses(m);
  long long e = tangentDim(m);
  o.equal(e, 45LL, "dim Ext^1(E,E)");
  long long ext2 = ext2Direct(m);
  o.equal(e - ext2, expectedDim(ch), "dim Ext^1 - dim Ext^2 against 8c2-3+2c1");
  o.equal(ext2, 0LL, "dim Ext^2(E,E)");
  std::string verdict = e == 45 ? "smooth point (tangent dimension equals the component bound 45)" : "not decided";
  o.check(e == 45, "verdict: " + verdict);
}

void criterion3(Outcome& o) { o.equal(tangentDim(fixture(fp(), "ex32")), 79LL, "dim Ext^1(E,E) for ex32"); }

void criterion4(Outcome& o) {
  long long e = tangentDim(fixture(fp(), "family2", {{"a", 3}}));
  long long et = tangentDim(fixture(fp(), "family2-tilde", {{"a", 3}}));
  o.equal(str({et, e}), std::string("(76,79)"), "(e~, e)");
  long long closed = 6 * 9 + 8 * 3 + 2;
  o.equal(familyDim(3, 1, 2) + 2 * 3, closed, "dim V + 2a at a = 3");
  o.check(e != closed, "e = " + std::to_string(e) + " differs from 6a^2+8a+2 = " + std::to_string(closed));
  JobContext ctx;
  ctx.goldenDir = MONADLAB_GOLDEN_DIR;
  auto r = reportSingular42(fp(), ctx, 4);
  bool noted = false;
  for (const auto& n : r.notes) noted = noted || n.find("79 != 6a^2+8a+2 = 80") != std::string::npos;
  o.check(noted && r.ok(), "singular42 report notes the a = 3 exception and matches its expected values");
}

void criterion5(Outcome& o) {
  for (int a : {2, 3}) {
    std::vector<int> want;
    for (int k = 1 - a; k <= a - 1; ++k) want.insert(want.end(), {k, k});
    o.equal(spectrum(fixture(fp(), "M0", {{"a", a}})).toString(), Spectrum{want}.toString(),
            "spectrum of M0(" + std::to_string(a) + ")");
  }
  o.equal(spectrum(fixture(fp(), "family2", {{"a", 3}})).toString(), std::string("{-2,-2,-1,-1,0,1,1,2,2}"),
          "spectrum of family2(3)");
  auto E = cohomologyBundle(fixture(fp(), "M0", {{"a", 3}}));
  for (int l = 1; l <= 3; ++l)
    o.equal(sheafCohomology(E, 1, -l), static_cast<long long>((3 - l + 1) * (3 - l + 2)),
            "h^1(E(-" + std::to_string(l) + ")) on M0(3)");
}

void criterion6(Outcome& o) {
  o.equal(sheafCohomology(cohomologyBundle(fixture(fp(), "k3", {{"a", 3}, {"b", 0}})), 1, -2), 9LL,
          "h^1(E(-2)) on k3(3,0)");
}

void criterion7(Outcome& o) {
  auto show = [](const std::vector<EinParams>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].toString();
    return s + "}";
  };
  o.equal(show(einTriples(15)), std::string("{(0,1,4),(0,7,8),(1,3,5)}"), "einTriples(15)");
  o.equal(show(einTriples(14)), std::string("{(1,1,4)}"), "einTriples(14)");
  o.equal(show(einTriples(10)), std::string("{}"), "einTriples(10)");
}

void criterion8(Outcome& o) {
  o.equal(einDim({1, 1, 4}), 117LL, "einDim(1,1,4)");
  struct Row {
    int a, b, k;
    long long dim;
  };
  const Row rows[] = {{3, 0, 2, 80},  {4, 0, 2, 128}, {2, 0, 2, 44},  {3, 0, 3, 117}, {3, 1, 3, 112},
                      {3, 2, 3, 93},  {4, 0, 4, 239}, {4, 1, 4, 235}, {4, 2, 4, 222}, {4, 3, 4, 189},
                      {3, 0, 4, 151}, {3, 1, 4, 147}, {3, 2, 4, 130}};
  for (const auto& r : rows)
    o.equal(familyDim(r.a, r.b, r.k), r.dim,
            "familyDim(" + std::to_string(r.a) + "," + std::to_string(r.b) + "," + std::to_string(r.k) + ")");
  o.check(formula33SelfTest(), "formula33 self-test");
  std::vector<long long> f;
  for (int a : {2, 3, 4}) f.push_back(formula33(Formula33Inputs::forFamily(a)));
  o.equal(str(f), std::string("(44,80,128)"), "formula33 at a = 2, 3, 4");
}

void criterion9(Outcome& o) {
  o.equal(dominanceSweep(2, 0, 3, 30).violations(), std::size_t{0}, "violations for k=2, b=0, a in [3,30]");
  o.equal(dominanceSweep(2, 1, 3, 30).violations(), std::size_t{0}, "violations for k=2, b=1, a in [3,30]");
  auto low = dominanceSweep(2, 0, 2, 2);
  bool seen = low.rows.size() == 1 && low.rows[0].violation() && low.rows[0].family.value == 44 &&
              low.rows[0].best().dim == 45;
  o.check(seen, "a = 2 reports the violation 44 < 45");
  bool parity = true;
  for (int a = 1; a <= 30; ++a) parity = parity && parityFilterCheck(4LL * a - 2);
  o.check(parity, "parity filter holds for c2 = 4a - 2, a <= 30");
}

Poly<Fp> randomForm(std::mt19937& rng, int d, int terms) {
  auto mons = oracle::monomialsOfDegree(d);
  std::uniform_int_distribution<std::size_t> pick(0, mons.size() - 1);
  std::uniform_int_distribution<int> coef(-7, 7);
  std::vector<PolyTerm<Fp>> ts;
  for (int i = 0; i < terms; ++i) ts.push_back({mons[pick(rng)], fp()->field.fromInt(coef(rng))});
  return Poly<Fp>::fromTerms(fp(), ts);
}

void criterion10(Outcome& o) {
  // Groebner certificates and normal forms on a seeded random corpus
  std::mt19937 rng(20031);
  bool certs = true, idem = true;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Poly<Fp>> I;
    for (int i = 0; i < 2 + trial % 3; ++i) I.push_back(randomForm(rng, 2 + i % 2, 2 + trial % 5));
    auto gb = idealGroebnerBasis(fp(), I);
    std::vector<Poly<Fp>> b;
    for (std::size_t i = 0; i < gb.size(); ++i) b.push_back(vecEntry(gb.ring(), gb.generator(i), 0));
    certs = certs && isGroebnerBasis(gb) && oracle::allSPolysReduce(b);
    for (int i = 0; i < 4; ++i) {
      auto f = randomForm(rng, 3, 6);
      auto n = normalForm(f, gb);
      idem = idem && normalForm(n, gb) == n && gb.contains(vecFromPolys(std::vector<Poly<Fp>>{f - n}));
    }
  }
  o.check(certs, "S-pair certificates on 40 random ideals");
  o.check(idem, "normal form idempotence and membership of f - NF(f)");

  // Hilbert functions against the dense slice oracle
  std::string hfBad;
  for (const auto& c : fixtureCorpus()) {
    auto E = cohomologyBundle(fixture(fp(), c.name, c.params));
    for (int d = -6; d <= 10 && hfBad.empty(); ++d)
      if (hilbertFunction(E, d) !=
          oracle::subquotientDim(*E.ring(), E.ambient(), E.gens().columns(), E.rels().columns(), d))
        hfBad = c.label() + " d=" + std::to_string(d);
  }
  o.check(hfBad.empty(), "Hilbert function equals the slice oracle on every fixture, d in [-6,10]" +
                             (hfBad.empty() ? "" : " (first difference: " + hfBad + ")"));

  // line bundles
  auto binom3 = [](long long n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; };
  bool lines = true;
  for (int t : {-4, -2, 0, 1, 3}) {
    auto M = Subquotient<Fp>::free(fp(), GradedFree::fromTwists({t}));
    for (int d = -8; d <= 8; ++d) {
      int n = t + d;
      lines = lines && sheafCohomology(M, 0, d) == binom3(n + 3) && sheafCohomology(M, 1, d) == 0 &&
              sheafCohomology(M, 2, d) == 0 && sheafCohomology(M, 3, d) == binom3(-n - 1);
    }
  }
  o.check(lines, "line bundle cohomology closed forms, d in [-8,8]");

  // Euler characteristic from the display, Serre duality
  auto chiLine = [](long long n) { return (n + 1) * (n + 2) * (n + 3) / 6; };
  std::string eulerBad, serreBad;
  std::size_t validated = 0;
  for (const auto& c : fixtureCorpus()) {
    auto m = fixture(fp(), c.name, c.params);
    if (!validateMonad(m).ok()) continue;
    ++validated;
    auto E = cohomologyBundle(m);
    int c1 = static_cast<int>(chernClasses(m).c1);
    for (int d = -6; d <= 2; ++d) {
      long long chi = 0;
      for (int t : twists(m.middle())) chi += chiLine(t + d);
      for (int t : twists(m.left())) chi -= chiLine(t + d);
      for (int t : twists(m.right())) chi -= chiLine(t + d);
      if (eulerCharacteristic(E, d) != chi && eulerBad.empty()) eulerBad = c.label() + " d=" + std::to_string(d);
      for (int i = 0; i <= 3; ++i)
        if (sheafCohomology(E, i, d) != sheafCohomology(E, 3 - i, -c1 - d - 4) && serreBad.empty())
          serreBad = c.label() + " i=" + std::to_string(i) + " d=" + std::to_string(d);
    }
  }
  o.check(validated == fixtureCorpus().size(), std::to_string(validated) + " of " +
                                                   std::to_string(fixtureCorpus().size()) + " fixtures validate");
  o.check(eulerBad.empty(), "Euler characteristic display identity, d in [-6,2]" +
                                (eulerBad.empty() ? "" : " (first difference: " + eulerBad + ")"));
  o.check(serreBad.empty(),
          "Serre duality, d in [-6,2]" + (serreBad.empty() ? "" : " (first difference: " + serreBad + ")"));

  // file round trip
  std::string rtBad;
  for (const auto& c : fixtureCorpus()) {
    auto m = fixture(fp(), c.name, c.params);
    auto text = storeMonadText(m);
    auto back = buildMonad(parseMonadDocument(text), fp());
    if (!(back == m) || storeMonadText(back) != text) rtBad = c.label();
  }
  o.check(rtBad.empty(), "monad file round trip on every fixture" + (rtBad.empty() ? "" : " (fails: " + rtBad + ")"));
}

}  // namespace

int main() {
  // Time limits in seconds.
  const std::vector<Criterion> criteria = {
      {1, "tangent dimensions (45, 48, 45) of the c2 = 6 rows", 3 * 1800.0, criterion1},
      {2, "c1 = -1, c2 = 6: tangent 45, ext2 = 0, smooth point", 1800.0, criterion2},
      {3, "ex32 tangent dimension 79", 6 * 3600.0, criterion3},
      {4, "(e~, e) = (76, 79) and the a = 3 exception", 1800.0, criterion4},
      {5, "spectra and the h^1 sequence of M0(3)", 600.0, criterion5},
      {6, "h^1(E(-2)) = 9 on k3(3,0)", 6 * 3600.0, criterion6},
      {7, "Ein triples for c2 = 15, 14, 10", 1.0, criterion7},
      {8, "closed-form dimensions", 1.0, criterion8},
      {9, "dominance sweeps and the parity filter", 10.0, criterion9},
      {10, "property suites", 1800.0, criterion10},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    Outcome o;
    auto t0 = Clock::now();
    Budget budget(c.limitSeconds);
    try {
      BudgetScope scope(budget);
      c.run(o);
    } catch (const BudgetExceeded& e) {
      o.check(false, std::string("did not finish: ") + e.what());
    } catch (const std::exception& e) {
      o.check(false, std::string("error: ") + e.what());
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs > c.limitSeconds) o.check(false, "took longer than the limit");
    bool known = kKnownUnattainable.count(c.id) > 0;
    char head[64];
    std::snprintf(head, sizeof head, "criterion %2d: %s", c.id, o.pass ? "PASS" : "FAIL");
    std::printf("%s  %s  [%.2fs, limit %.0fs]%s\n", head, c.title.c_str(), secs, c.limitSeconds,
                !o.pass && known ? "  (known unattainable)" : "");
    for (const auto& l : o.lines) std::printf("      %s\n", l.c_str());
    std::fflush(stdout);
    if (!o.pass && !known) ++unexpected;
  }
  std::printf("%s\n", unexpected == 0 ? "acceptance: no unexpected failures" : "acceptance: unexpected failures");
  return unexpected == 0 ? 0 : 1;
}
