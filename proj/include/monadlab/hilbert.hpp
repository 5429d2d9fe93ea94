#pragma once

#include <algorithm>
#include <climits>
#include <sstream>
#include <string>
#include <vector>

#include "groebner.hpp"

namespace monadlab {

/// Hilbert series N(t) / (1-t)^4 with N a Laurent polynomial:
/// N(t) = sum_i coeffs[i] t^(low + i).
struct HilbertSeries {
  int low = 0;
  std::vector<long long> coeffs;

  static HilbertSeries one() { return {0, {1}}; }

  void trim() {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    std::size_t k = 0;
    while (k < coeffs.size() && coeffs[k] == 0) ++k;
    coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(k));
    low += static_cast<int>(k);
    if (coeffs.empty()) low = 0;
  }
  bool isZero() const { return coeffs.empty(); }
  long long coefficient(int e) const {
    int i = e - low;
    return (i >= 0 && i < static_cast<int>(coeffs.size())) ? coeffs[static_cast<std::size_t>(i)] : 0;
  }

  HilbertSeries& addShifted(const HilbertSeries& o, int shift, long long sign = 1) {
    if (o.isZero()) return *this;
    int lo = isZero() ? o.low + shift : std::min(low, o.low + shift);
    int hi = std::max(isZero() ? o.low + shift : low + static_cast<int>(coeffs.size()) - 1,
                      o.low + shift + static_cast<int>(o.coeffs.size()) - 1);
    std::vector<long long> c(static_cast<std::size_t>(hi - lo + 1), 0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) c[static_cast<std::size_t>(low - lo) + i] += coeffs[i];
    for (std::size_t i = 0; i < o.coeffs.size(); ++i)
      c[static_cast<std::size_t>(o.low + shift - lo) + i] += sign * o.coeffs[i];
    low = lo;
    coeffs = std::move(c);
    trim();
    return *this;
  }

  /// Coefficient of t^d in the power series.
  long long valueAt(int d) const {
    long long s = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      long long n = d - (low + static_cast<int>(i));
      if (n >= 0) s += coeffs[i] * (n + 3) * (n + 2) * (n + 1) / 6;
    }
    return s;
  }

  /// Writes N(t) = (1-t)^k Q(t) with k maximal (k <= 4); returns k.
  int reduced(std::vector<long long>& q) const {
    q = coeffs;
    int k = 0;
    while (k < 4 && !q.empty()) {
      long long sum = 0;
      for (long long c : q) sum += c;
      if (sum != 0) break;
      // divide by (1 - t)
      std::vector<long long> r(q.size() - 1);
      long long run = 0;
      for (std::size_t i = 0; i + 1 < q.size(); ++i) {
        run += q[i];
        r[i] = run;
      }
      q = std::move(r);
      ++k;
    }
    return k;
  }

  /// Krull dimension of the module (-1 for zero).
  int dimension() const {
    if (isZero()) return -1;
    std::vector<long long> q;
    return 4 - reduced(q);
  }

  /// Hilbert polynomial evaluated at d (agrees with valueAt for d >> 0).
  long long polynomialAt(int d) const {
    if (isZero()) return 0;
    std::vector<long long> q;
    int r = 4 - reduced(q);  // series Q / (1-t)^r
    if (r == 0) return 0;
    long long s = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      long long n = d - (low + static_cast<long long>(i)) + r - 1;  // C(n, r-1) as polynomial in n
      long long num = 1, den = 1;
      for (int j = 0; j < r - 1; ++j) {
        num *= (n - j);
        den *= (j + 1);
      }
      s += q[i] * (num / den);
    }
    return s;
  }

  std::string toString() const {
    if (isZero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      long long c = coeffs[i];
      if (c == 0) continue;
      int e = low + static_cast<int>(i);
      os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
      long long a = c < 0 ? -c : c;
      if (e == 0 || a != 1) os << a;
      if (e != 0) os << (a != 1 ? "*" : "") << "t" << (e != 1 ? "^" + std::to_string(e) : "");
      first = false;
    }
    return os.str();
  }
};

namespace detail {

inline std::vector<Monomial> minimalizeMonomials(std::vector<Monomial> g) {
  std::sort(g.begin(), g.end(), [](Monomial a, Monomial b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.bits() < b.bits();
  });
  g.erase(std::unique(g.begin(), g.end()), g.end());
  std::vector<Monomial> out;
  for (Monomial m : g) {
    bool redundant = false;
    for (Monomial o : out)
      if (o.divides(m)) {
        redundant = true;
        break;
      }
    if (!redundant) out.push_back(m);
  }
  return out;
}

// Numerator of the Hilbert series of S/I, pivoting on variable powers.
inline HilbertSeries monomialNumerator(std::vector<Monomial> gens) {
  gens = minimalizeMonomials(std::move(gens));
  HilbertSeries h = HilbertSeries::one();
  if (gens.empty()) return h;
  for (Monomial m : gens)
    if (m.isOne()) return {};
  // Pairwise coprime: product of (1 - t^deg).
  int shared = -1;
  for (int v = 0; v < 4 && shared < 0; ++v) {
    int count = 0;
    for (Monomial m : gens)
      if (m.exponent(v) > 0) ++count;
    if (count >= 2) shared = v;
  }
  if (shared < 0) {
    for (Monomial m : gens) {
      HilbertSeries prev = h;
      h.addShifted(prev, m.degree(), -1);
    }
    return h;
  }
  // Pivot on the variable shared by the most generators.
  int bestVar = shared, bestCount = 0;
  for (int v = 0; v < 4; ++v) {
    int count = 0;
    for (Monomial m : gens)
      if (m.exponent(v) > 0) ++count;
    if (count > bestCount) bestCount = count, bestVar = v;
  }
  int e = INT_MAX;
  for (Monomial m : gens)
    if (m.exponent(bestVar) > 0) e = std::min(e, m.exponent(bestVar));
  Monomial p = Monomial::var(bestVar, e);
  std::vector<Monomial> plus = gens;
  plus.push_back(p);
  std::vector<Monomial> colon;
  for (Monomial m : gens) colon.push_back(m.gcd(p).quotientOf(m));
  HilbertSeries a = monomialNumerator(std::move(plus));
  HilbertSeries b = monomialNumerator(std::move(colon));
  return a.addShifted(b, e);
}

} // namespace detail

/// Hilbert series numerator of S/I for a monomial ideal.
inline HilbertSeries hilbertSeriesMonomial(const std::vector<Monomial>& gens) {
  return detail::monomialNumerator(gens);
}

/// Hilbert series of F/U from a Gröbner basis of U.
template <class F>
HilbertSeries hilbertSeriesQuotient(const GroebnerBasis<F>& gb) {
  const GradedFree& F0 = gb.ambient();
  std::vector<std::vector<Monomial>> leads(F0.rank());
  for (std::size_t i = 0; i < gb.size(); ++i) leads[gb.leadComponent(i)].push_back(gb.leadMonomial(i));
  HilbertSeries h;
  for (std::size_t c = 0; c < F0.rank(); ++c) h.addShifted(hilbertSeriesMonomial(leads[c]), F0.degree(c));
  return h;
}

/// Hilbert series of a free module.
inline HilbertSeries hilbertSeriesFree(const GradedFree& F0) {
  HilbertSeries h;
  for (int d : F0.degrees) h.addShifted(HilbertSeries::one(), d);
  return h;
}

} // namespace monadlab
