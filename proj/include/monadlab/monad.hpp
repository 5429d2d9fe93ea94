#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sheafcoh.hpp"

namespace monadlab {

class MonadError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// 0 -> left --alpha--> middle --beta--> right -> 0 with E = ker beta / im alpha.
/// Module degrees are generator degrees, so O(t) appears as degree -t.
template <class F>
struct Monad {
  GradedMap<F> alpha, beta;

  const RingPtr<F>& ring() const { return alpha.ring(); }
  const GradedFree& left() const { return alpha.source(); }
  const GradedFree& middle() const { return alpha.target(); }
  const GradedFree& right() const { return beta.target(); }

  bool operator==(const Monad& o) const { return alpha == o.alpha && beta == o.beta; }
};

template <class F>
Monad<F> makeMonad(GradedMap<F> alpha, GradedMap<F> beta) {
  if (alpha.target() != beta.source()) throw MonadError("alpha target and beta source differ");
  if (!alpha.ring()->sameAs(*beta.ring())) throw RingMismatch("alpha and beta live over different rings");
  return Monad<F>{std::move(alpha), std::move(beta)};
}

/// Sheaf twists of a free module: O(t) for every generator of degree -t.
inline std::vector<int> twists(const GradedFree& M) {
  std::vector<int> t;
  for (int d : M.degrees) t.push_back(-d);
  return t;
}

/// Multiset notation "t1^m1,t2^m2" with twists in increasing order.
inline std::string multisetString(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    if (i) os << ",";
    os << v[i];
    if (j - i > 1) os << "^" << (j - i);
    i = j;
  }
  return os.str();
}

/// Type of a monad: the twists of the right-hand module ("extremes") and of
/// the middle, plus the nonnegative half of a self-dual middle.
struct MonadType {
  std::vector<int> extremes, middle;
  /// Empty if the middle is not of the form sum O(b) + O(-b).
  std::optional<std::vector<int>> middleHalf;
};

template <class F>
MonadType monadType(const Monad<F>& m) {
  MonadType t;
  t.extremes = twists(m.right());
  t.middle = twists(m.middle());
  std::sort(t.extremes.begin(), t.extremes.end());
  std::sort(t.middle.begin(), t.middle.end());
  std::map<int, int> count;
  for (int b : t.middle) ++count[b];
  std::vector<int> half;
  bool ok = true;
  for (auto& [b, n] : count) {
    if (b < 0) continue;
    if (b == 0) {
      if (n % 2) ok = false;
      for (int i = 0; i < n / 2; ++i) half.push_back(0);
    } else {
      if (count[-b] != n) ok = false;
      for (int i = 0; i < n; ++i) half.push_back(b);
    }
  }
  if (ok && 2 * half.size() == t.middle.size()) t.middleHalf = half;
  return t;
}

struct ChernData {
  long long c1 = 0, c2 = 0;
  bool operator==(const ChernData&) const = default;
};

/// Chern classes of the cohomology of a monad from the display:
/// c(E) = c(middle) / (c(left) c(right)), truncated after degree 2.
inline ChernData chernFromType(const std::vector<int>& left, const std::vector<int>& middle,
                               const std::vector<int>& right) {
  auto elem = [](const std::vector<int>& t, long long& e1, long long& e2) {
    e1 = 0;
    long long sq = 0;
    for (int x : t) {
      e1 += x;
      sq += static_cast<long long>(x) * x;
    }
    e2 = (e1 * e1 - sq) / 2;
  };
  long long b1, b2, l1, l2;
  elem(middle, b1, b2);
  std::vector<int> lr = left;
  lr.insert(lr.end(), right.begin(), right.end());
  elem(lr, l1, l2);
  ChernData c;
  c.c1 = b1 - l1;
  c.c2 = b2 - b1 * l1 + l1 * l1 - l2;
  return c;
}

template <class F>
ChernData chernClasses(const Monad<F>& m) {
  if (!m.beta.compose(m.alpha).isZero()) throw MonadError("beta * alpha is nonzero; not a monad");
  return chernFromType(twists(m.left()), twists(m.middle()), twists(m.right()));
}

template <class F>
long long bundleRank(const Monad<F>& m) {
  return static_cast<long long>(m.middle().rank()) - static_cast<long long>(m.left().rank()) -
         static_cast<long long>(m.right().rank());
}

namespace detail {

// Maximal minors of an r x k matrix (r >= k) given as rows of polynomials.
template <class F>
std::vector<Poly<F>> maximalMinors(const RingPtr<F>& ring, const std::vector<std::vector<Poly<F>>>& rows) {
  std::size_t r = rows.size(), k = r ? rows[0].size() : 0;
  std::vector<Poly<F>> out;
  if (k == 0 || r < k) return out;
  // det of rows in mask against columns (k - |mask|) .. k-1
  std::map<std::uint32_t, Poly<F>> memo;
  std::function<Poly<F>(std::uint32_t)> det = [&](std::uint32_t mask) -> Poly<F> {
    int n = __builtin_popcount(mask);
    if (n == 0) return Poly<F>::constant(ring, ring->field.one());
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    std::size_t col = k - static_cast<std::size_t>(n);
    Poly<F> s(ring);
    int sign = 1;
    for (std::uint32_t i = 0; i < r; ++i) {
      if (!(mask >> i & 1)) continue;
      const Poly<F>& e = rows[i][col];
      if (!e.isZero()) {
        Poly<F> term = e * det(mask & ~(1u << i));
        s = sign > 0 ? s + term : s - term;
      }
      sign = -sign;
    }
    memo.emplace(mask, s);
    return s;
  };
  for (std::uint32_t mask = 0; mask < (1u << r); ++mask)
    if (static_cast<std::size_t>(__builtin_popcount(mask)) == k) {
      Budget::check();
      Poly<F> d = det(mask);
      if (!d.isZero()) out.push_back(std::move(d));
    }
  return out;
}

template <class F>
std::vector<std::vector<Poly<F>>> matrixRows(const GradedMap<F>& m, bool transpose) {
  std::vector<std::vector<Poly<F>>> rows;
  if (!transpose) {
    for (std::size_t i = 0; i < m.numRows(); ++i) {
      rows.emplace_back();
      for (std::size_t j = 0; j < m.numCols(); ++j) rows.back().push_back(m.entry(i, j));
    }
  } else {
    for (std::size_t j = 0; j < m.numCols(); ++j) {
      rows.emplace_back();
      for (std::size_t i = 0; i < m.numRows(); ++i) rows.back().push_back(m.entry(i, j));
    }
  }
  return rows;
}

// Rank of a matrix of field elements.
template <class F>
std::size_t denseRank(const F& k, std::vector<std::vector<typename F::Elem>> m) {
  std::size_t rank = 0, cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && k.isZero(m[p][c])) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    auto inv = k.inv(m[rank][c]);
    for (std::size_t i = rank + 1; i < m.size(); ++i) {
      if (k.isZero(m[i][c])) continue;
      auto f = k.mul(m[i][c], inv);
      for (std::size_t j = c; j < cols; ++j) m[i][j] = k.sub(m[i][j], k.mul(f, m[rank][j]));
    }
    ++rank;
  }
  return rank;
}

// Rank of rows evaluated at a point; a deficiency at a random point means a
// rank drop everywhere.
template <class F>
std::size_t rankAt(const F& k, const std::vector<std::vector<Poly<F>>>& rows, const std::vector<typename F::Elem>& pt) {
  std::vector<std::vector<typename F::Elem>> v;
  for (const auto& r : rows) {
    v.emplace_back();
    for (const auto& e : r) v.back().push_back(e.evaluate(pt));
  }
  return denseRank(k, std::move(v));
}

// Fiberwise full rank of an r x k matrix (r >= k): the maximal minors cut out
// the empty set in P^3.
template <class F>
bool fullRankEverywhere(const RingPtr<F>& ring, const std::vector<std::vector<Poly<F>>>& rows, std::string& witness) {
  std::size_t k = rows.empty() ? 0 : rows[0].size();
  if (k == 0) return true;
  if (rows.size() < k) {
    witness = "fewer rows than columns";
    return false;
  }
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> dist(-1000, 1000);
  int drops = 0;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<typename F::Elem> pt;
    for (int v = 0; v < 4; ++v) pt.push_back(ring->field.fromInt(dist(rng)));
    if (rankAt(ring->field, rows, pt) < k) ++drops;
  }
  if (drops == 3) {
    witness = "rank drops at every sampled point";
    return false;
  }
  auto minors = maximalMinors(ring, rows);
  if (minors.empty()) {
    witness = "all maximal minors vanish";
    return false;
  }
  if (!isZeroDimensional(ring, minors)) {
    witness = "the maximal minors vanish on a positive-dimensional locus (dim " +
              std::to_string(krullDim(ring, minors) - 1) + " in P^3)";
    return false;
  }
  return true;
}

}  // namespace detail

struct ValidationReport {
  bool compositionZero = false;
  bool homogeneous = false;
  bool fiberInjective = false;
  bool fiberSurjective = false;
  bool minimal = false;
  std::optional<bool> stable;
  std::vector<std::string> witnesses;

  bool ok() const {
    return compositionZero && homogeneous && fiberInjective && fiberSurjective && minimal && stable.value_or(true);
  }
  std::string toString() const {
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    std::ostringstream os;
    os << "composition zero: " << yn(compositionZero) << "\n"
       << "homogeneous:      " << yn(homogeneous) << "\n"
       << "alpha injective:  " << yn(fiberInjective) << "\n"
       << "beta surjective:  " << yn(fiberSurjective) << "\n"
       << "minimal:          " << yn(minimal) << "\n";
    if (stable) os << "stable:           " << yn(*stable) << "\n";
    for (const auto& w : witnesses) os << "  - " << w << "\n";
    return os.str();
  }
};

template <class F>
Subquotient<F> cohomologyBundle(const Monad<F>& m) {
  return homologyModule(m.beta, m.alpha);
}

/// Stability of a rank 2 bundle: no sections after normalizing c1 to 0 or -1.
template <class F>
bool isStable(const Subquotient<F>& E, long long c1) {
  long long k = c1 >= 0 ? -((c1 + 1) / 2) : (-c1) / 2;
  return sheafCohomology(E, 0, static_cast<int>(k)) == 0;
}

template <class F>
ValidationReport validateMonad(const Monad<F>& m, bool checkStability = false) {
  ValidationReport r;
  const auto& ring = m.ring();
  std::string ha = m.alpha.degreeViolation(), hb = m.beta.degreeViolation();
  r.homogeneous = ha.empty() && hb.empty();
  if (!ha.empty()) r.witnesses.push_back("alpha " + ha);
  if (!hb.empty()) r.witnesses.push_back("beta " + hb);

  auto ba = m.beta.compose(m.alpha);
  r.compositionZero = ba.isZero();
  if (!r.compositionZero)
    for (std::size_t j = 0; j < ba.numCols() && r.witnesses.size() < 8; ++j)
      if (!ba.column(j).empty()) {
        std::size_t i = ba.column(j).front().comp;
        r.witnesses.push_back("beta*alpha entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                              ") = " + ba.entry(i, j).toString());
        break;
      }

  r.minimal = true;
  auto scanUnits = [&](const GradedMap<F>& g, const char* name) {
    for (std::size_t j = 0; j < g.numCols(); ++j)
      for (const auto& t : g.column(j))
        if (t.mono.isOne()) {
          r.minimal = false;
          r.witnesses.push_back(std::string(name) + " entry (" + std::to_string(t.comp + 1) + "," +
                                std::to_string(j + 1) + ") is a nonzero constant");
        }
  };
  scanUnits(m.alpha, "alpha");
  scanUnits(m.beta, "beta");

  if (r.homogeneous) {
    std::string w;
    r.fiberInjective = detail::fullRankEverywhere(ring, detail::matrixRows(m.alpha, false), w);
    if (!r.fiberInjective) r.witnesses.push_back("alpha: " + w);
    w.clear();
    r.fiberSurjective = detail::fullRankEverywhere(ring, detail::matrixRows(m.beta, true), w);
    if (!r.fiberSurjective) r.witnesses.push_back("beta: " + w);
  }

  if (checkStability) {
    if (!(r.compositionZero && r.homogeneous && r.fiberInjective && r.fiberSurjective)) {
      r.witnesses.push_back("stability not checked: not a monad of bundles");
    } else if (bundleRank(m) != 2) {
      r.witnesses.push_back("stability not checked: rank " + std::to_string(bundleRank(m)) + " is not 2");
    } else {
      auto E = cohomologyBundle(m);
      r.stable = isStable(E, chernClasses(m).c1);
      if (!*r.stable) r.witnesses.push_back("the normalized bundle has nonzero global sections");
    }
  }
  return r;
}

/// Spectrum of a stable rank 2 bundle with c1 in {0, -1}, sorted.
struct Spectrum {
  std::vector<int> values;

  /// "{-2,-2,-1,...}".
  std::string toString() const {
    std::string s = "{";
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
    return s + "}";
  }
  /// Nonnegative half in multiset notation, "{0^3,1^3,2^3}".
  std::string halfString() const {
    std::vector<int> nn;
    for (int v : values)
      if (v >= 0) nn.push_back(v);
    return "{" + multisetString(nn) + "}";
  }
  bool operator==(const Spectrum&) const = default;
};

/// Spectrum from h^1(E(-l)), l >= 1: #{k >= i-1} = h^1(E(-i)) - h^1(E(-i-1)).
/// The negative half follows from k -> -k (c1 = 0) or k -> -1-k (c1 = -1).
inline Spectrum spectrumFromH1(const std::vector<long long>& h1, long long c1) {
  // h1[l-1] = h^1(E(-l)); trailing zero expected
  std::vector<long long> atLeast;  // atLeast[j] = #{k >= j}
  for (std::size_t i = 0; i + 1 < h1.size(); ++i) atLeast.push_back(h1[i] - h1[i + 1]);
  atLeast.push_back(0);
  Spectrum s;
  for (std::size_t j = 0; j + 1 < atLeast.size(); ++j) {
    long long mult = atLeast[j] - atLeast[j + 1];
    if (mult < 0) throw MonadError("h^1 differences are not monotone; no spectrum");
    int k = static_cast<int>(j);
    for (long long n = 0; n < mult; ++n) {
      s.values.push_back(k);
      if (c1 == 0 && k > 0) s.values.push_back(-k);
      if (c1 == -1) s.values.push_back(-1 - k);
    }
  }
  std::sort(s.values.begin(), s.values.end());
  return s;
}

/// h^1(E(-l)) for l = 1, 2, ... up to and including the first zero past the
/// point where every later value must vanish.
template <class F>
std::vector<long long> h1Sequence(const Subquotient<F>& E, long long c2) {
  std::vector<long long> h;
  // spectrum entries satisfy |k| <= c2, so h^1(E(-l)) = 0 once l > c2 + 1
  for (long long l = 1; l <= c2 + 2; ++l) {
    long long v = sheafCohomology(E, 1, static_cast<int>(-l));
    h.push_back(v);
    if (v == 0) break;
  }
  return h;
}

template <class F>
Spectrum spectrum(const Monad<F>& m) {
  auto ch = chernClasses(m);
  if (ch.c1 != 0 && ch.c1 != -1) throw MonadError("spectrum needs c1 in {0, -1}");
  if (bundleRank(m) != 2) throw MonadError("spectrum needs a rank 2 bundle");
  auto E = cohomologyBundle(m);
  if (!isStable(E, ch.c1)) throw MonadError("spectrum needs a stable bundle");
  auto s = spectrumFromH1(h1Sequence(E, ch.c2), ch.c1);
  if (static_cast<long long>(s.values.size()) != ch.c2)
    throw MonadError("spectrum has " + std::to_string(s.values.size()) + " entries, expected c2 = " +
                     std::to_string(ch.c2));
  return s;
}

/// dim Ext^1(E, E) = h^1(E (x) E) for c1 = 0 and h^1(E(1) (x) E) for c1 = -1.
template <class F>
long long tangentDim(const Monad<F>& m) {
  auto ch = chernClasses(m);
  if (ch.c1 != 0 && ch.c1 != -1) throw MonadError("tangent dimension needs c1 in {0, -1}");
  auto E = cohomologyBundle(m);
  auto T = ch.c1 == 0 ? tensorModules(E, E) : tensorModules(twist(E, 1), E);
  return sheafCohomology(T, 1, 0);
}

/// Expected dimension 8 c2 - 3 + 2 c1.
inline long long expectedDim(const ChernData& ch) { return 8 * ch.c2 - 3 + 2 * ch.c1; }

/// dim Ext^2(E, E) from dim Ext^1 - dim Ext^2 = 8 c2 - 3 + 2 c1.
inline long long ext2Dim(long long tangent, const ChernData& ch) {
  long long e = tangent - expectedDim(ch);
  if (e < 0)
    throw MonadError("tangent dimension " + std::to_string(tangent) + " is below the expected dimension " +
                     std::to_string(expectedDim(ch)));
  return e;
}

}  // namespace monadlab
