#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <vector>

#include "graded.hpp"

namespace monadlab {

/// Free resolution ... -> F_2 -> F_1 -> F_0 of coker(d_1); maps[k] is
/// d_{k+1} : F_{k+1} -> F_k.
template <class F>
struct FreeResolution {
  RingPtr<F> ring;
  std::vector<GradedMap<F>> maps;
  /// F_0, kept separately so that free modules (no maps) keep their rank.
  GradedFree top;
  /// False if the computation stopped at the length cap; Ext^i is then
  /// reliable only for i < length().
  bool complete = true;

  std::size_t length() const { return maps.size(); }
  GradedFree module(std::size_t k) const {
    if (k == 0) return maps.empty() ? top : maps[0].target();
    if (k <= maps.size()) return maps[k - 1].source();
    return GradedFree();
  }
  std::vector<std::size_t> bettiNumbers() const {
    std::vector<std::size_t> b;
    for (std::size_t k = 0; k <= maps.size(); ++k) b.push_back(module(k).rank());
    return b;
  }
};

class ExtIndexError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

namespace detail {

/// One level of a Schreyer frame: elements of F_{k-1} forming a Gröbner
/// basis for the order `order` on F_{k-1}.
template <class F>
struct SchreyerLevel {
  std::vector<EVec<F>> elems;
};

// Elements sorted by lead component, then lead monomial lex-descending; this
// keeps the frame length at most the number of variables.
template <class F>
void sortLevel(std::vector<EVec<F>>& elems) {
  std::stable_sort(elems.begin(), elems.end(), [](const EVec<F>& a, const EVec<F>& b) {
    if (a.lead().comp != b.lead().comp) return a.lead().comp < b.lead().comp;
    return a.lead().mono > b.lead().mono;
  });
}

/// Schreyer order on the free module whose basis is `elems`.
template <class F>
ModuleOrder schreyerOrder(const ModuleOrder& prev, const std::vector<EVec<F>>& elems) {
  ModuleOrder o;
  o.base = prev.base;
  std::size_t n = elems.size();
  std::vector<std::uint32_t> idx(n);
  for (std::uint32_t i = 0; i < n; ++i) idx[i] = i;
  // Ties: the previous rank of the lead component first, then lower index wins.
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    std::uint32_t ra = prev.rank[elems[a].lead().comp], rb = prev.rank[elems[b].lead().comp];
    if (ra != rb) return ra < rb;
    return a > b;
  });
  o.block.resize(n);
  o.shift.resize(n);
  o.rank.resize(n);
  for (std::uint32_t pos = 0; pos < n; ++pos) o.rank[idx[pos]] = pos;
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t c = elems[i].lead().comp;
    o.block[i] = prev.block[c];
    o.shift[i] = prev.shift[c] + elems[i].lead().mono;
  }
  return o;
}

/// Schreyer syzygies of a Gröbner basis `g` (sorted) in a module with order
/// `ord`. Returns elements of the free module on g, keyed by `next`.
template <class F>
std::vector<EVec<F>> schreyerSyzygies(const F& k, const ModuleOrder& ord, const ModuleOrder& next,
                                      const std::vector<EVec<F>>& g, std::size_t ncomp) {
  DivisorTable table;
  table.resize(ncomp);
  for (std::uint32_t i = 0; i < g.size(); ++i) table.insert(g[i].lead().mono, g[i].lead().comp, i);
  Accumulator<F> acc(k);
  std::vector<EVec<F>> out;
  std::vector<QuotientTerm<F>> quot;
  for (std::uint32_t i = 0; i < g.size(); ++i) {
    Budget::check();
    Monomial li(g[i].lead().mono);
    std::uint32_t ci = g[i].lead().comp;
    // Minimal generators of (lcm(li, lj) / li : j > i, same component).
    std::vector<std::pair<Monomial, std::uint32_t>> cand;
    for (std::uint32_t j = i + 1; j < g.size() && g[j].lead().comp == ci; ++j) {
      Monomial lj(g[j].lead().mono);
      cand.push_back({li.quotientOf(li.lcm(lj)), j});
    }
    std::vector<std::pair<Monomial, std::uint32_t>> mins;
    for (std::size_t a = 0; a < cand.size(); ++a) {
      bool redundant = false;
      for (std::size_t b = 0; b < cand.size() && !redundant; ++b) {
        if (a == b || !cand[b].first.divides(cand[a].first)) continue;
        if (cand[b].first != cand[a].first || b < a) redundant = true;
      }
      if (!redundant) mins.push_back(cand[a]);
    }
    for (const auto& [ui, j] : mins) {
      Monomial lj(g[j].lead().mono);
      Monomial uj = lj.quotientOf(li.lcm(lj));
      acc.clear();
      quot.clear();
      std::uint64_t di = monoDelta(ui.bits(), ord.base), dj = monoDelta(uj.bits(), ord.base);
      for (std::size_t t = 1; t < g[i].t.size(); ++t)
        acc.add(keyTimes(g[i].t[t].key, di), g[i].t[t].mono + ui.bits(), g[i].t[t].comp, g[i].t[t].c);
      for (std::size_t t = 1; t < g[j].t.size(); ++t)
        acc.add(keyTimes(g[j].t[t].key, dj), g[j].t[t].mono + uj.bits(), g[j].t[t].comp, k.neg(g[j].t[t].c));
      auto rem = reduceAccumulator(k, ord.base, acc, g, table, &quot);
      if (!rem.empty()) throw GroebnerError("Schreyer frame: input is not a Gröbner basis");
      // syzygy: ui e_i - uj e_j - sum c q e_idx
      std::vector<ETerm<F>> terms;
      terms.push_back({next.key(ui.bits(), i), ui.bits(), i, k.one()});
      terms.push_back({next.key(uj.bits(), j), uj.bits(), j, k.neg(k.one())});
      for (const auto& qt : quot) terms.push_back({next.key(qt.mono, qt.idx), qt.mono, qt.idx, k.neg(qt.c)});
      std::sort(terms.begin(), terms.end(), [](const ETerm<F>& a, const ETerm<F>& b) { return a.key > b.key; });
      EVec<F> s;
      for (auto& t : terms) {
        if (!s.t.empty() && s.t.back().key == t.key) {
          s.t.back().c = k.add(s.t.back().c, t.c);
          if (k.isZero(s.t.back().c)) s.t.pop_back();
        } else {
          s.t.push_back(t);
        }
      }
      s.degree = g[i].degree + ui.degree();
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace detail

/// Minimal free resolution of coker(P), computed from a Schreyer frame and
/// then pruned of unit entries. Stops after maxLength maps; with
/// minimalTail the next frame level is also built so that F_maxLength is
/// minimal, otherwise the last module may carry redundant generators (fine
/// for Ext^i with i < maxLength).
template <class F>
FreeResolution<F> freeResolution(const GradedMap<F>& P, std::size_t maxLength = 4, bool minimalTail = true) {
  const auto& ring = P.ring();
  const F& k = ring->field;
  FreeResolution<F> res;
  res.ring = ring;
  GradedFree F0 = P.target();
  res.top = F0;
  if (maxLength == 0) return res;

  // Level 1: Gröbner basis of the relations.
  ModuleOrder ord = ModuleOrder::top(ring->order, F0);
  auto gb = groebnerBasis(ring, F0, P.columns(), ord);
  std::vector<detail::EVec<F>> level(gb.elements().begin(), gb.elements().end());
  detail::sortLevel(level);

  std::vector<std::vector<detail::EVec<F>>> frame;
  std::vector<GradedFree> mods{F0};
  std::size_t ncomp = F0.rank();
  // Levels 1..maxLength+1; the last one only serves to prune level maxLength.
  res.complete = true;
  while (!level.empty()) {
    GradedFree Fk;
    for (const auto& e : level) Fk.degrees.push_back(e.degree);
    mods.push_back(Fk);
    if (frame.size() == maxLength) {
      if (minimalTail) frame.push_back(std::move(level));
      else mods.pop_back();
      res.complete = false;
      break;
    }
    ModuleOrder next = detail::schreyerOrder(ord, level);
    auto syz = detail::schreyerSyzygies(k, ord, next, level, ncomp);
    detail::sortLevel(syz);
    frame.push_back(std::move(level));
    level = std::move(syz);
    ord = std::move(next);
    ncomp = Fk.rank();
  }

  // Frame maps.
  std::vector<detail::WorkMap<F>> work;
  for (std::size_t lv = 0; lv < frame.size(); ++lv) {
    detail::WorkMap<F> w;
    for (const auto& e : frame[lv]) w.cols.push_back(detail::fromEngine(*ring, e));
    w.rowDeg = mods[lv].degrees;
    w.colDeg = mods[lv + 1].degrees;
    w.rowDead.assign(w.rowDeg.size(), 0);
    w.colDead.assign(w.colDeg.size(), 0);
    work.push_back(std::move(w));
  }
  // Prune unit entries level by level.
  for (std::size_t lv = 0; lv < work.size(); ++lv) {
    std::uint32_t p, q;
    while (detail::findUnit(work[lv], p, q)) {
      detail::eliminateUnit(ring, work[lv], p, q);
      if (lv > 0) work[lv - 1].colDead[p] = 1;
      if (lv + 1 < work.size()) work[lv + 1].rowDead[q] = 1;
    }
  }
  for (auto& w : work) detail::deleteRowsCols(*ring, w);
  if (!work.empty()) res.top = GradedFree(work[0].rowDeg);
  if (work.size() > maxLength) work.resize(maxLength);
  while (!work.empty() && work.back().cols.empty()) {
    work.pop_back();
    res.complete = true;
  }
  for (auto& w : work) res.maps.push_back(detail::fromWork(ring, w));
  return res;
}

template <class F>
FreeResolution<F> freeResolution(const Subquotient<F>& M, std::size_t maxLength = 4, bool minimalTail = true) {
  return freeResolution(minimalize(M), maxLength, minimalTail);
}

/// Index of a degree-d monomial among all monomials of degree d.
inline std::uint32_t monomialIndex(Monomial m) {
  long long s1 = m.exponent(1) + m.exponent(2) + m.exponent(3), s2 = m.exponent(2) + m.exponent(3),
            s3 = m.exponent(3);
  return static_cast<std::uint32_t>(s1 * (s1 + 1) * (s1 + 2) / 6 + s2 * (s2 + 1) / 2 + s3);
}

/// Rank of the degree-e part of the dual map d^*: G^* -> F^* for d: F -> G,
/// by elimination on the monomial slice.
template <class F>
std::size_t dualSliceRankDirect(const GradedMap<F>& d, int e) {
  const auto& ring = d.ring();
  const F& k = ring->field;
  const GradedFree &Fs = d.source(), &Gt = d.target();
  // target basis (F^*)_e = (+)_j S_{e + a_j}
  std::vector<std::uint32_t> offset(Fs.rank() + 1, 0);
  for (std::size_t j = 0; j < Fs.rank(); ++j)
    offset[j + 1] = offset[j] + static_cast<std::uint32_t>(monomialCount(e + Fs.degree(j)));
  if (offset.back() == 0) return 0;
  // rows of d grouped by target component l: entries (j, term)
  std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> rowTerms(Gt.rank());
  for (std::uint32_t j = 0; j < d.numCols(); ++j)
    for (std::size_t t = 0; t < d.column(j).size(); ++t) rowTerms[d.column(j)[t].comp].push_back({j, t});
  std::vector<SparseRow<F>> rows;
  for (std::uint32_t l = 0; l < Gt.rank(); ++l) {
    int sd = e + Gt.degree(l);
    if (sd < 0 || rowTerms[l].empty()) continue;
    for (int a = sd; a >= 0; --a)
      for (int b = sd - a; b >= 0; --b)
        for (int c = sd - a - b; c >= 0; --c) {
          Monomial mu = Monomial::fromExponents(a, b, c, sd - a - b - c);
          SparseRow<F> row;
          for (const auto& [j, t] : rowTerms[l]) {
            const auto& term = d.column(j)[t];
            row.push_back({offset[j] + monomialIndex(mu.mulUnchecked(term.mono)), term.coef});
          }
          std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
          SparseRow<F> merged;
          for (auto& x : row) {
            if (!merged.empty() && merged.back().first == x.first)
              merged.back().second = k.add(merged.back().second, x.second);
            else
              merged.push_back(x);
          }
          merged.erase(std::remove_if(merged.begin(), merged.end(), [&](const auto& x) { return k.isZero(x.second); }),
                       merged.end());
          rows.push_back(std::move(merged));
        }
  }
  return sparseRank(k, std::move(rows), offset.back());
}

/// Same rank, as dim (im d^*)_e from a Gröbner basis truncated at degree e.
template <class F>
std::size_t dualSliceRank(const GradedMap<F>& d, int e) {
  GradedMap<F> ds = d.dual();
  const GradedFree& Fs = ds.target();
  long long dim = 0;
  for (int a : Fs.degrees) dim += monomialCount(e - a);
  if (dim == 0) return 0;
  GroebnerOptions opt;
  opt.degreeBound = e;
  auto gb = groebnerBasis(d.ring(), Fs, ds.columns(), ModuleOrder::top(d.ring()->order, Fs), opt);
  return static_cast<std::size_t>(dim - hilbertSeriesQuotient(gb).valueAt(e));
}

/// dim Ext^i(M, S)_e from a free resolution of M.
template <class F>
long long extDim(const FreeResolution<F>& res, std::size_t i, int e) {
  if (!res.complete && i >= res.length()) throw ExtIndexError("resolution too short for this Ext index");
  GradedFree Fi = res.module(i);
  long long dim = 0;
  for (int a : Fi.degrees) dim += monomialCount(e + a);
  if (dim == 0) return 0;
  if (i + 1 <= res.length()) dim -= static_cast<long long>(dualSliceRank(res.maps[i], e));
  if (i >= 1 && i <= res.length()) dim -= static_cast<long long>(dualSliceRank(res.maps[i - 1], e));
  return dim;
}

/// Ext^i(M, S) as a subquotient of F_i^*.
template <class F>
Subquotient<F> extModule(const FreeResolution<F>& res, std::size_t i) {
  if (i > 4) throw ExtIndexError("Ext index must lie in 0..4");
  const auto& ring = res.ring;
  GradedFree Fi = res.module(i);
  GradedFree Fis;
  for (int a : Fi.degrees) Fis.degrees.push_back(-a);
  GradedMap<F> gens = (i < res.length()) ? syzygies(res.maps[i].dual()) : GradedMap<F>::identity(ring, Fis);
  GradedMap<F> rels = (i >= 1 && i <= res.length()) ? res.maps[i - 1].dual() : GradedMap<F>::zero(ring, GradedFree(), Fis);
  return Subquotient<F>(gens, rels);
}

template <class F>
Subquotient<F> extModule(const Subquotient<F>& M, int i) {
  if (i < 0 || i > 4) throw ExtIndexError("Ext index must lie in 0..4");
  return extModule(freeResolution(M, 4), static_cast<std::size_t>(i));
}

} // namespace monadlab
