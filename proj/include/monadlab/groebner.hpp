#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "budget.hpp"
#include "free.hpp"

namespace monadlab {

using u128 = unsigned __int128;

class GroebnerError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Total order on module monomials m*e_c. Component c carries a block, a
/// shift monomial M_c (which may exceed the usual exponent limits) and a
/// tie-break rank. m*e_c > n*e_d iff (block, m*M_c, rank) is larger.
///
/// Term-over-position uses M_c = x^(d_c + offset), so under grevlex the
/// comparison is by total degree first; Schreyer orders use the lead
/// monomials of the previous level.
struct ModuleOrder {
  static constexpr int kOffset = 1024;

  MonomialOrder base = MonomialOrder::GRevLex;
  std::vector<std::uint32_t> block;
  std::vector<std::uint64_t> shift;
  std::vector<std::uint32_t> rank;

  std::size_t size() const { return rank.size(); }

  u128 key(std::uint64_t mono, std::uint32_t comp) const {
    return (u128(block[comp]) << 96) | (u128(orderKey(mono + shift[comp], base)) << 32) | rank[comp];
  }

  /// Graded (term-over-position) order; lower index wins ties.
  static ModuleOrder top(MonomialOrder base, const GradedFree& F0) {
    ModuleOrder o;
    o.base = base;
    std::size_t n = F0.rank();
    for (std::size_t c = 0; c < n; ++c) {
      int s = F0.degree(c) + kOffset;
      if (s < 0 || s > 20000) throw GroebnerError("generator degree out of range for module order");
      o.block.push_back(0);
      o.shift.push_back(std::uint64_t(s) << 48);
      o.rank.push_back(static_cast<std::uint32_t>(n - 1 - c));
    }
    return o;
  }
  /// Position-over-term: lower component index is larger.
  static ModuleOrder pot(MonomialOrder base, std::size_t n) {
    ModuleOrder o;
    o.base = base;
    for (std::size_t c = 0; c < n; ++c) {
      o.block.push_back(static_cast<std::uint32_t>(n - 1 - c));
      o.shift.push_back(0);
      o.rank.push_back(static_cast<std::uint32_t>(n - 1 - c));
    }
    return o;
  }
  /// Elimination order on F (+) G: everything in F beats everything in G;
  /// both parts graded.
  static ModuleOrder elimination(MonomialOrder base, const GradedFree& upper, const GradedFree& lower) {
    ModuleOrder a = top(base, upper), b = top(base, lower);
    ModuleOrder o;
    o.base = base;
    for (std::size_t c = 0; c < a.size(); ++c) {
      o.block.push_back(1);
      o.shift.push_back(a.shift[c]);
      o.rank.push_back(a.rank[c]);
    }
    for (std::size_t c = 0; c < b.size(); ++c) {
      o.block.push_back(0);
      o.shift.push_back(b.shift[c]);
      o.rank.push_back(b.rank[c]);
    }
    return o;
  }
};

namespace detail {

inline std::uint64_t monoDelta(std::uint64_t q, MonomialOrder base) {
  const std::uint64_t f = Monomial::kField;
  std::uint64_t x = q >> 48, y = (q >> 32) & f, z = (q >> 16) & f, w = q & f;
  std::uint64_t deg = x + y + z + w;
  if (base == MonomialOrder::GRevLex) return (deg << 48) - (w << 32) - (z << 16) - y;
  return (deg << 48) + (x << 32) + (y << 16) + z;
}

/// Key of q*m*e_c given the key of m*e_c.
inline u128 keyTimes(u128 key, std::uint64_t delta) {
  std::uint64_t mid = static_cast<std::uint64_t>(key >> 32);
  mid += delta;
  return ((key >> 96) << 96) | (u128(mid) << 32) | (key & 0xFFFFFFFFull);
}

template <class F>
struct ETerm {
  u128 key;
  std::uint64_t mono;
  std::uint32_t comp;
  typename F::Elem c;
};

/// Engine-side vector: terms strictly descending by key.
template <class F>
struct EVec {
  std::vector<ETerm<F>> t;
  int degree = 0;

  bool empty() const { return t.empty(); }
  const ETerm<F>& lead() const { return t.front(); }
};

template <class F>
EVec<F> toEngine(const ModuleOrder& ord, const GradedFree& F0, const Vec<F>& v) {
  EVec<F> e;
  e.t.reserve(v.size());
  for (const auto& x : v) e.t.push_back({ord.key(x.mono.bits(), x.comp), x.mono.bits(), x.comp, x.coef});
  std::sort(e.t.begin(), e.t.end(), [](const ETerm<F>& a, const ETerm<F>& b) { return a.key > b.key; });
  if (!v.empty()) e.degree = v.front().mono.degree() + F0.degree(v.front().comp);
  return e;
}

template <class F>
Vec<F> fromEngine(const Ring<F>& R, const EVec<F>& e) {
  Vec<F> v;
  v.reserve(e.t.size());
  for (const auto& x : e.t) v.push_back({Monomial(x.mono), x.comp, x.c});
  canonicalizeVec(R, v);
  return v;
}

/// Sparse accumulator with a max-heap on keys. Keys that have been popped
/// are never re-added during one reduction (all later terms are smaller).
template <class F>
class Accumulator {
public:
  using Elem = typename F::Elem;
  struct Slot {
    u128 key;
    std::uint64_t mono;
    std::uint32_t comp;
    Elem c;
  };

  explicit Accumulator(const F& k) : k_(k) { table_.assign(1024, -1); }

  void clear() {
    for (std::size_t pos : used_) table_[pos] = -1;
    used_.clear();
    slots_.clear();
    heap_.clear();
  }

  void add(u128 key, std::uint64_t mono, std::uint32_t comp, const Elem& c) {
    if ((slots_.size() + 1) * 2 > table_.size()) grow();
    std::size_t h = find(key);
    if (table_[h] >= 0) {
      Slot& s = slots_[static_cast<std::size_t>(table_[h])];
      s.c = k_.add(s.c, c);
      return;
    }
    table_[h] = static_cast<std::int32_t>(slots_.size());
    used_.push_back(h);
    slots_.push_back({key, mono, comp, c});
    heap_.push_back(key);
    std::push_heap(heap_.begin(), heap_.end());
  }

  /// Removes and returns the largest term with nonzero coefficient.
  bool pop(Slot& out) {
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end());
      u128 key = heap_.back();
      heap_.pop_back();
      Slot& s = slots_[static_cast<std::size_t>(table_[find(key)])];
      if (!k_.isZero(s.c)) {
        out = s;
        return true;
      }
    }
    return false;
  }

private:
  static std::size_t hashKey(u128 k) {
    std::uint64_t a = static_cast<std::uint64_t>(k) ^ static_cast<std::uint64_t>(k >> 64) * 0x9E3779B97F4A7C15ull;
    a ^= a >> 29;
    a *= 0xBF58476D1CE4E5B9ull;
    a ^= a >> 32;
    return static_cast<std::size_t>(a);
  }
  std::size_t find(u128 key) const {
    std::size_t mask = table_.size() - 1;
    std::size_t h = hashKey(key) & mask;
    while (table_[h] >= 0 && slots_[static_cast<std::size_t>(table_[h])].key != key) h = (h + 1) & mask;
    return h;
  }
  void grow() {
    table_.assign(table_.size() * 2, -1);
    used_.clear();
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      std::size_t h = find(slots_[i].key);
      table_[h] = static_cast<std::int32_t>(i);
      used_.push_back(h);
    }
  }

  const F& k_;
  std::vector<Slot> slots_;
  std::vector<std::int32_t> table_;
  std::vector<std::size_t> used_;
  std::vector<u128> heap_;
};

struct DivEntry {
  std::uint64_t mono;
  std::uint64_t mask;
  std::uint32_t idx;
};

/// Lead-monomial lookup per component.
class DivisorTable {
public:
  void resize(std::size_t ncomp) { byComp_.resize(ncomp); }
  void insert(std::uint64_t mono, std::uint32_t comp, std::uint32_t idx) {
    byComp_[comp].push_back({mono, Monomial(mono).divMask(), idx});
  }
  /// Index of the first element whose lead divides mono*e_comp, or -1.
  long find(std::uint64_t mono, std::uint32_t comp, long skip = -1) const {
    std::uint64_t nm = ~Monomial(mono).divMask();
    for (const auto& d : byComp_[comp])
      if ((d.mask & nm) == 0 && Monomial(d.mono).divides(Monomial(mono)) && long(d.idx) != skip)
        return static_cast<long>(d.idx);
    return -1;
  }
  const std::vector<DivEntry>& component(std::size_t c) const { return byComp_[c]; }

private:
  std::vector<std::vector<DivEntry>> byComp_;
};

/// One division step record: quotient term q*basis[idx] with coefficient c.
template <class F>
struct QuotientTerm {
  std::uint32_t idx;
  std::uint64_t mono;
  typename F::Elem c;
};

/// Full reduction of the accumulator contents by a monic basis. Returns the
/// remainder (descending keys). Quotient terms are appended to quot if given.
template <class F>
std::vector<ETerm<F>> reduceAccumulator(const F& k, MonomialOrder base, Accumulator<F>& acc,
                                        const std::vector<EVec<F>>& basis, const DivisorTable& table,
                                        std::vector<QuotientTerm<F>>* quot = nullptr, long skip = -1,
                                        bool topOnly = false) {
  std::vector<ETerm<F>> rem;
  typename Accumulator<F>::Slot s;
  while (acc.pop(s)) {
    long gi = (topOnly && !rem.empty()) ? -1 : table.find(s.mono, s.comp, skip);
    if (gi < 0) {
      rem.push_back({s.key, s.mono, s.comp, s.c});
      continue;
    }
    const EVec<F>& g = basis[static_cast<std::size_t>(gi)];
    std::uint64_t q = s.mono - g.lead().mono;
    std::uint64_t delta = monoDelta(q, base);
    typename F::Elem mc = k.neg(s.c);
    Budget::tick(static_cast<long long>(g.t.size()));
    for (std::size_t i = 1; i < g.t.size(); ++i) {
      const auto& gt = g.t[i];
      acc.add(keyTimes(gt.key, delta), gt.mono + q, gt.comp, k.mul(mc, gt.c));
    }
    if (quot) quot->push_back({static_cast<std::uint32_t>(gi), q, s.c});
  }
  return rem;
}

template <class F>
void makeMonic(const F& k, std::vector<ETerm<F>>& v) {
  if (v.empty() || k.isOne(v.front().c)) return;
  auto inv = k.inv(v.front().c);
  for (auto& t : v) t.c = k.mul(t.c, inv);
}

} // namespace detail

struct GroebnerOptions {
  /// Stop once every S-pair and input of degree <= bound is processed.
  int degreeBound = INT_MAX;
  /// For ideals: stop as soon as the leading terms contain a pure power of
  /// every variable (the ideal is then primary to the irrelevant ideal).
  bool stopWhenZeroDimensional = false;
  /// Interreduce at the end.
  bool reduce = true;
};

/// Gröbner basis of a graded submodule of a free module.
template <class F>
class GroebnerBasis {
public:
  using EVec = detail::EVec<F>;

  GroebnerBasis() = default;
  GroebnerBasis(RingPtr<F> ring, GradedFree ambient, ModuleOrder order)
      : ring_(std::move(ring)), ambient_(std::move(ambient)), order_(std::move(order)) {
    table_.resize(ambient_.rank());
  }

  const RingPtr<F>& ring() const { return ring_; }
  const GradedFree& ambient() const { return ambient_; }
  const ModuleOrder& order() const { return order_; }
  std::size_t size() const { return elems_.size(); }
  bool isReduced() const { return reduced_; }
  bool complete() const { return complete_; }
  const std::vector<EVec>& elements() const { return elems_; }
  const detail::DivisorTable& divisorTable() const { return table_; }
  /// Indices (into the input list) of inputs that did not reduce to zero
  /// modulo earlier data, i.e. a minimal generating subset.
  const std::vector<std::size_t>& minimalInputs() const { return minimal_; }

  std::vector<Vec<F>> generators() const {
    std::vector<Vec<F>> out;
    for (const auto& e : elems_) out.push_back(detail::fromEngine(*ring_, e));
    return out;
  }
  Vec<F> generator(std::size_t i) const { return detail::fromEngine(*ring_, elems_[i]); }
  Monomial leadMonomial(std::size_t i) const { return Monomial(elems_[i].lead().mono); }
  std::uint32_t leadComponent(std::size_t i) const { return elems_[i].lead().comp; }
  int degree(std::size_t i) const { return elems_[i].degree; }

  Vec<F> normalForm(const Vec<F>& f) const {
    for (const auto& t : f)
      if (t.comp >= ambient_.rank()) throw GroebnerError("element does not lie in the ambient module");
    detail::Accumulator<F> acc(ring_->field);
    for (const auto& t : f) acc.add(order_.key(t.mono.bits(), t.comp), t.mono.bits(), t.comp, t.coef);
    EVec r;
    r.t = detail::reduceAccumulator(ring_->field, order_.base, acc, elems_, table_);
    return detail::fromEngine(*ring_, r);
  }
  bool contains(const Vec<F>& f) const { return normalForm(f).empty(); }

  /// Adds an element (already reduced and monic) with its pair bookkeeping
  /// handled by the caller.
  void pushElement(EVec e) {
    table_.insert(e.lead().mono, e.lead().comp, static_cast<std::uint32_t>(elems_.size()));
    elems_.push_back(std::move(e));
  }

private:
  template <class G>
  friend class BuchbergerEngine;

  RingPtr<F> ring_;
  GradedFree ambient_;
  ModuleOrder order_;
  std::vector<EVec> elems_;
  detail::DivisorTable table_;
  std::vector<std::size_t> minimal_;
  bool reduced_ = false;
  bool complete_ = true;
};

/// Degree-by-degree Buchberger algorithm with the normal selection strategy
/// and the Gebauer-Möller criteria.
template <class F>
class BuchbergerEngine {
public:
  using Elem = typename F::Elem;
  using EVec = detail::EVec<F>;

  BuchbergerEngine(RingPtr<F> ring, GradedFree ambient, ModuleOrder order, GroebnerOptions opt = {})
      : gb_(ring, ambient, std::move(order)), opt_(opt), acc_(gb_.ring_->field) {
    productCriterion_ = gb_.ambient_.rank() == 1;
    byComp_.resize(gb_.ambient_.rank());
  }

  GroebnerBasis<F> run(const std::vector<Vec<F>>& gens) {
    const Ring<F>& R = *gb_.ring_;
    struct Input {
      EVec v;
      std::size_t idx;
    };
    std::vector<Input> inputs;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (gens[i].empty()) continue;
      for (const auto& t : gens[i])
        if (t.comp >= gb_.ambient_.rank()) throw GroebnerError("generator does not lie in the ambient module");
      auto d = vecDegree(gb_.ambient_, gens[i]);
      if (!d) throw GroebnerError("generator " + std::to_string(i + 1) + " is not homogeneous");
      inputs.push_back({detail::toEngine(gb_.order_, gb_.ambient_, gens[i]), i});
    }
    std::stable_sort(inputs.begin(), inputs.end(),
                     [](const Input& a, const Input& b) { return a.v.degree < b.v.degree; });
    std::size_t nextInput = 0;

    while (nextInput < inputs.size() || !pairs_.empty()) {
      int d = INT_MAX;
      if (nextInput < inputs.size()) d = inputs[nextInput].v.degree;
      for (const auto& p : pairs_) d = std::min(d, p.degree);
      if (d > opt_.degreeBound) {
        gb_.complete_ = false;
        break;
      }
      Budget::check();

      std::vector<Pair> now;
      std::vector<Pair> later;
      for (auto& p : pairs_) (p.degree == d ? now : later).push_back(p);
      pairs_ = std::move(later);
      std::sort(now.begin(), now.end(), [](const Pair& a, const Pair& b) {
        if (a.lcmKey != b.lcmKey) return a.lcmKey < b.lcmKey;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
      });
      for (const auto& p : now) {
        acc_.clear();
        addMultiple(p.i, p.lcm, R.field.one(), true);
        addMultiple(p.j, p.lcm, R.field.neg(R.field.one()), true);
        auto rem = detail::reduceAccumulator(R.field, gb_.order_.base, acc_, gb_.elems_, gb_.table_);
        if (!rem.empty()) insert(std::move(rem), d);
      }
      while (nextInput < inputs.size() && inputs[nextInput].v.degree == d) {
        Input& in = inputs[nextInput++];
        acc_.clear();
        for (const auto& t : in.v.t) acc_.add(t.key, t.mono, t.comp, t.c);
        auto rem = detail::reduceAccumulator(R.field, gb_.order_.base, acc_, gb_.elems_, gb_.table_);
        if (!rem.empty()) {
          gb_.minimal_.push_back(in.idx);
          insert(std::move(rem), d);
        }
      }
      if (opt_.stopWhenZeroDimensional && zeroDimensional()) {
        gb_.complete_ = pairs_.empty() && nextInput == inputs.size();
        break;
      }
    }
    if (opt_.reduce) interreduce();
    return std::move(gb_);
  }

private:
  struct Pair {
    std::uint32_t i, j;
    std::uint64_t lcm;
    u128 lcmKey;
    int degree;
  };

  void addMultiple(std::uint32_t gi, std::uint64_t lcm, const Elem& c, bool skipLead) {
    const EVec& g = gb_.elems_[gi];
    std::uint64_t q = lcm - g.lead().mono;
    std::uint64_t delta = detail::monoDelta(q, gb_.order_.base);
    const F& k = gb_.ring_->field;
    for (std::size_t i = skipLead ? 1 : 0; i < g.t.size(); ++i)
      acc_.add(detail::keyTimes(g.t[i].key, delta), g.t[i].mono + q, g.t[i].comp, k.mul(c, g.t[i].c));
  }

  bool zeroDimensional() const {
    if (gb_.ambient_.rank() != 1) return false;
    bool seen[4] = {false, false, false, false};
    for (const auto& e : gb_.elems_) {
      Monomial m(e.lead().mono);
      int nz = 0, which = -1;
      for (int v = 0; v < 4; ++v)
        if (m.exponent(v) > 0) ++nz, which = v;
      if (nz == 0) return true;
      if (nz == 1) seen[which] = true;
    }
    return seen[0] && seen[1] && seen[2] && seen[3];
  }

  void insert(std::vector<detail::ETerm<F>> rem, int degree) {
    const F& k = gb_.ring_->field;
    detail::makeMonic(k, rem);
    EVec h;
    h.t = std::move(rem);
    h.degree = degree;
    std::uint32_t hi = static_cast<std::uint32_t>(gb_.elems_.size());
    std::uint32_t comp = h.lead().comp;
    Monomial lh(h.lead().mono);

    // Gebauer-Möller: old pairs made redundant by h.
    std::vector<Pair> kept;
    kept.reserve(pairs_.size());
    for (const auto& p : pairs_) {
      if (gb_.elems_[p.i].lead().comp == comp && lh.divides(Monomial(p.lcm))) {
        Monomial li(gb_.elems_[p.i].lead().mono), lj(gb_.elems_[p.j].lead().mono);
        if (li.lcm(lh).bits() != p.lcm && lj.lcm(lh).bits() != p.lcm) continue;
      }
      kept.push_back(p);
    }
    pairs_ = std::move(kept);

    // New pairs (i, h).
    struct Cand {
      std::uint32_t i;
      std::uint64_t lcm;
      bool coprime;
      bool alive;
    };
    std::vector<Cand> cand;
    for (std::uint32_t i : byComp_[comp]) {
      Monomial li(gb_.elems_[i].lead().mono);
      cand.push_back({i, li.lcm(lh).bits(), li.coprime(lh), true});
    }
    // Chain criterion among the new pairs.
    for (auto& c : cand) {
      Monomial lc(c.lcm);
      for (const auto& o : cand)
        if (&o != &c && o.lcm != c.lcm && Monomial(o.lcm).divides(lc)) {
          c.alive = false;
          break;
        }
    }
    // Equal lcms: keep one, or none if any of them is coprime.
    std::sort(cand.begin(), cand.end(), [](const Cand& a, const Cand& b) {
      if (a.lcm != b.lcm) return a.lcm < b.lcm;
      return a.i < b.i;
    });
    for (std::size_t s = 0; s < cand.size();) {
      std::size_t e = s;
      bool anyCoprime = false;
      while (e < cand.size() && cand[e].lcm == cand[s].lcm) anyCoprime |= cand[e++].coprime;
      bool keepOne = !(productCriterion_ && anyCoprime);
      bool kept1 = false;
      for (std::size_t t = s; t < e; ++t) {
        if (!cand[t].alive) continue;
        if (keepOne && !kept1) {
          kept1 = true;
        } else {
          cand[t].alive = false;
        }
      }
      s = e;
    }
    int cdeg = gb_.ambient_.degree(comp);
    for (const auto& c : cand)
      if (c.alive) pairs_.push_back({c.i, hi, c.lcm, gb_.order_.key(c.lcm, comp), Monomial(c.lcm).degree() + cdeg});

    byComp_[comp].push_back(hi);
    gb_.pushElement(std::move(h));
  }

  void interreduce() {
    const F& k = gb_.ring_->field;
    for (std::size_t i = 0; i < gb_.elems_.size(); ++i) {
      EVec& g = gb_.elems_[i];
      bool needs = false;
      for (std::size_t t = 1; t < g.t.size() && !needs; ++t)
        needs = gb_.table_.find(g.t[t].mono, g.t[t].comp) >= 0;
      if (!needs) continue;
      acc_.clear();
      for (std::size_t t = 1; t < g.t.size(); ++t) acc_.add(g.t[t].key, g.t[t].mono, g.t[t].comp, g.t[t].c);
      auto tail = detail::reduceAccumulator(k, gb_.order_.base, acc_, gb_.elems_, gb_.table_);
      g.t.resize(1);
      g.t.insert(g.t.end(), tail.begin(), tail.end());
    }
    // The lead of every element is divisible by no other lead, so the basis
    // is reduced.
    gb_.reduced_ = true;
  }

  GroebnerBasis<F> gb_;
  GroebnerOptions opt_;
  detail::Accumulator<F> acc_;
  bool productCriterion_ = false;
  std::vector<Pair> pairs_;
  std::vector<std::vector<std::uint32_t>> byComp_;
};

template <class F>
GroebnerBasis<F> groebnerBasis(const RingPtr<F>& ring, const GradedFree& ambient, const std::vector<Vec<F>>& gens,
                               const ModuleOrder& order, GroebnerOptions opt = {}) {
  return BuchbergerEngine<F>(ring, ambient, order, opt).run(gens);
}

template <class F>
GroebnerBasis<F> groebnerBasis(const RingPtr<F>& ring, const GradedFree& ambient, const std::vector<Vec<F>>& gens) {
  return groebnerBasis(ring, ambient, gens, ModuleOrder::top(ring->order, ambient));
}

/// Gröbner basis of the column span of a map.
template <class F>
GroebnerBasis<F> groebnerBasis(const GradedMap<F>& m) {
  return groebnerBasis(m.ring(), m.target(), m.columns());
}

/// Ideal helpers: polynomials as elements of S^1.
template <class F>
std::vector<Vec<F>> idealVecs(const std::vector<Poly<F>>& gens) {
  std::vector<Vec<F>> v;
  for (const auto& g : gens) v.push_back(vecFromPolys(std::vector<Poly<F>>{g}));
  return v;
}

template <class F>
GroebnerBasis<F> idealGroebnerBasis(const RingPtr<F>& ring, const std::vector<Poly<F>>& gens,
                                    GroebnerOptions opt = {}) {
  GradedFree S({0});
  return groebnerBasis(ring, S, idealVecs(gens), ModuleOrder::top(ring->order, S), opt);
}

template <class F>
Poly<F> normalForm(const Poly<F>& f, const GroebnerBasis<F>& gb) {
  Vec<F> r = gb.normalForm(vecFromPolys(std::vector<Poly<F>>{f}));
  return vecEntry(f.ring(), r, 0);
}

template <class F>
Vec<F> normalForm(const Vec<F>& f, const GroebnerBasis<F>& gb) {
  return gb.normalForm(f);
}

/// S-vector of basis elements i and j (same lead component).
template <class F>
Vec<F> sVector(const GroebnerBasis<F>& gb, std::size_t i, std::size_t j) {
  const Ring<F>& R = *gb.ring();
  Monomial li = gb.leadMonomial(i), lj = gb.leadMonomial(j);
  Monomial L = li.lcm(lj);
  auto gi = gb.generator(i), gj = gb.generator(j);
  auto ci = R.field.inv(vecEntry(gb.ring(), gi, gb.leadComponent(i)).coefficient(li));
  auto cj = R.field.inv(vecEntry(gb.ring(), gj, gb.leadComponent(j)).coefficient(lj));
  return vecAdd(R, vecMulTerm(R, li.quotientOf(L), ci, gi), vecMulTerm(R, lj.quotientOf(L), cj, gj), true);
}

/// Buchberger criterion: every S-vector of the basis reduces to zero.
template <class F>
bool isGroebnerBasis(const GroebnerBasis<F>& gb) {
  for (std::size_t i = 0; i < gb.size(); ++i)
    for (std::size_t j = i + 1; j < gb.size(); ++j)
      if (gb.leadComponent(i) == gb.leadComponent(j) && !gb.normalForm(sVector(gb, i, j)).empty()) return false;
  return true;
}

/// Minimal generating subset of the given homogeneous elements.
template <class F>
std::vector<Vec<F>> minimalGenerators(const RingPtr<F>& ring, const GradedFree& ambient,
                                      const std::vector<Vec<F>>& gens) {
  auto gb = groebnerBasis(ring, ambient, gens, ModuleOrder::top(ring->order, ambient), GroebnerOptions{INT_MAX, false, false});
  std::vector<std::size_t> idx = gb.minimalInputs();
  std::sort(idx.begin(), idx.end());
  std::vector<Vec<F>> out;
  for (std::size_t i : idx) out.push_back(gens[i]);
  return out;
}

/// Krull dimension of S/I from the initial ideal: the largest set of
/// variables containing the support of no leading monomial. -1 for the unit
/// ideal.
inline int krullDimFromLeads(const std::vector<Monomial>& leads) {
  int best = -1;
  for (int mask = 0; mask < 16; ++mask) {
    bool independent = true;
    for (Monomial m : leads) {
      bool inside = true;
      for (int v = 0; v < 4; ++v)
        if (m.exponent(v) > 0 && !(mask & (1 << v))) inside = false;
      if (inside) {
        independent = false;
        break;
      }
    }
    if (independent) best = std::max(best, __builtin_popcount(static_cast<unsigned>(mask)));
  }
  return best;
}

template <class F>
int krullDim(const GroebnerBasis<F>& gb) {
  std::vector<Monomial> leads;
  for (std::size_t i = 0; i < gb.size(); ++i) leads.push_back(gb.leadMonomial(i));
  return krullDimFromLeads(leads);
}

template <class F>
int krullDim(const RingPtr<F>& ring, const std::vector<Poly<F>>& gens) {
  return krullDim(idealGroebnerBasis(ring, gens));
}

/// True iff dim S/I <= 0, stopping early once pure powers of all variables
/// appear among the leading terms.
template <class F>
bool isZeroDimensional(const RingPtr<F>& ring, const std::vector<Poly<F>>& gens) {
  GroebnerOptions opt;
  opt.stopWhenZeroDimensional = true;
  opt.reduce = false;
  return krullDim(idealGroebnerBasis(ring, gens, opt)) <= 0;
}

} // namespace monadlab
