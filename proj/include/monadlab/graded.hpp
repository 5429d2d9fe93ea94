#pragma once

#include <algorithm>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "groebner.hpp"
#include "hilbert.hpp"
#include "linalg.hpp"

namespace monadlab {

class HomologyError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

/// Sort key for reproducible generator lists: degree, then entries.
template <class F>
bool vecLess(const Ring<F>& R, const GradedFree& F0, const Vec<F>& a, const Vec<F>& b) {
  int da = vecDegree(F0, a).value_or(INT_MIN), db = vecDegree(F0, b).value_or(INT_MIN);
  if (da != db) return da < db;
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].comp != b[i].comp) return a[i].comp < b[i].comp;
    if (a[i].mono != b[i].mono) return R.key(a[i].mono) > R.key(b[i].mono);
  }
  return a.size() < b.size();
}

template <class F>
GradedMap<F> mapFromVecs(const RingPtr<F>& ring, const GradedFree& target, std::vector<Vec<F>> vecs, bool sortCols) {
  vecs.erase(std::remove_if(vecs.begin(), vecs.end(), [](const Vec<F>& v) { return v.empty(); }), vecs.end());
  if (sortCols)
    std::stable_sort(vecs.begin(), vecs.end(),
                     [&](const Vec<F>& a, const Vec<F>& b) { return vecLess(*ring, target, a, b); });
  GradedFree src;
  for (const auto& v : vecs) src.degrees.push_back(*vecDegree(target, v));
  return GradedMap<F>(ring, src, target, std::move(vecs));
}

}  // namespace detail

/// Kernel of the map F0 -> F1 / U where F0 has basis e_j with images img[j]
/// and U is spanned by extra. Computed by elimination in F1 (+) F0.
template <class F>
std::vector<Vec<F>> kernelModulo(const RingPtr<F>& ring, const GradedFree& F1, const GradedFree& F0,
                                 const std::vector<Vec<F>>& img, const std::vector<Vec<F>>& extra) {
  std::uint32_t r = static_cast<std::uint32_t>(F1.rank());
  GradedFree amb = F1 + F0;
  std::vector<Vec<F>> gens;
  for (std::uint32_t j = 0; j < img.size(); ++j) {
    Vec<F> v = img[j];
    v.push_back({Monomial(), r + j, ring->field.one()});
    gens.push_back(std::move(v));
  }
  for (const auto& e : extra) gens.push_back(e);
  auto gb = groebnerBasis(ring, amb, gens, ModuleOrder::elimination(ring->order, F1, F0));
  std::vector<Vec<F>> out;
  for (std::size_t i = 0; i < gb.size(); ++i) {
    if (gb.leadComponent(i) < r) continue;
    Vec<F> v = gb.generator(i);
    for (auto& t : v) t.comp -= r;
    out.push_back(std::move(v));
  }
  return out;
}

/// A map whose image is the kernel of m, on minimal generators.
template <class F>
GradedMap<F> syzygies(const GradedMap<F>& m) {
  const auto& ring = m.ring();
  if (m.numCols() == 0) return GradedMap<F>::zero(ring, GradedFree(), m.source());
  auto ker = kernelModulo(ring, m.target(), m.source(), m.columns(), {});
  auto mins = minimalGenerators(ring, m.source(), ker);
  return detail::mapFromVecs(ring, m.source(), std::move(mins), true);
}

/// Map whose columns are a minimal generating set of the column span.
template <class F>
GradedMap<F> minimalColumns(const GradedMap<F>& m) {
  auto mins = minimalGenerators(m.ring(), m.target(), m.columns());
  return detail::mapFromVecs(m.ring(), m.target(), std::move(mins), false);
}

/// Module quotient U : J = {v : f v in U for all f in J} for a submodule U
/// of F0 (given by generators) and an ideal J.
template <class F>
std::vector<Vec<F>> moduleQuotient(const RingPtr<F>& ring, const GradedFree& F0, const std::vector<Vec<F>>& U,
                                   const std::vector<Poly<F>>& J) {
  std::vector<Poly<F>> fs;
  for (const auto& f : J) {
    if (!f.ring()->sameAs(*ring)) throw RingMismatch("saturation ideal lives in a different ring");
    if (f.isZero()) continue;
    if (!f.homogeneousDegree().isHomogeneous()) throw MapError("saturation needs a homogeneous ideal");
    fs.push_back(f);
  }
  if (fs.empty()) {
    std::vector<Vec<F>> all;
    for (std::uint32_t i = 0; i < F0.rank(); ++i) all.push_back({{Monomial(), i, ring->field.one()}});
    return all;
  }
  // v -> (f_1 v, ..., f_r v) into F0^r, block j twisted by deg f_j.
  std::uint32_t n = static_cast<std::uint32_t>(F0.rank());
  GradedFree target;
  for (const auto& f : fs)
    for (int d : F0.degrees) target.degrees.push_back(d - f.homogeneousDegree().degree);
  std::vector<Vec<F>> img(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < fs.size(); ++j)
      for (const auto& t : fs[j].terms()) img[i].push_back({t.mono, j * n + i, t.coef});
    canonicalizeVec(*ring, img[i]);
  }
  std::vector<Vec<F>> extra;
  for (std::uint32_t j = 0; j < fs.size(); ++j)
    for (const auto& u : U) {
      Vec<F> v = u;
      for (auto& t : v) t.comp += j * n;
      extra.push_back(std::move(v));
    }
  return kernelModulo(ring, target, F0, img, extra);
}

/// Saturation U : J^infinity by iterated quotients, returned on minimal
/// generators.
template <class F>
GradedMap<F> saturate(const GradedMap<F>& U, const std::vector<Poly<F>>& J) {
  const auto& ring = U.ring();
  const GradedFree& F0 = U.target();
  std::vector<Vec<F>> cur = U.columns();
  for (;;) {
    Budget::check();
    auto next = moduleQuotient(ring, F0, cur, J);
    auto gb = groebnerBasis(ring, F0, cur);
    bool grew = false;
    for (const auto& v : next)
      if (!gb.contains(v)) {
        grew = true;
        break;
      }
    if (!grew) break;
    cur = std::move(next);
  }
  return detail::mapFromVecs(ring, F0, minimalGenerators(ring, F0, cur), true);
}

/// Ideal version of saturate.
template <class F>
std::vector<Poly<F>> saturate(const RingPtr<F>& ring, const std::vector<Poly<F>>& I, const std::vector<Poly<F>>& J) {
  GradedFree S({0});
  auto vecs = idealVecs(I);
  vecs.erase(std::remove_if(vecs.begin(), vecs.end(), [](const Vec<F>& v) { return v.empty(); }), vecs.end());
  auto sat = saturate(detail::mapFromVecs(ring, S, std::move(vecs), true), J);
  std::vector<Poly<F>> out;
  for (const auto& c : sat.columns()) out.push_back(vecEntry(ring, c, 0));
  return out;
}

namespace detail {

/// Mutable matrix used while pruning unit entries.
template <class F>
struct WorkMap {
  std::vector<Vec<F>> cols;
  std::vector<int> rowDeg, colDeg;
  std::vector<char> rowDead, colDead;
};

template <class F>
void deleteRowsCols(const Ring<F>& R, WorkMap<F>& w) {
  std::vector<std::uint32_t> newRow(w.rowDeg.size(), 0);
  std::uint32_t n = 0;
  for (std::size_t i = 0; i < w.rowDeg.size(); ++i) newRow[i] = w.rowDead[i] ? UINT32_MAX : n++;
  std::vector<Vec<F>> cols;
  std::vector<int> colDeg, rowDeg;
  for (std::size_t i = 0; i < w.rowDeg.size(); ++i)
    if (!w.rowDead[i]) rowDeg.push_back(w.rowDeg[i]);
  for (std::size_t j = 0; j < w.cols.size(); ++j) {
    if (w.colDead[j]) continue;
    Vec<F> v;
    for (const auto& t : w.cols[j])
      if (newRow[t.comp] != UINT32_MAX) v.push_back({t.mono, newRow[t.comp], t.coef});
    canonicalizeVec(R, v);
    cols.push_back(std::move(v));
    colDeg.push_back(w.colDeg[j]);
  }
  w.cols = std::move(cols);
  w.colDeg = std::move(colDeg);
  w.rowDeg = std::move(rowDeg);
  w.rowDead.assign(w.rowDeg.size(), 0);
  w.colDead.assign(w.colDeg.size(), 0);
}

template <class F>
WorkMap<F> toWork(const GradedMap<F>& m) {
  WorkMap<F> w;
  w.cols = m.columns();
  w.rowDeg = m.target().degrees;
  w.colDeg = m.source().degrees;
  w.rowDead.assign(w.rowDeg.size(), 0);
  w.colDead.assign(w.colDeg.size(), 0);
  return w;
}

template <class F>
GradedMap<F> fromWork(const RingPtr<F>& ring, const WorkMap<F>& w) {
  return GradedMap<F>(ring, GradedFree(w.colDeg), GradedFree(w.rowDeg), w.cols);
}

/// Finds a unit entry (p, q) in live rows/columns of B.
template <class F>
bool findUnit(const WorkMap<F>& B, std::uint32_t& p, std::uint32_t& q) {
  for (std::uint32_t j = 0; j < B.cols.size(); ++j) {
    if (B.colDead[j]) continue;
    for (const auto& t : B.cols[j])
      if (t.mono.isOne() && !B.rowDead[t.comp]) {
        p = t.comp;
        q = j;
        return true;
      }
  }
  return false;
}

/// Cancels the unit entry B[p][q]: B <- B - B[:,q] B[p,:] / u, then marks
/// row p and column q dead. Neighbouring maps are adjusted by the caller.
template <class F>
void eliminateUnit(const RingPtr<F>& ring, WorkMap<F>& B, std::uint32_t p, std::uint32_t q) {
  const Ring<F>& R = *ring;
  typename F::Elem u = R.field.zero();
  for (const auto& t : B.cols[q])
    if (t.comp == p) u = t.coef;
  auto uinv = R.field.inv(u);
  const Vec<F> colq = B.cols[q];
  for (std::uint32_t j = 0; j < B.cols.size(); ++j) {
    if (j == q || B.colDead[j]) continue;
    Poly<F> bpj = vecEntry(ring, B.cols[j], p);
    if (bpj.isZero()) continue;
    B.cols[j] = vecAdd(R, B.cols[j], vecMulPoly(R, bpj.scale(uinv), colq), true);
  }
  B.rowDead[p] = 1;
  B.colDead[q] = 1;
}

}  // namespace detail

/// Cokernel presentation with all unit entries cancelled and redundant
/// relations removed: a minimal presentation of the same module.
template <class F>
GradedMap<F> minimalPresentation(const GradedMap<F>& P) {
  const auto& ring = P.ring();
  auto w = detail::toWork(P);
  std::uint32_t p, q;
  bool changed = false;
  while (detail::findUnit(w, p, q)) {
    detail::eliminateUnit(ring, w, p, q);
    changed = true;
  }
  if (changed) detail::deleteRowsCols(*ring, w);
  return minimalColumns(detail::fromWork(ring, w));
}

/// A finitely presented module (image(gens) + image(rels)) / image(rels)
/// inside a graded free ambient module.
template <class F>
class Subquotient {
public:
  Subquotient() = default;
  Subquotient(GradedMap<F> gens, GradedMap<F> rels) : gens_(std::move(gens)), rels_(std::move(rels)) {
    if (gens_.target() != rels_.target()) throw HomologyError("generators and relations live in different modules");
    cache_ = std::make_shared<Cache>();
  }
  /// Cokernel of a map of free modules.
  static Subquotient cokernel(const GradedMap<F>& P) {
    return Subquotient(GradedMap<F>::identity(P.ring(), P.target()), P);
  }
  static Subquotient free(const RingPtr<F>& ring, const GradedFree& F0) {
    return cokernel(GradedMap<F>::zero(ring, GradedFree(), F0));
  }

  const RingPtr<F>& ring() const { return gens_.ring(); }
  const GradedFree& ambient() const { return gens_.target(); }
  const GradedMap<F>& gens() const { return gens_; }
  const GradedMap<F>& rels() const { return rels_; }

  /// Hilbert series from Gröbner bases of rels and gens + rels.
  const HilbertSeries& hilbertSeries() const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (!cache_->series) {
      auto gbR = groebnerBasis(rels_);
      auto all = concatColumns(gens_, rels_);
      auto gbA = groebnerBasis(all);
      HilbertSeries h = hilbertSeriesQuotient(gbR);
      h.addShifted(hilbertSeriesQuotient(gbA), 0, -1);
      cache_->series = h;
    }
    return *cache_->series;
  }
  long long hilbertFunction(int d) const { return hilbertSeries().valueAt(d); }

  /// Presentation F1 -> F0 with F0 the source of gens (not minimized).
  GradedMap<F> presentation() const {
    if (gens_ == GradedMap<F>::identity(ring(), ambient())) return minimalColumns(rels_);
    auto ker = kernelModulo(ring(), ambient(), gens_.source(), gens_.columns(), rels_.columns());
    auto mins = minimalGenerators(ring(), gens_.source(), ker);
    return detail::mapFromVecs(ring(), gens_.source(), std::move(mins), true);
  }

  /// Minimal presentation (cached).
  const GradedMap<F>& minimalPresentationMap() const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (!cache_->minimal) cache_->minimal = monadlab::minimalPresentation(presentation());
    return *cache_->minimal;
  }

  /// Internal cache shared by copies of this value.
  struct Cache {
    std::mutex mu;
    std::optional<HilbertSeries> series;
    std::optional<GradedMap<F>> minimal;
    std::shared_ptr<void> resolution;
  };
  Cache& cache() const { return *cache_; }

private:
  GradedMap<F> gens_, rels_;
  std::shared_ptr<Cache> cache_;
};

template <class F>
long long hilbertFunction(const Subquotient<F>& M, int d) {
  return M.hilbertFunction(d);
}

template <class F>
HilbertSeries hilbertSeries(const Subquotient<F>& M) {
  return M.hilbertSeries();
}

template <class F>
Subquotient<F> kernelModule(const GradedMap<F>& m) {
  return Subquotient<F>(syzygies(m), GradedMap<F>::zero(m.ring(), GradedFree(), m.source()));
}

template <class F>
Subquotient<F> imageModule(const GradedMap<F>& m) {
  return Subquotient<F>(m, GradedMap<F>::zero(m.ring(), GradedFree(), m.target()));
}

/// ker(beta) / im(alpha) inside the middle module.
template <class F>
Subquotient<F> homologyModule(const GradedMap<F>& beta, const GradedMap<F>& alpha) {
  if (alpha.target() != beta.source()) throw HomologyError("alpha and beta are not composable");
  auto ba = beta.compose(alpha);
  for (std::size_t j = 0; j < ba.numCols(); ++j)
    if (!ba.column(j).empty()) {
      std::uint32_t i = ba.column(j).front().comp;
      throw HomologyError("beta * alpha is nonzero: entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                          ") = " + ba.entry(i, j).toString());
    }
  return Subquotient<F>(syzygies(beta), alpha);
}

/// Minimal presentation of a subquotient.
template <class F>
GradedMap<F> minimalize(const Subquotient<F>& M) {
  return M.minimalPresentationMap();
}

/// M(d): every generator degree decreases by d.
template <class F>
Subquotient<F> twist(const Subquotient<F>& M, int d) {
  return Subquotient<F>(M.gens().shifted(-d), M.rels().shifted(-d));
}

/// Tensor product of two cokernel presentations.
template <class F>
GradedMap<F> tensorPresentations(const GradedMap<F>& P, const GradedMap<F>& Q) {
  const auto& ring = P.ring();
  const GradedFree &A = P.target(), &B = Q.target();
  std::size_t nb = B.rank();
  GradedFree T;
  for (int a : A.degrees)
    for (int b : B.degrees) T.degrees.push_back(a + b);
  std::vector<Vec<F>> rels;
  for (const auto& col : P.columns())
    for (std::uint32_t j = 0; j < nb; ++j) {
      Vec<F> v;
      for (const auto& t : col) v.push_back({t.mono, static_cast<std::uint32_t>(t.comp * nb + j), t.coef});
      canonicalizeVec(*ring, v);
      rels.push_back(std::move(v));
    }
  for (std::uint32_t i = 0; i < A.rank(); ++i)
    for (const auto& col : Q.columns()) {
      Vec<F> v;
      for (const auto& t : col) v.push_back({t.mono, static_cast<std::uint32_t>(i * nb + t.comp), t.coef});
      canonicalizeVec(*ring, v);
      rels.push_back(std::move(v));
    }
  return detail::mapFromVecs(ring, T, std::move(rels), false);
}

template <class F>
Subquotient<F> tensorModules(const Subquotient<F>& M, const Subquotient<F>& N) {
  if (!M.ring()->sameAs(*N.ring())) throw RingMismatch("tensor product of modules over different rings");
  return Subquotient<F>::cokernel(tensorPresentations(minimalize(M), minimalize(N)));
}

} // namespace monadlab
