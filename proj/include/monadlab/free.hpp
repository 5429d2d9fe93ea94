#pragma once

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "poly.hpp"

namespace monadlab {

/// The graded free module (+)_i S(-d_i). Sheaf twists are the negatives of
/// the generator degrees.
struct GradedFree {
  std::vector<int> degrees;

  GradedFree() = default;
  explicit GradedFree(std::vector<int> d) : degrees(std::move(d)) {}
  static GradedFree fromTwists(const std::vector<int>& twists) {
    GradedFree f;
    for (int t : twists) f.degrees.push_back(-t);
    return f;
  }

  std::size_t rank() const { return degrees.size(); }
  int degree(std::size_t i) const { return degrees[i]; }
  bool operator==(const GradedFree&) const = default;

  GradedFree shifted(int d) const {
    GradedFree r = *this;
    for (int& x : r.degrees) x += d;
    return r;
  }
  GradedFree operator+(const GradedFree& o) const {
    GradedFree r = *this;
    r.degrees.insert(r.degrees.end(), o.degrees.begin(), o.degrees.end());
    return r;
  }
  std::string toString() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < degrees.size(); ++i) os << (i ? "," : "") << degrees[i];
    os << ")";
    return os.str();
  }
};

/// Term c * m * e_comp of a free-module element.
template <class F>
struct VTerm {
  Monomial mono;
  std::uint32_t comp;
  typename F::Elem coef;
};

/// Free-module element, stored sparse and sorted by (component ascending,
/// monomial descending in the ring order). No zero coefficients.
template <class F>
using Vec = std::vector<VTerm<F>>;

template <class F>
void canonicalizeVec(const Ring<F>& R, Vec<F>& v) {
  std::sort(v.begin(), v.end(), [&](const VTerm<F>& a, const VTerm<F>& b) {
    if (a.comp != b.comp) return a.comp < b.comp;
    return R.key(a.mono) > R.key(b.mono);
  });
  Vec<F> out;
  out.reserve(v.size());
  for (auto& t : v) {
    if (!out.empty() && out.back().comp == t.comp && out.back().mono == t.mono) {
      out.back().coef = R.field.add(out.back().coef, t.coef);
    } else {
      if (!out.empty() && R.field.isZero(out.back().coef)) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && R.field.isZero(out.back().coef)) out.pop_back();
  v = std::move(out);
}

template <class F>
Vec<F> vecAdd(const Ring<F>& R, const Vec<F>& a, const Vec<F>& b, bool subtract = false) {
  Vec<F> r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  auto less = [&](const VTerm<F>& s, const VTerm<F>& t) {  // s before t
    if (s.comp != t.comp) return s.comp < t.comp;
    return R.key(s.mono) > R.key(t.mono);
  };
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && less(a[i], b[j]))) {
      r.push_back(a[i++]);
    } else if (i == a.size() || less(b[j], a[i])) {
      r.push_back(b[j]);
      if (subtract) r.back().coef = R.field.neg(r.back().coef);
      ++j;
    } else {
      auto c = subtract ? R.field.sub(a[i].coef, b[j].coef) : R.field.add(a[i].coef, b[j].coef);
      if (!R.field.isZero(c)) r.push_back({a[i].mono, a[i].comp, c});
      ++i;
      ++j;
    }
  }
  return r;
}

template <class F>
Vec<F> vecScale(const Ring<F>& R, const Vec<F>& a, const typename F::Elem& c) {
  Vec<F> r;
  if (R.field.isZero(c)) return r;
  r.reserve(a.size());
  for (const auto& t : a) r.push_back({t.mono, t.comp, R.field.mul(t.coef, c)});
  return r;
}

/// f * v for a polynomial f.
template <class F>
Vec<F> vecMulPoly(const Ring<F>& R, const Poly<F>& f, const Vec<F>& v) {
  Vec<F> r;
  r.reserve(f.size() * v.size());
  for (const auto& a : f.terms())
    for (const auto& t : v) r.push_back({a.mono * t.mono, t.comp, R.field.mul(a.coef, t.coef)});
  canonicalizeVec(R, r);
  return r;
}

template <class F>
Vec<F> vecMulTerm(const Ring<F>& R, Monomial m, const typename F::Elem& c, const Vec<F>& v) {
  Vec<F> r;
  if (R.field.isZero(c)) return r;
  r.reserve(v.size());
  for (const auto& t : v) r.push_back({m * t.mono, t.comp, R.field.mul(c, t.coef)});
  return r;  // multiplication by a term preserves the order
}

/// Component entry of a vector as a polynomial.
template <class F>
Poly<F> vecEntry(const RingPtr<F>& ring, const Vec<F>& v, std::uint32_t comp) {
  std::vector<PolyTerm<F>> ts;
  for (const auto& t : v)
    if (t.comp == comp) ts.push_back({t.mono, t.coef});
  return Poly<F>::fromTerms(ring, std::move(ts));
}

/// Vector whose entries are the given polynomials.
template <class F>
Vec<F> vecFromPolys(const std::vector<Poly<F>>& entries) {
  Vec<F> v;
  for (std::uint32_t i = 0; i < entries.size(); ++i)
    for (const auto& t : entries[i].terms()) v.push_back({t.mono, i, t.coef});
  return v;  // already canonical: components ascend, terms descend
}

/// Degree of a homogeneous vector in F, or nullopt for zero/inhomogeneous.
template <class F>
std::optional<int> vecDegree(const GradedFree& F0, const Vec<F>& v) {
  if (v.empty()) return std::nullopt;
  int d = v.front().mono.degree() + F0.degree(v.front().comp);
  for (const auto& t : v)
    if (t.mono.degree() + F0.degree(t.comp) != d) return std::nullopt;
  return d;
}

class MapError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Degree-preserving map between graded free modules, stored by columns.
/// Entry (i,j) is zero or homogeneous of degree source.d_j - target.d_i.
template <class F>
class GradedMap {
public:
  GradedMap() = default;
  GradedMap(RingPtr<F> ring, GradedFree source, GradedFree target, std::vector<Vec<F>> cols)
      : ring_(std::move(ring)), source_(std::move(source)), target_(std::move(target)), cols_(std::move(cols)) {
    if (cols_.size() != source_.rank()) throw MapError("column count does not match source rank");
  }

  static GradedMap zero(RingPtr<F> ring, GradedFree source, GradedFree target) {
    std::vector<Vec<F>> cols(source.rank());
    return GradedMap(std::move(ring), std::move(source), std::move(target), std::move(cols));
  }
  static GradedMap identity(RingPtr<F> ring, const GradedFree& M) {
    std::vector<Vec<F>> cols(M.rank());
    for (std::uint32_t i = 0; i < M.rank(); ++i) cols[i].push_back({Monomial(), i, ring->field.one()});
    return GradedMap(ring, M, M, std::move(cols));
  }

  const RingPtr<F>& ring() const { return ring_; }
  const GradedFree& source() const { return source_; }
  const GradedFree& target() const { return target_; }
  const std::vector<Vec<F>>& columns() const { return cols_; }
  const Vec<F>& column(std::size_t j) const { return cols_[j]; }
  std::size_t numRows() const { return target_.rank(); }
  std::size_t numCols() const { return source_.rank(); }

  Poly<F> entry(std::size_t i, std::size_t j) const {
    return vecEntry(ring_, cols_[j], static_cast<std::uint32_t>(i));
  }
  int entryDegree(std::size_t i, std::size_t j) const { return source_.degree(j) - target_.degree(i); }

  bool isZero() const {
    return std::all_of(cols_.begin(), cols_.end(), [](const Vec<F>& c) { return c.empty(); });
  }

  /// Image of a source element.
  Vec<F> apply(const Vec<F>& v) const {
    const Ring<F>& R = *ring_;
    Vec<F> acc;
    for (const auto& t : v) {
      Vec<F> part = vecMulTerm(R, t.mono, t.coef, cols_[t.comp]);
      acc.insert(acc.end(), part.begin(), part.end());
    }
    canonicalizeVec(R, acc);
    return acc;
  }

  /// this ∘ other.
  GradedMap compose(const GradedMap& other) const {
    if (other.target_ != source_) throw MapError("composition of incompatible maps");
    std::vector<Vec<F>> cols;
    cols.reserve(other.cols_.size());
    for (const auto& c : other.cols_) cols.push_back(apply(c));
    return GradedMap(ring_, other.source_, target_, std::move(cols));
  }

  /// Checks the entry-degree rule; returns a description of the first
  /// violation or an empty string.
  std::string degreeViolation() const {
    for (std::size_t j = 0; j < cols_.size(); ++j)
      for (const auto& t : cols_[j]) {
        int want = entryDegree(t.comp, j);
        if (t.mono.degree() != want) {
          Poly<F> e = entry(t.comp, j);
          auto hd = e.homogeneousDegree();
          std::ostringstream os;
          os << "entry (" << t.comp + 1 << "," << j + 1 << "): expected degree " << want << ", got ";
          if (hd.isHomogeneous())
            os << hd.degree;
          else
            os << "an inhomogeneous polynomial";
          os << " (" << e.toString() << ")";
          return os.str();
        }
      }
    return {};
  }

  /// Transposed matrix as a map target^* -> source^*.
  GradedMap dual() const {
    std::vector<Vec<F>> cols(target_.rank());
    for (std::uint32_t j = 0; j < cols_.size(); ++j)
      for (const auto& t : cols_[j]) cols[t.comp].push_back({t.mono, j, t.coef});
    for (auto& c : cols) canonicalizeVec(*ring_, c);
    GradedFree s, tg;
    for (int d : target_.degrees) s.degrees.push_back(-d);
    for (int d : source_.degrees) tg.degrees.push_back(-d);
    return GradedMap(ring_, std::move(s), std::move(tg), std::move(cols));
  }

  /// Same matrix with source and target degrees shifted by d.
  GradedMap shifted(int d) const { return GradedMap(ring_, source_.shifted(d), target_.shifted(d), cols_); }

  bool operator==(const GradedMap& o) const {
    if (source_ != o.source_ || target_ != o.target_) return false;
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (cols_[j].size() != o.cols_[j].size()) return false;
      for (std::size_t k = 0; k < cols_[j].size(); ++k) {
        const auto &a = cols_[j][k], &b = o.cols_[j][k];
        if (a.comp != b.comp || a.mono != b.mono || !ring_->field.equal(a.coef, b.coef)) return false;
      }
    }
    return true;
  }

  std::string toString() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < numRows(); ++i) {
      os << "[";
      for (std::size_t j = 0; j < numCols(); ++j) os << (j ? ", " : "") << entry(i, j).toString();
      os << "]\n";
    }
    return os.str();
  }

private:
  RingPtr<F> ring_;
  GradedFree source_, target_;
  std::vector<Vec<F>> cols_;
};

/// Validated construction from a target.rank() x source.rank() matrix.
template <class F>
GradedMap<F> makeMap(const RingPtr<F>& ring, const GradedFree& source, const GradedFree& target,
                     const std::vector<std::vector<Poly<F>>>& rows) {
  if (rows.size() != target.rank()) throw MapError("row count does not match target rank");
  std::vector<Vec<F>> cols(source.rank());
  for (std::uint32_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != source.rank()) throw MapError("row " + std::to_string(i + 1) + " has wrong length");
    for (std::uint32_t j = 0; j < rows[i].size(); ++j)
      for (const auto& t : rows[i][j].terms()) cols[j].push_back({t.mono, i, t.coef});
  }
  for (auto& c : cols) canonicalizeVec(*ring, c);
  GradedMap<F> m(ring, source, target, std::move(cols));
  std::string bad = m.degreeViolation();
  if (!bad.empty()) throw MapError(bad);
  return m;
}

/// Horizontal concatenation [A | B] of maps with a common target.
template <class F>
GradedMap<F> concatColumns(const GradedMap<F>& a, const GradedMap<F>& b) {
  if (a.target() != b.target()) throw MapError("concatenation of maps with different targets");
  auto cols = a.columns();
  cols.insert(cols.end(), b.columns().begin(), b.columns().end());
  return GradedMap<F>(a.ring(), a.source() + b.source(), a.target(), std::move(cols));
}

} // namespace monadlab
