#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"
#include "monomial.hpp"

namespace monadlab {

class RingMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Coefficient field plus monomial order of S = k[x,y,z,w].
template <class F>
struct Ring {
  F field;
  MonomialOrder order = MonomialOrder::GRevLex;

  Ring() = default;
  Ring(F f, MonomialOrder o = MonomialOrder::GRevLex) : field(std::move(f)), order(o) {}

  std::uint64_t key(Monomial m) const { return orderKey(m.bits(), order); }
  bool sameAs(const Ring& o) const { return field == o.field && order == o.order; }
};

template <class F>
using RingPtr = std::shared_ptr<const Ring<F>>;

template <class F>
RingPtr<F> makeRing(F field = F(), MonomialOrder order = MonomialOrder::GRevLex) {
  return std::make_shared<const Ring<F>>(std::move(field), order);
}

template <class F>
struct PolyTerm {
  Monomial mono;
  typename F::Elem coef;
};

/// Outcome of a homogeneity test.
struct HomDegree {
  enum class Kind { Zero, Homogeneous, Inhomogeneous };
  Kind kind = Kind::Zero;
  int degree = 0;

  bool isZero() const { return kind == Kind::Zero; }
  bool isHomogeneous() const { return kind == Kind::Homogeneous; }
  std::optional<int> value() const {
    if (kind == Kind::Homogeneous) return degree;
    return std::nullopt;
  }
};

/// Polynomial in canonical form: terms strictly descending in the ring's
/// order, no zero coefficients.
template <class F>
class Poly {
public:
  using Elem = typename F::Elem;
  using Term = PolyTerm<F>;

  Poly() = default;
  explicit Poly(RingPtr<F> ring) : ring_(std::move(ring)) {}

  static Poly constant(RingPtr<F> ring, const Elem& c) {
    Poly p(std::move(ring));
    if (!p.field().isZero(c)) p.terms_.push_back({Monomial(), c});
    return p;
  }
  static Poly monomial(RingPtr<F> ring, Monomial m, const Elem& c) {
    Poly p(std::move(ring));
    if (!p.field().isZero(c)) p.terms_.push_back({m, c});
    return p;
  }
  static Poly variable(RingPtr<F> ring, int i) {
    auto one = ring->field.one();
    return monomial(std::move(ring), Monomial::var(i), one);
  }
  /// Builds a canonical polynomial from arbitrary terms (merging duplicates).
  static Poly fromTerms(RingPtr<F> ring, std::vector<Term> terms) {
    Poly p(std::move(ring));
    p.terms_ = std::move(terms);
    p.canonicalize();
    return p;
  }

  const RingPtr<F>& ring() const { return ring_; }
  const F& field() const { return ring_->field; }
  const std::vector<Term>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Term& lead() const { return terms_.front(); }

  bool isConstant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.isOne()); }

  HomDegree homogeneousDegree() const {
    if (terms_.empty()) return {};
    int d = terms_.front().mono.degree();
    for (const auto& t : terms_)
      if (t.mono.degree() != d) return {HomDegree::Kind::Inhomogeneous, 0};
    return {HomDegree::Kind::Homogeneous, d};
  }
  int maxDegree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree());
    return d;
  }

  Poly operator+(const Poly& o) const { return combine(o, false); }
  Poly operator-(const Poly& o) const { return combine(o, true); }
  Poly operator-() const {
    Poly r(ring_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono, field().neg(t.coef)});
    return r;
  }
  Poly operator*(const Poly& o) const {
    checkRing(o);
    Poly r(ring_);
    if (isZero() || o.isZero()) return r;
    std::vector<Term> acc;
    acc.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) acc.push_back({a.mono * b.mono, field().mul(a.coef, b.coef)});
    r.terms_ = std::move(acc);
    r.canonicalize();
    return r;
  }
  Poly scale(const Elem& c) const {
    Poly r(ring_);
    if (field().isZero(c)) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono, field().mul(t.coef, c)});
    return r;
  }
  Poly mulMonomial(Monomial m, const Elem& c) const {
    Poly r(ring_);
    if (field().isZero(c)) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, field().mul(t.coef, c)});
    return r;
  }
  Poly pow(unsigned e) const {
    Poly r = constant(ring_, field().one());
    Poly b = *this;
    while (e) {
      if (e & 1) r = r * b;
      e >>= 1;
      if (e) b = b * b;
    }
    return r;
  }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  bool operator==(const Poly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
      if (terms_[i].mono != o.terms_[i].mono || !field().equal(terms_[i].coef, o.terms_[i].coef))
        return false;
    return true;
  }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  /// Coefficient of a monomial (zero if absent).
  Elem coefficient(Monomial m) const {
    for (const auto& t : terms_)
      if (t.mono == m) return t.coef;
    return field().zero();
  }

  /// Value at a point of k^4.
  Elem evaluate(const std::vector<Elem>& pt) const {
    const F& k = field();
    Elem s = k.zero();
    for (const auto& t : terms_) {
      Elem v = t.coef;
      for (int i = 0; i < kNumVars; ++i)
        for (int e = t.mono.exponent(i); e > 0; --e) v = k.mul(v, pt[static_cast<std::size_t>(i)]);
      s = k.add(s, v);
    }
    return s;
  }

  /// Image of the polynomial in another coefficient field.
  template <class G, class Conv>
  Poly<G> mapCoefficients(RingPtr<G> target, Conv conv) const {
    std::vector<PolyTerm<G>> ts;
    for (const auto& t : terms_) ts.push_back({t.mono, conv(t.coef)});
    return Poly<G>::fromTerms(std::move(target), std::move(ts));
  }

  std::string toString() const {
    if (terms_.empty()) return "0";
    const F& k = field();
    std::string s;
    bool first = true;
    for (const auto& t : terms_) {
      bool neg = k.isNegative(t.coef);
      Elem a = neg ? k.neg(t.coef) : t.coef;
      if (first) {
        if (neg) s += "-";
      } else {
        s += neg ? " - " : " + ";
      }
      first = false;
      if (t.mono.isOne()) {
        s += k.toString(a);
      } else {
        if (!k.isOne(a)) s += k.toString(a) + "*";
        s += t.mono.toString();
      }
    }
    return s;
  }

private:
  void checkRing(const Poly& o) const {
    if (ring_ != o.ring_ && !(ring_ && o.ring_ && ring_->sameAs(*o.ring_)))
      throw RingMismatch("polynomials belong to different rings");
  }

  Poly combine(const Poly& o, bool subtract) const {
    checkRing(o);
    const F& k = field();
    Poly r(ring_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      if (j == o.terms_.size() ||
          (i < terms_.size() && ring_->key(terms_[i].mono) > ring_->key(o.terms_[j].mono))) {
        r.terms_.push_back(terms_[i++]);
      } else if (i == terms_.size() || ring_->key(terms_[i].mono) < ring_->key(o.terms_[j].mono)) {
        const auto& t = o.terms_[j++];
        r.terms_.push_back({t.mono, subtract ? k.neg(t.coef) : t.coef});
      } else {
        Elem c = subtract ? k.sub(terms_[i].coef, o.terms_[j].coef) : k.add(terms_[i].coef, o.terms_[j].coef);
        if (!k.isZero(c)) r.terms_.push_back({terms_[i].mono, c});
        ++i;
        ++j;
      }
    }
    return r;
  }

  void canonicalize() {
    const Ring<F>& R = *ring_;
    std::sort(terms_.begin(), terms_.end(),
              [&](const Term& a, const Term& b) { return R.key(a.mono) > R.key(b.mono); });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().mono == t.mono) {
        out.back().coef = R.field.add(out.back().coef, t.coef);
      } else {
        if (!out.empty() && R.field.isZero(out.back().coef)) out.pop_back();
        out.push_back(std::move(t));
      }
    }
    if (!out.empty() && R.field.isZero(out.back().coef)) out.pop_back();
    terms_ = std::move(out);
  }

  RingPtr<F> ring_;
  std::vector<Term> terms_;
};

template <class F>
HomDegree homogeneousDegree(const Poly<F>& f) {
  return f.homogeneousDegree();
}

} // namespace monadlab
