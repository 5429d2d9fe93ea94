#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace monadlab {

class FieldError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline bool isPrime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Prime field Z/p with p < 2^31. Elements are stored in [0, p).
class Fp {
public:
  using Elem = std::uint32_t;

  explicit Fp(std::uint32_t p = 32003) : p_(p) {
    if (p >= (1u << 31) || !isPrime(p))
      throw FieldError("p = " + std::to_string(p) + " is not a prime below 2^31");
  }

  std::uint32_t characteristic() const { return p_; }
  std::string name() const { return "Fp(" + std::to_string(p_) + ")"; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool isZero(Elem a) const { return a == 0; }
  bool isOne(Elem a) const { return a == 1; }
  bool equal(Elem a, Elem b) const { return a == b; }

  Elem add(Elem a, Elem b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Elem inv(Elem a) const {
    if (a == 0) throw FieldError("division by zero in " + name());
    std::int64_t t = 0, newT = 1, r = p_, newR = a;
    while (newR != 0) {
      std::int64_t q = r / newR;
      std::int64_t tmp = t - q * newT;
      t = newT;
      newT = tmp;
      tmp = r - q * newR;
      r = newR;
      newR = tmp;
    }
    if (t < 0) t += p_;
    return static_cast<Elem>(t);
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem fromInt(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<Elem>(r);
  }
  Elem fromMpz(const mpz_class& v) const {
    mpz_class r = v % p_;
    if (r < 0) r += p_;
    return static_cast<Elem>(r.get_ui());
  }
  /// Reduces a rational number; throws if p divides the denominator.
  Elem fromMpq(const mpq_class& v) const {
    Elem den = fromMpz(v.get_den());
    return div(fromMpz(v.get_num()), den);
  }

  /// Balanced representative in (-p/2, p/2].
  long long toSigned(Elem a) const {
    return a > p_ / 2 ? static_cast<long long>(a) - p_ : static_cast<long long>(a);
  }
  std::string toString(Elem a) const { return std::to_string(toSigned(a)); }
  bool isNegative(Elem a) const { return a > p_ / 2; }

  bool operator==(const Fp& o) const { return p_ == o.p_; }
  bool operator!=(const Fp& o) const { return p_ != o.p_; }

private:
  std::uint32_t p_;
};

/// The rational numbers, backed by GMP.
class QQ {
public:
  using Elem = mpq_class;

  std::uint32_t characteristic() const { return 0; }
  std::string name() const { return "QQ"; }

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  bool isZero(const Elem& a) const { return sgn(a) == 0; }
  bool isOne(const Elem& a) const { return a == 1; }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem inv(const Elem& a) const {
    if (sgn(a) == 0) throw FieldError("division by zero in QQ");
    return Elem(1) / a;
  }
  Elem div(const Elem& a, const Elem& b) const {
    if (sgn(b) == 0) throw FieldError("division by zero in QQ");
    return a / b;
  }

  Elem fromInt(long long v) const { return Elem(static_cast<long>(v)); }
  Elem fromMpz(const mpz_class& v) const { return Elem(v); }
  Elem fromMpq(const mpq_class& v) const { return v; }

  std::string toString(const Elem& a) const { return a.get_str(); }
  bool isNegative(const Elem& a) const { return sgn(a) < 0; }

  bool operator==(const QQ&) const { return true; }
  bool operator!=(const QQ&) const { return false; }
};

} // namespace monadlab
