#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace monadlab {

inline constexpr int kNumVars = 4;
inline constexpr std::array<char, kNumVars> kVarNames = {'x', 'y', 'z', 'w'};

/// Largest total degree a monomial may reach.
inline constexpr int kMaxDegree = (1 << 15) - 1;

class DegreeOverflow : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

enum class MonomialOrder { GRevLex, GLex };

/// Monomial x^a y^b z^c w^d packed into one 64-bit word, 16 bits per
/// exponent (x in the top field). Every exponent and the total degree stay
/// below 2^15 so the top bit of each field can serve as a borrow guard.
class Monomial {
public:
  static constexpr std::uint64_t kGuard = 0x8000800080008000ull;
  static constexpr std::uint64_t kField = 0xFFFFull;

  constexpr Monomial() = default;
  constexpr explicit Monomial(std::uint64_t bits) : bits_(bits) {}

  static Monomial fromExponents(int x, int y, int z, int w) {
    if (x < 0 || y < 0 || z < 0 || w < 0)
      throw std::invalid_argument("negative exponent");
    if (x + y + z + w > kMaxDegree)
      throw DegreeOverflow("monomial degree exceeds " + std::to_string(kMaxDegree));
    return Monomial((std::uint64_t(x) << 48) | (std::uint64_t(y) << 32) |
                    (std::uint64_t(z) << 16) | std::uint64_t(w));
  }
  static Monomial var(int i, int e = 1) {
    std::array<int, 4> ex{0, 0, 0, 0};
    ex.at(static_cast<std::size_t>(i)) = e;
    return fromExponents(ex[0], ex[1], ex[2], ex[3]);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr int exponent(int i) const {
    return static_cast<int>((bits_ >> (48 - 16 * i)) & kField);
  }
  constexpr int degree() const {
    return static_cast<int>((bits_ >> 48) + ((bits_ >> 32) & kField) +
                            ((bits_ >> 16) & kField) + (bits_ & kField));
  }
  constexpr bool isOne() const { return bits_ == 0; }

  /// Product without overflow checking; used in inner loops where degrees are
  /// known to be bounded.
  constexpr Monomial mulUnchecked(Monomial o) const { return Monomial(bits_ + o.bits_); }

  Monomial operator*(Monomial o) const {
    std::uint64_t s = bits_ + o.bits_;
    if ((s & kGuard) != 0 || degree() + o.degree() > kMaxDegree)
      throw DegreeOverflow("monomial degree exceeds " + std::to_string(kMaxDegree));
    return Monomial(s);
  }

  /// True if this divides o.
  constexpr bool divides(Monomial o) const {
    return (((o.bits_ | kGuard) - bits_) & kGuard) == kGuard;
  }
  /// o / this, assuming divides(o).
  constexpr Monomial quotientOf(Monomial o) const { return Monomial(o.bits_ - bits_); }

  constexpr Monomial lcm(Monomial o) const {
    std::uint64_t r = 0;
    for (int s = 0; s < 64; s += 16) {
      std::uint64_t a = (bits_ >> s) & kField, b = (o.bits_ >> s) & kField;
      r |= (a > b ? a : b) << s;
    }
    return Monomial(r);
  }
  constexpr Monomial gcd(Monomial o) const {
    std::uint64_t r = 0;
    for (int s = 0; s < 64; s += 16) {
      std::uint64_t a = (bits_ >> s) & kField, b = (o.bits_ >> s) & kField;
      r |= (a < b ? a : b) << s;
    }
    return Monomial(r);
  }
  constexpr bool coprime(Monomial o) const { return gcd(o).isOne(); }

  /// Bit signature: a | b implies (mask(a) & ~mask(b)) == 0.
  constexpr std::uint64_t divMask() const {
    std::uint64_t m = 0;
    for (int i = 0; i < 4; ++i) {
      int e = exponent(i);
      std::uint64_t f = e >= 16 ? kField : ((std::uint64_t(1) << e) - 1);
      m |= f << (16 * i);
    }
    return m;
  }

  constexpr bool operator==(const Monomial&) const = default;

  std::string toString() const {
    std::string s;
    for (int i = 0; i < 4; ++i) {
      int e = exponent(i);
      if (e == 0) continue;
      if (!s.empty()) s += '*';
      s += kVarNames[static_cast<std::size_t>(i)];
      if (e > 1) s += '^' + std::to_string(e);
    }
    return s.empty() ? "1" : s;
  }

private:
  std::uint64_t bits_ = 0;
};

/// Order key whose unsigned comparison realises the monomial order.
/// The argument may exceed the guard limits (shifted Schreyer monomials);
/// only field sums below 2^16 are required.
inline constexpr std::uint64_t orderKey(std::uint64_t b, MonomialOrder ord) {
  const std::uint64_t f = Monomial::kField;
  std::uint64_t x = b >> 48, y = (b >> 32) & f, z = (b >> 16) & f, w = b & f;
  std::uint64_t deg = x + y + z + w;
  if (ord == MonomialOrder::GRevLex)
    return (deg << 48) | ((f - w) << 32) | ((f - z) << 16) | (f - y);
  return (deg << 48) | (x << 32) | (y << 16) | z;
}

inline constexpr std::uint64_t lexKey(Monomial m) { return m.bits(); }

/// Number of monomials of degree d in 4 variables.
inline constexpr long long monomialCount(int d) {
  if (d < 0) return 0;
  long long n = d;
  return (n + 3) * (n + 2) * (n + 1) / 6;
}

} // namespace monadlab
