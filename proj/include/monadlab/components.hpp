#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace monadlab {

class ComponentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline long long binom3(long long n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

/// 8 c2 - 3 + 2e.
inline long long instantonDim(long long c2, int e = 0) {
  if (c2 < 1) throw ComponentError("instanton dimension needs c2 >= 1");
  if (e != 0 && e != -1) throw ComponentError("e must be 0 or -1");
  return 8 * c2 - 3 + 2 * e;
}

struct EinParams {
  int r = 0, s = 0, t = 0;
  long long c2() const { return 1LL * t * t - 1LL * r * r - 1LL * s * s; }
  bool admissible() const { return 0 <= r && r <= s && t > r + s; }
  std::string toString() const {
    return "(" + std::to_string(r) + "," + std::to_string(s) + "," + std::to_string(t) + ")";
  }
  bool operator==(const EinParams&) const = default;
};

/// Correction term; r = s > 0 is taken as 1.
inline int einMu(int r, int s) {
  if (r == 0 && s == 0) return 4;
  if (r == 0 || r == s) return 1;
  return 0;
}

inline long long einDim(const EinParams& p) {
  if (!p.admissible()) throw ComponentError("Ein parameters " + p.toString() + " need 0 <= r <= s < t - r");
  long long r = p.r, s = p.s, t = p.t;
  return binom3(t + r + 3) + binom3(t + s + 3) + binom3(t - r + 3) + binom3(t - s + 3) - binom3(r + s + 3) -
         binom3(s - r + 3) - binom3(2 * r + 3) - binom3(2 * s + 3) - 3 - einMu(p.r, p.s);
}

/// All (r, s, t) with 0 <= r <= s, t > r + s and t^2 - r^2 - s^2 = c2.
/// r^2 + s^2 <= (r + s)^2 <= (t - 1)^2 gives c2 >= 2t - 1, so t <= (c2 + 1) / 2.
inline std::vector<EinParams> einTriples(long long c2) {
  std::vector<EinParams> out;
  if (c2 < 1) return out;
  int tMax = static_cast<int>((c2 + 1) / 2);
  for (int t = 1; t <= tMax; ++t)
    for (int s = 0; s < t; ++s)
      for (int r = 0; r <= s && r + s < t; ++r) {
        EinParams p{r, s, t};
        if (p.c2() == c2) out.push_back(p);
      }
  std::sort(out.begin(), out.end(), [](const EinParams& a, const EinParams& b) {
    return std::tie(a.r, a.s, a.t) < std::tie(b.r, b.s, b.t);
  });
  return out;
}

/// Modified instanton data: c2 = 2m + eps + u^2.
struct ModInstantonParams {
  int u = 1, m = 0, eps = 0;
  long long c2() const { return 2LL * m + eps + 1LL * u * u; }
  /// u <= 4 (any m >= 0); 5 <= u <= 11 with 1 <= m <= u - 4 - eps; u >= 12 with 1 <= m <= u + 1 - eps.
  bool admissible() const {
    if (u < 1 || m < 0 || (eps != 0 && eps != 1)) return false;
    if (u <= 4) return true;
    if (u <= 11) return m >= 1 && m + eps <= u - 4;
    return m >= 1 && m + eps <= u + 1;
  }
  std::string toString() const {
    return "(u=" + std::to_string(u) + ",m=" + std::to_string(m) + ",eps=" + std::to_string(eps) + ")";
  }
  bool operator==(const ModInstantonParams&) const = default;
};

inline long long modInstantonDim(const ModInstantonParams& p) {
  if (!p.admissible()) throw ComponentError("inadmissible modified instanton parameters " + p.toString());
  return 4 * binom3(p.u + 3) + (2LL * p.m + p.eps) * (10 - p.u) - 11;
}

inline std::vector<ModInstantonParams> modInstantonParams(long long c2) {
  std::vector<ModInstantonParams> out;
  for (int u = 1; 1LL * u * u <= c2; ++u)
    for (int eps = 0; eps <= 1; ++eps) {
      long long rest = c2 - 1LL * u * u - eps;
      if (rest < 0 || rest % 2) continue;
      ModInstantonParams p{u, static_cast<int>(rest / 2), eps};
      if (p.admissible()) out.push_back(p);
    }
  return out;
}

/// Family dimension with its provenance.
struct FamilyDim {
  enum class Source { Formula, Tabulated, Extrapolated };
  long long value = 0;
  long long formula = 0;  // the closed form at the same point
  Source source = Source::Formula;
  bool overridden() const { return value != formula; }
  std::string note() const {
    if (source == Source::Extrapolated) return "formula-extrapolation";
    if (overridden()) return "tabulated " + std::to_string(value) + " (formula gives " + std::to_string(formula) + ")";
    return "";
  }
};

/// c2 of the family with k copies of O(a) on each side and middle twists b, -b.
inline long long familyC2(int a, int b, int k) { return 1LL * k * (2 * a - 1) - 1LL * b * b; }

inline FamilyDim familyDimension(int a, int b, int k) {
  if (k < 2 || k > 4) throw ComponentError("family dimension is known for k = 2, 3, 4 only");
  if (b < 0 || b >= a || b > k - 1) throw ComponentError("family needs a > b >= 0 and b <= k - 1");
  long long A = a;
  FamilyDim d;
  int threshold = 0;  // closed form valid for a >= threshold
  if (k == 2) {
    d.formula = 6 * A * A + 6 * A + (b == 0 ? 8 : 2);
    threshold = 2;
  } else if (k == 3) {
    static const long long c[] = {18, 13, -3};
    d.formula = 9 * A * A + 6 * A + c[b];
    threshold = 4;
  } else {
    static const long long c[] = {31, 27, 14, -15};
    d.formula = 12 * A * A + 4 * A + c[b];
    threshold = 5;
  }
  d.value = d.formula;
  if (a >= threshold) return d;
  // published values below the threshold
  struct Row {
    int a, b, k;
    long long v;
  };
  static const Row table[] = {{3, 0, 3, 117}, {3, 1, 3, 112}, {3, 2, 3, 93},  {4, 0, 4, 239}, {4, 1, 4, 235},
                              {4, 2, 4, 222}, {4, 3, 4, 189}, {3, 0, 4, 151}, {3, 1, 4, 147}, {3, 2, 4, 130}};
  for (const auto& row : table)
    if (row.a == a && row.b == b && row.k == k) {
      d.value = row.v;
      d.source = FamilyDim::Source::Tabulated;
      return d;
    }
  d.source = FamilyDim::Source::Extrapolated;
  return d;
}

inline long long familyDim(int a, int b, int k) { return familyDimension(a, b, k).value; }

struct Formula33Inputs {
  long long h = 0, w = 0, g = 0, s = 0;

  static Formula33Inputs forFamily(int a) {
    return {16 + 4 * binom3(a + 3) + 4 * binom3(2 * a + 2), binom3(2 * a + 3), 4,
            7 + 4 * binom3(a + 2) + 3 * binom3(2 * a + 1)};
  }
};

namespace detail {
inline long long combine33(const Formula33Inputs& in) { return in.h - in.w - in.g - in.s; }
}  // namespace detail

/// The combiner must reproduce 6a^2 + 6a + 8 at a = 2, 3, 4 before it is used.
inline bool formula33SelfTest() {
  for (int a = 2; a <= 4; ++a)
    if (detail::combine33(Formula33Inputs::forFamily(a)) != 6LL * a * a + 6LL * a + 8) return false;
  return true;
}

inline long long formula33(const Formula33Inputs& in) {
  static const bool ok = formula33SelfTest();
  if (!ok) throw ComponentError("formula33 self-test failed; refusing to evaluate");
  long long v = detail::combine33(in);
  if (v < 0) throw ComponentError("formula33 is negative; inputs are inconsistent");
  return v;
}

/// One component of B(e, c2) in the known taxonomy.
struct ComponentDescriptor {
  struct Instanton {};
  struct FamilyV {
    int a, b, k;
  };
  std::variant<Instanton, EinParams, ModInstantonParams, FamilyV> kind;
  long long c2 = 0;
  int e = 0;

  long long dimension() const {
    if (std::holds_alternative<Instanton>(kind)) return instantonDim(c2, e);
    if (auto p = std::get_if<EinParams>(&kind)) return einDim(*p);
    if (auto q = std::get_if<ModInstantonParams>(&kind)) return modInstantonDim(*q);
    auto f = std::get<FamilyV>(kind);
    return familyDim(f.a, f.b, f.k);
  }
  std::string name() const {
    if (std::holds_alternative<Instanton>(kind)) return "instanton";
    if (auto p = std::get_if<EinParams>(&kind)) return "ein" + p->toString();
    if (auto q = std::get_if<ModInstantonParams>(&kind)) return "modified-instanton" + q->toString();
    auto f = std::get<FamilyV>(kind);
    return "V(a=" + std::to_string(f.a) + ",b=" + std::to_string(f.b) + ",k=" + std::to_string(f.k) + ")";
  }
};

/// Every known component of B(0, c2), families V included.
inline std::vector<ComponentDescriptor> census(long long c2) {
  std::vector<ComponentDescriptor> out;
  out.push_back({ComponentDescriptor::Instanton{}, c2, 0});
  for (const auto& p : einTriples(c2)) out.push_back({p, c2, 0});
  for (const auto& q : modInstantonParams(c2)) out.push_back({q, c2, 0});
  for (int k = 2; k <= 4; ++k)
    for (int b = 0; b <= k - 1; ++b)
      for (int a = b + 1; familyC2(a, b, k) <= c2; ++a)
        if (familyC2(a, b, k) == c2 && a >= (k == 2 ? 2 : 3)) out.push_back({ComponentDescriptor::FamilyV{a, b, k}, c2, 0});
  return out;
}

/// A rival component compared against a family.
struct Rival {
  std::string kind;
  long long dim = 0;
  /// Non-empty when the rival cannot contain the family for a reason other than dimension.
  std::string excluded;
};

struct SweepRow {
  int a = 0;
  long long c2 = 0;
  FamilyDim family;
  std::vector<Rival> rivals;

  /// Largest rival not excluded; empty kind if none.
  Rival best() const {
    Rival b;
    b.dim = -1;
    for (const auto& r : rivals)
      if (r.excluded.empty() && r.dim > b.dim) b = r;
    return b;
  }
  long long margin() const { return family.value - best().dim; }
  bool violation() const { return margin() <= 0; }
};

struct SweepReport {
  int k = 2, b = 0, aMin = 0, aMax = -1;
  std::vector<SweepRow> rows;

  std::size_t violations() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.violation(); }));
  }

  std::string toTsv() const {
    std::ostringstream os;
    os << "k\tb\ta\tc2\tfamily_dim\tbest_rival\trival_dim\tmargin\tnote\n";
    for (const auto& r : rows) {
      auto best = r.best();
      os << k << "\t" << b << "\t" << r.a << "\t" << r.c2 << "\t" << r.family.value << "\t" << best.kind << "\t"
         << best.dim << "\t" << r.margin() << "\t" << r.family.note() << "\n";
    }
    return os.str();
  }

  std::string toText() const {
    std::ostringstream os;
    os << "dominance sweep k=" << k << " b=" << b << " a=" << aMin << ".." << aMax << "\n";
    char line[256];
    std::snprintf(line, sizeof line, "%4s %6s %10s  %-32s %10s %8s\n", "a", "c2", "family", "best rival", "rival", "margin");
    os << line;
    for (const auto& r : rows) {
      auto best = r.best();
      std::snprintf(line, sizeof line, "%4d %6lld %10lld  %-32s %10lld %8lld%s\n", r.a, r.c2, r.family.value,
                    best.kind.c_str(), best.dim, r.margin(), r.violation() ? "  VIOLATION" : "");
      os << line;
      for (const auto& x : r.rivals)
        if (!x.excluded.empty()) os << "       excluded " << x.kind << " (dim " << x.dim << "): " << x.excluded << "\n";
      if (!r.family.note().empty()) os << "       family dimension: " << r.family.note() << "\n";
    }
    os << "violations: " << violations() << "\n";
    return os.str();
  }
};

/// Compares the family V(a, b, k) with every instanton, Ein and modified
/// instanton component of B(0, c2), c2 = k(2a - 1) - b^2.
///
/// An Ein bundle F with data (r, s, t) has h^1(F(-t)) = 1 on the whole
/// component, while the family has h^1(E(-l)) = 0 for l > a; by
/// semicontinuity an Ein component with t > a cannot contain the family.
/// Modified instanton components with u <= 4 have the expected dimension.
inline SweepReport dominanceSweep(int k, int b, int aMin, int aMax) {
  SweepReport rep;
  rep.k = k;
  rep.b = b;
  rep.aMin = aMin;
  rep.aMax = aMax;
  for (int a = std::max(aMin, b + 1); a <= aMax; ++a) {
    SweepRow row;
    row.a = a;
    row.c2 = familyC2(a, b, k);
    row.family = familyDimension(a, b, k);
    row.rivals.push_back({"instanton", instantonDim(row.c2), ""});
    for (const auto& p : einTriples(row.c2)) {
      Rival r{"ein" + p.toString(), einDim(p), ""};
      if (p.t > a) r.excluded = "h1(F(-" + std::to_string(p.t) + ")) = 1 but the family has h1(E(-l)) = 0 for l > a";
      row.rivals.push_back(r);
    }
    for (const auto& q : modInstantonParams(row.c2)) {
      if (k == 2 && b == 0 && q.u >= 5 && q.u >= a)
        throw ComponentError("modified instanton " + q.toString() + " with u >= 5 and u >= a for c2 = 4a - 2");
      if (q.u <= 4)
        row.rivals.push_back({"modified-instanton" + q.toString(), instantonDim(row.c2), ""});
      else
        row.rivals.push_back({"modified-instanton" + q.toString(), modInstantonDim(q), ""});
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

/// For c2 = 4a - 2: every Ein triple has r, s odd and t even.
inline bool parityFilterCheck(long long c2) {
  if (c2 % 4 != 2) throw ComponentError("parity check needs c2 = 2 mod 4");
  for (const auto& p : einTriples(c2))
    if (p.r % 2 == 0 || p.s % 2 == 0 || p.t % 2 != 0) return false;
  return true;
}

}  // namespace monadlab
