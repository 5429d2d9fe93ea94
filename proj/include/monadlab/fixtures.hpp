#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "monad.hpp"
#include "parse.hpp"

namespace monadlab {

class FixtureError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Integer parameters of a fixture, e.g. {"a", 3}, {"b", 0}.
using FixtureParams = std::map<std::string, int>;

namespace detail {

inline std::string pw(const char* var, int e) {
  if (e == 0) return "1";
  if (e == 1) return var;
  return std::string(var) + "^" + std::to_string(e);
}

inline int param(const FixtureParams& p, const std::string& key, const std::string& name) {
  auto it = p.find(key);
  if (it == p.end()) throw FixtureError("fixture " + name + " needs parameter " + key);
  return it->second;
}

template <class F>
GradedMap<F> mapFromStrings(const RingPtr<F>& ring, const std::vector<int>& sourceTwists,
                            const std::vector<int>& targetTwists, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::vector<Poly<F>>> polys;
  for (const auto& row : rows) {
    polys.emplace_back();
    for (const auto& s : row) polys.back().push_back(parsePoly(s, ring));
  }
  return makeMap(ring, GradedFree::fromTwists(sourceTwists), GradedFree::fromTwists(targetTwists), polys);
}

template <class F>
Monad<F> monadFromStrings(const RingPtr<F>& ring, const std::vector<int>& left, const std::vector<int>& middle,
                          const std::vector<int>& right, const std::vector<std::vector<std::string>>& alpha,
                          const std::vector<std::vector<std::string>>& beta) {
  return makeMonad(mapFromStrings(ring, left, middle, alpha), mapFromStrings(ring, middle, right, beta));
}

inline std::vector<int> rep(int v, int n) { return std::vector<int>(static_cast<std::size_t>(n), v); }

inline std::vector<int> cat(std::initializer_list<std::vector<int>> parts) {
  std::vector<int> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace detail

/// Names accepted by fixture().
inline const std::vector<std::string>& fixtureNames() {
  static const std::vector<std::string> names = {"thm34",   "table1-row1", "table1-row2",   "table1-row3", "M0",
                                                 "family2", "family2-tilde", "ex32", "k3", "k4"};
  return names;
}

/// Whether the fixture takes a and b parameters.
inline bool fixtureTakesA(const std::string& name) {
  return name == "M0" || name == "family2" || name == "family2-tilde" || name == "k3" || name == "k4";
}
inline bool fixtureTakesB(const std::string& name) { return name == "k3" || name == "k4"; }

/// Set when the last k3/k4 request used b = a - 1.
inline std::string& fixtureWarning() {
  thread_local std::string w;
  return w;
}

template <class F>
Monad<F> fixture(const RingPtr<F>& ring, const std::string& name, const FixtureParams& params = {}) {
  using detail::pw;
  using detail::rep;
  fixtureWarning().clear();

  if (name == "thm34") {
    return detail::monadFromStrings(
        ring, {-3, -3}, {1, 1, 1, -2, -2, -2}, {2, 2},
        {{"0", "x^4"}, {"w^4", "0"}, {"x^4", "w^4"}, {"-y", "-w"}, {"-x", "-z"}, {"-z", "-y"}},
        {{"y", "x", "z", "0", "w^4", "x^4"}, {"w", "z", "y", "x^4", "0", "w^4"}});
  }
  if (name == "table1-row1") return fixture(ring, "M0", {{"a", 2}});
  if (name == "table1-row2") {
    return detail::monadFromStrings(
        ring, {-3, -1}, {2, 0, 0, 0, 0, -2}, {3, 1},
        {{"w^5", "x^3"}, {"0", "-w"}, {"0", "z"}, {"x^3", "0"}, {"-z^3", "-y"}, {"-y", "0"}},
        {{"y", "0", "0", "z^3", "x^3", "w^5"}, {"0", "z", "w", "y", "0", "x^3"}});
  }
  if (name == "table1-row3") {
    return detail::monadFromStrings(
        ring, {-2, -2, -1}, {1, 1, 1, 0, 0, -1, -1, -1}, {2, 2, 1},
        {{"0", "-w^3", "y^2"},
         {"x^3", "w^3", "-y*z"},
         {"z^3", "x^3", "-y*w + z*w"},
         {"0", "0", "-z + w"},
         {"0", "0", "x"},
         {"-w", "-y", "0"},
         {"-y", "0", "0"},
         {"w", "z", "0"}},
        {{"z", "y", "0", "0", "0", "w^3", "x^3", "w^3"},
         {"w", "w", "y", "0", "0", "x^3", "z^3", "0"},
         {"0", "0", "0", "x", "z - w", "y*z", "y*w - z*w", "y^2"}});
  }
  if (name == "ex32") return fixture(ring, "family2", {{"a", 3}});

  if (!fixtureTakesA(name)) throw FixtureError("unknown fixture " + name);
  int a = detail::param(params, "a", name);

  if (name == "M0") {
    if (a < 2) throw FixtureError("M0 needs a >= 2");
    int e = 2 * a - 1;
    return detail::monadFromStrings(
        ring, {-a, -a}, {a - 1, a - 1, 0, 0, 1 - a, 1 - a}, {a, a},
        {{pw("z", e), pw("x", a) + "*" + pw("w", a - 1)},
         {pw("x", e), pw("z", e)},
         {"0", "-y*" + pw("w", a - 1) + " + " + pw("w", a)},
         {"0", "-" + pw("x", a)},
         {"-w", "-y"},
         {"-y", "0"}},
        {{"y", "0", pw("x", a), pw("w", a), "0", pw("z", e)}, {"w", "y", "0", pw("w", a), pw("z", e), pw("x", e)}});
  }
  if (name == "family2") {
    if (a < 3) throw FixtureError("family2 needs a >= 3");
    int e = 2 * a - 1;
    return detail::monadFromStrings(
        ring, {-a, -a}, {a - 1, a - 1, 1 - a, 1 - a, 1, -1}, {a, a},
        {{pw("w", e), "0"},
         {pw("z", e), pw("w", e) + " + " + pw("x", a - 2) + "*" + pw("z", a + 1)},
         {"-x", "0"},
         {"-y", "-x"},
         {"0", "-" + pw("z", a + 1)},
         {"y*" + pw("z", a - 2), "x*" + pw("z", a - 2) + " + " + pw("y", a - 1)}},
        {{"x", "0", pw("w", e), pw("z", e), pw("y", a - 1), pw("z", a + 1)},
         {"y", "x", pw("z", e), pw("w", e), pw("x", a - 1), "0"}});
  }
  if (name == "family2-tilde") {
    if (a < 3) throw FixtureError("family2-tilde needs a >= 3");
    int e = 2 * a - 1;
    return detail::monadFromStrings(
        ring, {-a, -a}, {a - 1, a - 1, 1, -1, 1 - a, 1 - a}, {a, a},
        {{pw("y", e), pw("z", e)},
         {pw("z", e) + " + " + pw("y", a - 1) + "*" + pw("w", a), pw("y", e)},
         {"-" + pw("y", a) + "*w - x*" + pw("w", a), "-x*" + pw("y", a)},
         {"-" + pw("y", a - 1), "0"},
         {"-x", "-w"},
         {"-w", "-x"}},
        {{"w", "x", pw("y", a - 1), "0", pw("z", e), "0"}, {"x", "w", "0", pw("w", a + 1), pw("y", e), pw("z", e)}});
  }

  int b = detail::param(params, "b", name);
  if (b < 0 || b >= a) throw FixtureError(name + " needs a > b >= 0");
  if (b == a - 1) fixtureWarning() = name + ": b = a - 1 makes the y^(a-b) - z^(a-b) entries linear";
  int e = 2 * a - 1;
  std::string d = pw("y", a - b) + " - " + pw("z", a - b);      // y^{a-b} - z^{a-b}
  std::string md = "-" + pw("y", a - b) + " + " + pw("z", a - b);
  std::string xab = pw("x", a + b), wab = pw("w", a + b);

  if (name == "k3") {
    std::string xe = pw("x", e), ze = pw("z", e), we = pw("w", e);
    return detail::monadFromStrings(
        ring, rep(-a, 3), detail::cat({rep(a - 1, 3), {b, -b}, rep(1 - a, 3)}), rep(a, 3),
        {{"0", xe + " - " + we, "0"},
         {xe + " - " + ze, "y*" + pw("w", e - 1) + " - " + we, "-" + ze + " + " + we},
         {"0", we, xe + " - " + we},
         {xab, "0", "0"},
         {md, "0", "0"},
         {"w", "z", "y + w"},
         {"-w", "-y", "-w"},
         {"0", "-z", "-y"}},
        {{"z", "0", "y", "0", "0", we, we, xe},
         {"y", "w", "w", "0", "0", ze, xe, ze},
         {"-z", "-w", "-y - w", d, xab, xe + " - " + ze + " - 2*" + we, "-2*" + we, "-" + ze + " - " + we}});
  }
  // k4
  std::string xe = pw("x", e), ye = pw("y", e), ze = pw("z", e);
  std::string xe1w = pw("x", e - 1) + "*w", xe1z = pw("x", e - 1) + "*z";
  return detail::monadFromStrings(
      ring, rep(-a, 4), detail::cat({rep(a - 1, 4), {b, -b}, rep(1 - a, 4)}), rep(a, 4),
      {{"0", "0", xe, ye},
       {"0", xe, ye, "0"},
       {"0", ye, "0", xe},
       {ze, "0", "-" + xe1w, "-" + xe1z},
       {wab, wab, "0", "0"},
       {md, md, "0", "0"},
       {"-x", "0", "w", "z"},
       {"0", "-z", "w", "z - w"},
       {"0", "-w", "-z", "0"},
       {"0", "0", "-w", "-z"}},
      {{"z", "w", "0", "0", "0", "0", "0", "0", xe, ye},
       {"0", "z", "w", "0", "0", "0", "0", xe, ye, xe},
       {"w", "0", "z", "x", "0", "0", ze, ye, "0", ye + " + " + ze},
       {"0", "z", "w", "x", d, wab, ze, xe, ye, ze}});
}

/// Example 3.2 exactly as displayed, with x^3 in row 2, column 5 of B; this
/// entry has the wrong degree, so the display cannot define a graded map.
inline std::vector<std::vector<std::string>> ex32DisplayBeta() {
  return {{"x", "0", "w^5", "z^5", "y^2", "z^4"}, {"y", "x", "z^5", "w^5", "x^3", "0"}};
}

}  // namespace monadlab
