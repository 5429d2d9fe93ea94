#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "resolution.hpp"

namespace monadlab {

class CohomologyIndexError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

namespace detail {

// Resolution cached on the module; rebuilt longer when a request needs more.
template <class F>
std::shared_ptr<const FreeResolution<F>> resolutionFor(const Subquotient<F>& M, std::size_t extIndex) {
  auto& cache = M.cache();
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    if (cache.resolution) {
      auto res = std::static_pointer_cast<const FreeResolution<F>>(cache.resolution);
      if (res->complete || res->length() > extIndex) return res;
    }
  }
  // Ext^i needs d_{i+1}; past index 2 build the whole thing.
  std::size_t len = extIndex + 1;
  auto res = std::make_shared<const FreeResolution<F>>(len >= 4 ? freeResolution(M, 4) : freeResolution(M, len, false));
  std::lock_guard<std::mutex> lock(cache.mu);
  cache.resolution = std::const_pointer_cast<FreeResolution<F>>(res);
  return res;
}

}  // namespace detail

/// dim Ext^j(M, S)_e, sharing the module's cached resolution.
template <class F>
long long extDimension(const Subquotient<F>& M, std::size_t j, int e) {
  return extDim(*detail::resolutionFor(M, j), j, e);
}

/// h^i(P^3, M~(d)) by local duality.
template <class F>
long long sheafCohomology(const Subquotient<F>& M, int i, int d) {
  if (i < 0 || i > 3) throw CohomologyIndexError("cohomology index must lie in 0..3");
  if (i >= 1) return extDimension(M, static_cast<std::size_t>(3 - i), -d - 4);
  return M.hilbertFunction(d) - extDimension(M, 4, -d - 4) + extDimension(M, 3, -d - 4);
}

template <class F>
long long eulerCharacteristic(const Subquotient<F>& M, int d) {
  long long chi = 0;
  for (int i = 0; i <= 3; ++i) chi += (i % 2 ? -1 : 1) * sheafCohomology(M, i, d);
  return chi;
}

template <class F>
long long h0Global(const Subquotient<F>& M) {
  return sheafCohomology(M, 0, 0);
}

/// h^i(M~(d)) for i = 0..3 over a window of twists.
struct CohomologyTable {
  int dMin = 0, dMax = -1;
  std::map<std::pair<int, int>, long long> entries;  // (i, d) -> h^i

  long long at(int i, int d) const {
    auto it = entries.find({i, d});
    if (it == entries.end()) throw CohomologyIndexError("twist outside the table window");
    return it->second;
  }
  std::string toString() const {
    std::string out = "d";
    for (int d = dMin; d <= dMax; ++d) out += "\t" + std::to_string(d);
    out += "\n";
    for (int i = 3; i >= 0; --i) {
      out += "h" + std::to_string(i);
      for (int d = dMin; d <= dMax; ++d) out += "\t" + std::to_string(at(i, d));
      out += "\n";
    }
    return out;
  }
};

template <class F>
CohomologyTable cohomologyTable(const Subquotient<F>& M, int dMin, int dMax) {
  CohomologyTable t;
  t.dMin = dMin;
  t.dMax = dMax;
  for (int d = dMin; d <= dMax; ++d)
    for (int i = 0; i <= 3; ++i) t.entries[{i, d}] = sheafCohomology(M, i, d);
  return t;
}

}  // namespace monadlab
