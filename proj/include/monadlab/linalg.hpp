#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>
#include <utility>
#include <vector>

#include "budget.hpp"

namespace monadlab {

/// Sparse row: (column, value) pairs with strictly increasing columns.
template <class F>
using SparseRow = std::vector<std::pair<std::uint32_t, typename F::Elem>>;

/// Incremental row echelon form over a field. Rows are reduced against the
/// pivots found so far; the rank is the number of pivots.
template <class F>
class SparseEchelon {
public:
  using Elem = typename F::Elem;

  SparseEchelon(const F& k, std::size_t ncols) : k_(k), pivotOf_(ncols, -1), dense_(ncols, k.zero()), mark_(ncols, 0) {}

  std::size_t rank() const { return pivots_.size(); }
  std::size_t numCols() const { return pivotOf_.size(); }

  /// Adds a row; returns true if it increased the rank.
  bool addRow(const SparseRow<F>& row) {
    if (row.empty()) return false;
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> cols;
    std::vector<std::uint32_t> touched;
    auto touch = [&](std::uint32_t c) {
      if (!mark_[c]) {
        mark_[c] = 1;
        touched.push_back(c);
        cols.push(c);
      }
    };
    for (const auto& [c, v] : row) {
      dense_[c] = v;
      touch(c);
    }
    bool added = false;
    while (!cols.empty()) {
      std::uint32_t c = cols.top();
      cols.pop();
      if (k_.isZero(dense_[c])) continue;
      long p = pivotOf_[c];
      if (p < 0) {
        // New pivot: collect the remaining nonzeros, normalized.
        SparseRow<F> piv;
        Elem inv = k_.inv(dense_[c]);
        piv.push_back({c, k_.one()});
        std::vector<std::uint32_t> rest;
        while (!cols.empty()) {
          rest.push_back(cols.top());
          cols.pop();
        }
        for (std::uint32_t r : rest)
          if (!k_.isZero(dense_[r])) piv.push_back({r, k_.mul(dense_[r], inv)});
        pivotOf_[c] = static_cast<long>(pivots_.size());
        pivots_.push_back(std::move(piv));
        added = true;
        break;
      }
      const SparseRow<F>& pr = pivots_[static_cast<std::size_t>(p)];
      Elem f = dense_[c];
      Budget::tick(static_cast<long long>(pr.size()));
      for (const auto& [pc, pv] : pr) {
        touch(pc);
        dense_[pc] = k_.sub(dense_[pc], k_.mul(f, pv));
      }
    }
    for (std::uint32_t c : touched) {
      dense_[c] = k_.zero();
      mark_[c] = 0;
    }
    return added;
  }

private:
  const F& k_;
  std::vector<long> pivotOf_;
  std::vector<SparseRow<F>> pivots_;
  std::vector<Elem> dense_;
  std::vector<char> mark_;
};

/// Rank of a sparse matrix given by rows. Shorter rows go first, which
/// keeps fill-in down on the structured matrices used here.
template <class F>
std::size_t sparseRank(const F& k, std::vector<SparseRow<F>> rows, std::size_t ncols) {
  std::stable_sort(rows.begin(), rows.end(), [](const SparseRow<F>& a, const SparseRow<F>& b) {
    if (a.empty() || b.empty()) return a.size() < b.size();
    if (a.front().first != b.front().first) return a.front().first < b.front().first;
    return a.size() < b.size();
  });
  SparseEchelon<F> e(k, ncols);
  for (const auto& r : rows) e.addRow(r);
  return e.rank();
}

} // namespace monadlab
