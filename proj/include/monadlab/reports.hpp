#pragma once

#include <atomic>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "budget.hpp"
#include "components.hpp"
#include "fixtures.hpp"
#include "monad.hpp"
#include "sheafcoh.hpp"

namespace monadlab {

/// Missing or malformed expected-value file.
class GoldenError : public std::runtime_error {
public:
  explicit GoldenError(const std::string& what) : std::runtime_error(what) {}
};

inline nlohmann::json loadGolden(const std::string& dir, const std::string& name) {
  std::string path = dir + "/" + name + ".json";
  std::ifstream in(path);
  if (!in) throw GoldenError("cannot open expected values " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw GoldenError(path + ": " + e.what());
  }
}

struct Mismatch {
  std::string row, column, expected, actual;
};

struct Report {
  std::string title;
  std::string golden;  // file name the cells were checked against, empty if none
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;
  std::vector<Mismatch> mismatches;
  std::size_t checked = 0;
  /// Preformatted bodies that replace the generic table.
  std::optional<std::string> text, tsv;

  bool ok() const { return mismatches.empty(); }

  void expect(const std::string& row, const std::string& column, const nlohmann::json& expected,
              const std::string& actual) {
    ++checked;
    std::string e = expected.is_string() ? expected.get<std::string>() : expected.dump();
    if (e != actual) mismatches.push_back({row, column, e, actual});
  }

  std::string toText() const {
    std::ostringstream os;
    if (!title.empty()) os << title << "\n";
    if (text) {
      os << *text;
    } else {
      std::vector<std::size_t> w(columns.size());
      for (std::size_t c = 0; c < columns.size(); ++c) w[c] = columns[c].size();
      for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size() && c < w.size(); ++c) w[c] = std::max(w[c], r[c].size());
      auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t c = 0; c < cells.size(); ++c) {
          s += cells[c];
          if (c + 1 < cells.size()) s += std::string(w[c] - cells[c].size() + 2, ' ');
        }
        s.erase(s.find_last_not_of(' ') + 1);
        os << s << "\n";
      };
      line(columns);
      for (const auto& r : rows) line(r);
    }
    for (const auto& n : notes) os << "note: " << n << "\n";
    os << summary();
    return os.str();
  }

  std::string toTsv() const {
    std::ostringstream os;
    if (tsv) {
      os << *tsv;
    } else {
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) os << (c ? "\t" : "") << cells[c];
        os << "\n";
      };
      line(columns);
      for (const auto& r : rows) line(r);
    }
    for (const auto& n : notes) os << "# note: " << n << "\n";
    std::istringstream s(summary());
    for (std::string l; std::getline(s, l);) os << "# " << l << "\n";
    return os.str();
  }

  std::string summary() const {
    std::ostringstream os;
    if (ok()) {
      if (!golden.empty()) os << "match: " << checked << (checked == 1 ? " cell agrees with " : " cells agree with ") << golden << "\n";
    } else {
      os << "mismatch: " << mismatches.size() << " of " << std::max(checked, mismatches.size()) << " cells differ"
         << (golden.empty() ? std::string() : " from " + golden) << "\n";
      for (const auto& m : mismatches)
        os << "  row " << m.row << ", " << m.column << ": expected " << m.expected << ", got " << m.actual << "\n";
    }
    return os.str();
  }
};

/// Shared state of one job: limits, worker count and finished units.
struct JobContext {
  double budgetSeconds = 0;  // 0: no time limit
  long long maxSteps = 0;    // per unit; 0: no limit
  unsigned workers = 1;
  std::string goldenDir;
  /// Unit key -> value. Seeded from a checkpoint, extended as units finish.
  nlohmann::json completed = nlohmann::json::object();
  std::optional<Budget::Clock::time_point> deadline;

  void start() {
    if (budgetSeconds > 0 && !deadline)
      deadline = Budget::Clock::now() +
                 std::chrono::duration_cast<Budget::Clock::duration>(std::chrono::duration<double>(budgetSeconds));
  }
  Budget makeBudget() const { return deadline ? Budget::until(*deadline, maxSteps) : Budget(0, maxSteps); }
};

using Unit = std::pair<std::string, std::function<nlohmann::json()>>;

/// Runs the units not already in ctx.completed on up to ctx.workers threads.
/// Results come back in input order. If any unit runs out of budget the
/// finished ones are kept in ctx.completed and BudgetExceeded is rethrown.
inline std::vector<nlohmann::json> runUnits(JobContext& ctx, const std::vector<Unit>& units) {
  ctx.start();
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < units.size(); ++i)
    if (!ctx.completed.contains(units[i].first)) pending.push_back(i);

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::vector<std::exception_ptr> errors(units.size());
  std::string budgetMessage;

  auto worker = [&] {
    Budget budget = ctx.makeBudget();
    BudgetScope scope(budget);
    for (std::size_t k; !stop && (k = next++) < pending.size();) {
      std::size_t i = pending[k];
      try {
        nlohmann::json v = units[i].second();
        std::lock_guard<std::mutex> lock(mu);
        ctx.completed[units[i].first] = std::move(v);
      } catch (const BudgetExceeded& e) {
        std::lock_guard<std::mutex> lock(mu);
        if (budgetMessage.empty()) budgetMessage = e.what();
        stop = true;
      } catch (...) {
        errors[i] = std::current_exception();
        stop = true;
      }
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(ctx.workers, static_cast<unsigned>(pending.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  if (!budgetMessage.empty()) {
    std::size_t done = 0;
    for (const auto& u : units) done += ctx.completed.contains(u.first);
    throw BudgetExceeded(budgetMessage + " (" + std::to_string(done) + " of " + std::to_string(units.size()) +
                         " units finished)");
  }
  std::vector<nlohmann::json> out;
  for (const auto& u : units) out.push_back(ctx.completed.at(u.first));
  return out;
}

/// dim Ext^2(E, E) = h^2 of the same tensor product whose h^1 is the tangent space.
template <class F>
long long ext2Direct(const Monad<F>& m) {
  auto ch = chernClasses(m);
  if (ch.c1 != 0 && ch.c1 != -1) throw MonadError("Ext^2 needs c1 in {0, -1}");
  auto E = cohomologyBundle(m);
  auto T = ch.c1 == 0 ? tensorModules(E, E) : tensorModules(twist(E, 1), E);
  return sheafCohomology(T, 2, 0);
}

namespace detail {

inline std::string nonnegativeTwists(const std::vector<int>& middle) {
  std::vector<int> nn;
  for (int t : middle)
    if (t >= 0) nn.push_back(t);
  std::sort(nn.begin(), nn.end());
  return multisetString(nn);
}

inline std::string sortedTwists(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return multisetString(v);
}

inline std::string str(long long v) { return std::to_string(v); }

}  // namespace detail

/// Tangent dimensions of the three c2 = 6 bundles.
template <class F>
Report reportTable1(const RingPtr<F>& ring, JobContext& ctx) {
  auto golden = loadGolden(ctx.goldenDir, "table1");
  Report r;
  r.title = "tangent dimensions at stable bundles with c1 = 0, c2 = 6";
  r.golden = "table1.json";
  r.columns = {"row", "fixture", "middle>=0", "right", "c1", "c2", "e", "8c2-3", "ext2"};
  std::vector<Unit> units;
  for (const auto& g : golden.at("rows")) {
    std::string name = g.at("fixture");
    units.push_back({"table1/" + name + "/e", [ring, name] { return tangentDim(fixture(ring, name)); }});
  }
  auto values = runUnits(ctx, units);
  std::size_t i = 0;
  for (const auto& g : golden.at("rows")) {
    std::string name = g.at("fixture");
    auto m = fixture(ring, name);
    auto ch = chernClasses(m);
    long long e = values[i++].template get<long long>();
    std::string row = detail::str(static_cast<long long>(i));
    std::vector<std::string> cells = {row,
                                      name,
                                      detail::nonnegativeTwists(twists(m.middle())),
                                      detail::sortedTwists(twists(m.right())),
                                      detail::str(ch.c1),
                                      detail::str(ch.c2),
                                      detail::str(e),
                                      detail::str(expectedDim(ch)),
                                      detail::str(e - expectedDim(ch))};
    r.expect(row, "middle>=0", g.at("middle"), cells[2]);
    r.expect(row, "right", g.at("right"), cells[3]);
    r.expect(row, "c1", g.at("c1"), cells[4]);
    r.expect(row, "c2", g.at("c2"), cells[5]);
    r.expect(row, "e", g.at("e"), cells[6]);
    r.rows.push_back(std::move(cells));
  }
  r.notes.push_back("ext2 = e - (8c2 - 3)");
  return r;
}

/// The k = 3, a = 3 families: expected and actual dimensions, spectra.
template <class F>
Report reportTable2(const RingPtr<F>& ring, JobContext& ctx) {
  auto golden = loadGolden(ctx.goldenDir, "table2");
  Report r;
  r.title = "families V(3,b,3): dimensions and spectra";
  r.golden = "table2.json";
  r.columns = {"c2", "(a,b,k)", "8c2-3", "dim V", "spectrum>=0", "chi(E)"};
  std::vector<Unit> units;
  for (const auto& g : golden.at("rows")) {
    int a = g.at("a"), b = g.at("b");
    std::string key = "table2/k3(" + std::to_string(a) + "," + std::to_string(b) + ")";
    units.push_back({key + "/spectrum", [ring, a, b] {
                       return spectrum(fixture(ring, "k3", {{"a", a}, {"b", b}})).halfString();
                     }});
    units.push_back({key + "/chi", [ring, a, b] {
                       return eulerCharacteristic(cohomologyBundle(fixture(ring, "k3", {{"a", a}, {"b", b}})), 0);
                     }});
  }
  auto values = runUnits(ctx, units);
  std::size_t i = 0;
  bool labelChecked = false;
  for (const auto& g : golden.at("rows")) {
    int a = g.at("a"), b = g.at("b");
    auto m = fixture(ring, "k3", {{"a", a}, {"b", b}});
    auto ch = chernClasses(m);
    auto dim = familyDimension(a, b, 3);
    std::string spec = values[i++].template get<std::string>();
    long long chi = values[i++].template get<long long>();
    std::string row = detail::str(ch.c2);
    std::vector<std::string> cells = {row,
                                      "(" + std::to_string(a) + "," + std::to_string(b) + ",3)",
                                      detail::str(expectedDim(ch)),
                                      detail::str(dim.value),
                                      spec,
                                      detail::str(chi)};
    r.expect(row, "c2", g.at("c2"), cells[0]);
    r.expect(row, "8c2-3", g.at("expected"), cells[2]);
    r.expect(row, "dim V", g.at("dim"), cells[3]);
    r.expect(row, "spectrum>=0", g.at("chi_column"), cells[4]);
    if (!dim.note().empty()) r.notes.push_back("c2 = " + row + ": dim V " + dim.note());
    if (g.at("chi_column").get<std::string>() == spec && detail::str(chi) != spec) labelChecked = true;
    r.rows.push_back(std::move(cells));
  }
  if (labelChecked)
    r.notes.push_back(
        "the published column headed chi(E) lists the nonnegative half of the spectrum; "
        "the Euler characteristic chi(E) is shown separately");
  return r;
}

/// The c1 = -1, c2 = 6 bundle: tangent dimension 45 and smoothness.
template <class F>
Report reportThm34(const RingPtr<F>& ring, JobContext& ctx) {
  auto golden = loadGolden(ctx.goldenDir, "thm34");
  Report r;
  r.title = "stable bundle with c1 = -1, c2 = 6";
  r.golden = "thm34.json";
  r.columns = {"quantity", "value"};
  auto values = runUnits(ctx, {{"thm34/e", [ring] { return tangentDim(fixture(ring, "thm34")); }},
                               {"thm34/ext2", [ring] { return ext2Direct(fixture(ring, "thm34")); }}});
  auto m = fixture(ring, "thm34");
  auto ch = chernClasses(m);
  long long e = values[0].template get<long long>(), ext2 = values[1].template get<long long>();
  long long bound = golden.at("component_lower_bound");
  r.rows = {{"c1", detail::str(ch.c1)},
            {"c2", detail::str(ch.c2)},
            {"dim Ext^1(E,E)", detail::str(e)},
            {"8c2-3+2c1", detail::str(expectedDim(ch))},
            {"dim Ext^2(E,E)", detail::str(ext2)},
            {"component dimension >=", detail::str(bound)},
            {"verdict", e == bound ? "smooth point, component dimension " + detail::str(e) : "not decided"}};
  r.expect("c1", "value", golden.at("c1"), r.rows[0][1]);
  r.expect("c2", "value", golden.at("c2"), r.rows[1][1]);
  r.expect("dim Ext^1(E,E)", "value", golden.at("e"), r.rows[2][1]);
  if (e - ext2 != expectedDim(ch))
    r.mismatches.push_back({"dim Ext^2(E,E)", "value", detail::str(e - expectedDim(ch)), detail::str(ext2)});
  if (ext2 != 0)
    r.notes.push_back("Ext^2(E,E) is nonzero; smoothness follows from the tangent dimension meeting the lower bound");
  return r;
}

/// family2 against family2-tilde: (e~, e) and dim V + 2a.
template <class F>
Report reportSingular42(const RingPtr<F>& ring, JobContext& ctx, int aMax = 5) {
  auto golden = loadGolden(ctx.goldenDir, "singular42");
  Report r;
  r.title = "family2 against family2-tilde";
  r.golden = "singular42.json";
  r.columns = {"a", "c2", "e~", "e", "e-e~", "dim V", "dim V+2a", "6a^2+8a+2"};
  int a0 = golden.at("a");
  std::vector<Unit> units;
  for (int a = a0; a <= std::max(a0, aMax); ++a) {
    std::string k = "singular42/a=" + std::to_string(a);
    units.push_back({k + "/e", [ring, a] { return tangentDim(fixture(ring, "family2", {{"a", a}})); }});
    units.push_back({k + "/e~", [ring, a] { return tangentDim(fixture(ring, "family2-tilde", {{"a", a}})); }});
  }
  auto values = runUnits(ctx, units);
  for (std::size_t i = 0; i < values.size(); i += 2) {
    int a = a0 + static_cast<int>(i / 2);
    long long e = values[i].template get<long long>(), et = values[i + 1].template get<long long>();
    long long dimV = familyDim(a, 1, 2), closed = 6LL * a * a + 8LL * a + 2;
    std::string row = "a=" + std::to_string(a);
    r.rows.push_back({detail::str(a), detail::str(familyC2(a, 1, 2)), detail::str(et), detail::str(e),
                      detail::str(e - et), detail::str(dimV), detail::str(dimV + 2 * a), detail::str(closed)});
    if (a == a0) {
      r.expect(row, "e~", golden.at("e_tilde"), detail::str(et));
      r.expect(row, "e", golden.at("e"), detail::str(e));
      r.notes.push_back("(e~, e) = (" + detail::str(et) + ", " + detail::str(e) + ")");
      if (dimV + 2 * a != e)
        r.notes.push_back("a = " + std::to_string(a) + ": e = " + detail::str(e) + " != 6a^2+8a+2 = " + detail::str(closed) +
                          ", so dim V + 2a = e only from a = " + std::to_string(a + 1) + " on");
    } else {
      r.expect(row, "e-e~", golden.at("difference_above"), detail::str(e - et));
      r.expect(row, "e", detail::str(dimV + 2 * a), detail::str(e));
    }
  }
  return r;
}

/// Known components of B(0, c2); Ein lists are checked where expected values exist.
inline Report reportCensus(long long c2, JobContext& ctx) {
  auto golden = loadGolden(ctx.goldenDir, "census");
  Report r;
  r.title = "known components of B(0," + std::to_string(c2) + ")";
  r.columns = {"component", "dimension", "note"};
  std::vector<std::string> ein, mod;
  for (const auto& d : census(c2)) {
    std::string note;
    if (auto q = std::get_if<ModInstantonParams>(&d.kind)) {
      mod.push_back(q->toString());
      if (q->u <= 4) note = "u <= 4: sweeps use 8c2-3 = " + std::to_string(instantonDim(c2));
    }
    if (auto p = std::get_if<EinParams>(&d.kind)) ein.push_back(p->toString());
    if (auto f = std::get_if<ComponentDescriptor::FamilyV>(&d.kind)) note = familyDimension(f->a, f->b, f->k).note();
    r.rows.push_back({d.name(), detail::str(d.dimension()), note});
  }
  std::string key = std::to_string(c2);
  const auto& einG = golden.at("ein");
  if (einG.contains(key)) {
    r.golden = "census.json";
    std::string want;
    for (const auto& s : einG.at(key)) want += (want.empty() ? "" : " ") + s.get<std::string>();
    std::string got;
    for (const auto& s : ein) got += (got.empty() ? "" : " ") + s;
    r.expect("c2=" + key, "ein", want.empty() ? "none" : want, got.empty() ? "none" : got);
  }
  const auto& noMod = golden.at("no_modified_instanton");
  if (std::find(noMod.begin(), noMod.end(), c2) != noMod.end() && !mod.empty())
    r.notes.push_back("expected no modified instanton components for this c2; the admissibility rule in use admits " +
                      std::to_string(mod.size()) + ", all with u <= 4");
  return r;
}

/// Dominance sweep, checked against expected violation counts where they exist.
inline Report reportSweep(int k, int b, int aMin, int aMax, JobContext& ctx) {
  auto golden = loadGolden(ctx.goldenDir, "sweeps");
  auto s = dominanceSweep(k, b, aMin, aMax);
  Report r;
  r.title = "";
  r.text = s.toText();
  r.tsv = s.toTsv();
  for (const auto& g : golden.at("sweeps"))
    if (g.at("k") == k && g.at("b") == b && g.at("a_min") == aMin && g.at("a_max") == aMax) {
      r.golden = "sweeps.json";
      r.expect("all", "violations", g.at("violations"), detail::str(static_cast<long long>(s.violations())));
    }
  if (r.golden.empty() && s.violations() > 0)
    r.mismatches.push_back({"all", "violations", "0", detail::str(static_cast<long long>(s.violations()))});
  return r;
}

}  // namespace monadlab
