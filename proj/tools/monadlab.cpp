#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "monadlab/monad_io.hpp"
#include "monadlab/reports.hpp"

#ifndef MONADLAB_GOLDEN_DIR
#define MONADLAB_GOLDEN_DIR "golden"
#endif

namespace {

using namespace monadlab;
using nlohmann::json;

enum Exit { kOk = 0, kFailed = 1, kInput = 2, kBudget = 3 };

class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct Options {
  std::string command;
  std::string file, fixtureName;
  std::optional<int> a, b;
  std::string field;
  std::string format = "text";
  double budget = 1800;
  long long steps = 0;
  unsigned workers = 1;
  std::string checkpointDir = ".";
  std::string resume;
  std::string goldenDir;
  bool noStability = false;
  std::optional<long long> componentDim;
  // compute
  std::string what;
  int i = 1, d = 0;
  // report
  std::string which;
  long long c2 = 0;
  int k = 2, sweepB = 0, aMin = 3, aMax = 30;
  // fixture
  std::string output;
  // batch
  std::string batchFile;
};

FieldSpec resolveField(const Options& o, const std::optional<FieldSpec>& fromFile) {
  if (!o.field.empty()) return FieldSpec::parse(o.field);
  if (const char* env = std::getenv("MONADLAB_FIELD"); env && *env) return FieldSpec::parse(env);
  if (fromFile) return *fromFile;
  return FieldSpec{};
}

template <class Fn>
int withField(const FieldSpec& fs, Fn&& fn) {
  if (fs.kind == FieldSpec::Kind::QQ) return fn(makeRing<QQ>());
  return fn(makeRing<Fp>(Fp(fs.p)));
}

FixtureParams fixtureParams(const Options& o) {
  FixtureParams p;
  if (o.a) p["a"] = *o.a;
  if (o.b) p["b"] = *o.b;
  return p;
}

/// Identity of a job for checkpoints: everything that changes the result.
std::string jobKey(const Options& o) {
  const char* env = std::getenv("MONADLAB_FIELD");
  std::string field = !o.field.empty()        ? FieldSpec::parse(o.field).toString()
                      : env && *env           ? FieldSpec::parse(env).toString()
                      : o.file.empty()        ? FieldSpec{}.toString()
                                              : std::string("file");
  std::ostringstream os;
  os << o.command << "|file=" << o.file << "|fixture=" << o.fixtureName << "|a=" << (o.a ? std::to_string(*o.a) : "")
     << "|b=" << (o.b ? std::to_string(*o.b) : "") << "|field=" << field << "|what=" << o.what
     << "|i=" << o.i << "|d=" << o.d << "|which=" << o.which << "|c2=" << o.c2 << "|k=" << o.k
     << "|sb=" << o.sweepB << "|amin=" << o.aMin << "|amax=" << o.aMax;
  return os.str();
}

std::string checkpointPath(const Options& o, const std::string& key) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : key) h = (h ^ c) * 1099511628211ull;
  std::ostringstream os;
  os << o.checkpointDir << "/monadlab-" << std::hex << std::setw(16) << std::setfill('0') << h << ".checkpoint.json";
  return os.str();
}

void writeAtomically(const std::string& path, const std::string& text) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path);
    out << text;
    if (!out) throw InputError("write failed for " + path);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw InputError("cannot rename " + tmp + " to " + path);
}

/// Seeds ctx.completed from --resume after checking that the job matches.
void loadCheckpoint(const Options& o, const std::string& key, JobContext& ctx) {
  if (o.resume.empty()) return;
  json j;
  try {
    j = json::parse(readTextFile(o.resume));
  } catch (const json::exception& e) {
    throw InputError("bad checkpoint " + o.resume + ": " + e.what());
  }
  if (!j.contains("job") || j["job"] != key)
    throw InputError("checkpoint " + o.resume + " belongs to a different job");
  ctx.completed = j.value("completed", json::object());
}

int budgetExhausted(const Options& o, const std::string& key, const JobContext& ctx, const std::string& msg,
                    std::ostream& out, std::ostream& err) {
  std::string path = o.resume.empty() ? checkpointPath(o, key) : o.resume;
  json j = {{"job", key}, {"reason", msg}, {"completed", ctx.completed}};
  try {
    writeAtomically(path, j.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: budget exhausted and the checkpoint could not be written: " << e.what() << "\n";
    return kBudget;
  }
  err << "budget exhausted: " << msg << "\n";
  out << "checkpoint: " << path << "\n";
  err << "rerun the same command with --resume " << path << " and a larger --budget to continue\n";
  return kBudget;
}

std::string describeInput(const Options& o) {
  if (!o.file.empty()) return o.file;
  std::string s = "fixture " + o.fixtureName;
  if (o.a) s += " a=" + std::to_string(*o.a);
  if (o.b) s += " b=" + std::to_string(*o.b);
  return s;
}

template <class F>
Monad<F> loadInput(const Options& o, const std::optional<MonadDocument>& doc, const RingPtr<F>& ring,
                   std::ostream& err) {
  if (doc) return buildMonad(*doc, ring);
  auto m = fixture(ring, o.fixtureName, fixtureParams(o));
  if (!fixtureWarning().empty()) err << "warning: " << fixtureWarning() << "\n";
  return m;
}

/// Runs fn with the input monad over the resolved field.
template <class Fn>
int withInput(const Options& o, Fn&& fn) {
  std::optional<MonadDocument> doc;
  if (!o.file.empty() && !o.fixtureName.empty()) throw InputError("give either a monad file or --fixture, not both");
  if (o.file.empty() && o.fixtureName.empty()) throw InputError("no input: give a monad file or --fixture NAME");
  if (!o.file.empty()) doc = parseMonadDocument(readTextFile(o.file));
  FieldSpec fs = resolveField(o, doc ? std::optional<FieldSpec>(doc->field) : std::nullopt);
  return withField(fs, [&](auto ring) { return fn(ring, doc, fs); });
}

std::string yn(bool b) { return b ? "yes" : "no"; }

int cmdValidate(const Options& o, JobContext& ctx, std::ostream& out, std::ostream& err) {
  return withInput(o, [&](auto ring, const auto& doc, const FieldSpec& fs) {
    auto m = loadInput(o, doc, ring, err);
    ctx.start();
    Budget budget = ctx.makeBudget();
    BudgetScope scope(budget);
    auto rep = validateMonad(m, !o.noStability);
    std::string type = "left " + multisetString(twists(m.left())) + "; middle " +
                       multisetString(twists(m.middle())) + "; right " + multisetString(twists(m.right()));
    std::string chern = rep.compositionZero ? [&] {
      auto ch = chernClasses(m);
      return "(" + std::to_string(ch.c1) + "," + std::to_string(ch.c2) + ")";
    }()
                                            : std::string("-");
    if (o.format == "tsv") {
      out << "check\tvalue\n"
          << "input\t" << describeInput(o) << "\n"
          << "field\t" << fs.toString() << "\n"
          << "composition_zero\t" << yn(rep.compositionZero) << "\n"
          << "homogeneous\t" << yn(rep.homogeneous) << "\n"
          << "alpha_injective\t" << yn(rep.fiberInjective) << "\n"
          << "beta_surjective\t" << yn(rep.fiberSurjective) << "\n"
          << "minimal\t" << yn(rep.minimal) << "\n";
      if (rep.stable) out << "stable\t" << yn(*rep.stable) << "\n";
      out << "chern\t" << chern << "\n"
          << "valid\t" << yn(rep.ok()) << "\n";
    } else {
      out << "input: " << describeInput(o) << "\n"
          << "field: " << fs.toString() << "\n"
          << "type:  " << type << "\n"
          << "(c1,c2): " << chern << "\n"
          << rep.toString() << (rep.ok() ? "valid\n" : "invalid\n");
    }
    return rep.ok() ? kOk : kFailed;
  });
}

std::optional<long long> knownComponentDim(const Options& o) {
  if (o.componentDim) return o.componentDim;
  if (o.fixtureName == "thm34") return loadGolden(o.goldenDir, "thm34").at("component_lower_bound").get<long long>();
  return std::nullopt;
}

int cmdCompute(const Options& o, JobContext& ctx, std::ostream& out, std::ostream& err) {
  return withInput(o, [&](auto ring, const auto& doc, const FieldSpec&) {
    auto m = loadInput(o, doc, ring, err);
    auto single = [&](const std::string& key, std::function<json()> fn) { return runUnits(ctx, {{key, fn}})[0]; };
    bool tsv = o.format == "tsv";
    if (o.what == "chern") {
      auto ch = chernClasses(m);
      if (tsv)
        out << "c1\tc2\n" << ch.c1 << "\t" << ch.c2 << "\n";
      else
        out << "(c1,c2) = (" << ch.c1 << "," << ch.c2 << ")\n";
      return kOk;
    }
    if (o.what == "tangent") {
      long long e = single("tangent", [&] { return tangentDim(m); }).template get<long long>();
      auto ch = chernClasses(m);
      long long ext2 = ext2Dim(e, ch);
      auto bound = knownComponentDim(o);
      std::string verdict = ext2 == 0                 ? "smooth point"
                            : bound && *bound == e    ? "smooth point"
                            : bound && *bound > e     ? "tangent below the component dimension"
                                                      : "smoothness not decided";
      if (tsv) {
        out << "tangent\text2\tverdict\n" << e << "\t" << ext2 << "\t" << verdict << "\n";
      } else {
        out << e << " (ext2 = " << ext2 << ", " << verdict << ")\n";
        if (ext2 != 0 && bound && *bound == e)
          out << "note: ext2 > 0; the tangent dimension equals the component dimension " << *bound << "\n";
      }
      return kOk;
    }
    if (o.what == "spectrum") {
      std::string s = single("spectrum", [&] { return spectrum(m).toString(); }).template get<std::string>();
      out << (tsv ? "spectrum\n" : "") << s << "\n";
      return kOk;
    }
    if (o.what == "euler") {
      long long chi =
          single("euler/" + std::to_string(o.d), [&] { return eulerCharacteristic(cohomologyBundle(m), o.d); })
              .template get<long long>();
      if (tsv)
        out << "d\tchi\n" << o.d << "\t" << chi << "\n";
      else
        out << "chi(E(" << o.d << ")) = " << chi << "\n";
      return kOk;
    }
    // cohomology
    long long h = single("h" + std::to_string(o.i) + "/" + std::to_string(o.d),
                         [&] { return sheafCohomology(cohomologyBundle(m), o.i, o.d); })
                      .template get<long long>();
    if (tsv)
      out << "i\td\th\n" << o.i << "\t" << o.d << "\t" << h << "\n";
    else
      out << "h^" << o.i << "(E(" << o.d << ")) = " << h << "\n";
    return kOk;
  });
}

int cmdReport(const Options& o, JobContext& ctx, std::ostream& out) {
  Report r;
  if (o.which == "census") {
    if (o.c2 < 1) throw InputError("census needs --c2 N with N >= 1");
    r = reportCensus(o.c2, ctx);
  } else if (o.which == "sweep") {
    if (o.k < 2 || o.k > 4) throw InputError("sweep needs --k in 2..4");
    if (o.sweepB < 0 || o.sweepB >= o.k) throw InputError("sweep needs 0 <= --b < --k");
    r = reportSweep(o.k, o.sweepB, o.aMin, o.aMax, ctx);
  } else {
    FieldSpec fs = resolveField(o, std::nullopt);
    withField(fs, [&](auto ring) {
      if (o.which == "table1") r = reportTable1(ring, ctx);
      if (o.which == "table2") r = reportTable2(ring, ctx);
      if (o.which == "thm34") r = reportThm34(ring, ctx);
      if (o.which == "singular42") r = reportSingular42(ring, ctx, o.a.value_or(5));
      return 0;
    });
  }
  out << (o.format == "tsv" ? r.toTsv() : r.toText());
  return r.ok() ? kOk : kFailed;
}

int cmdFixture(const Options& o, std::ostream& out, std::ostream& err) {
  FieldSpec fs = resolveField(o, std::nullopt);
  return withField(fs, [&](auto ring) {
    auto m = fixture(ring, o.fixtureName, fixtureParams(o));
    if (!fixtureWarning().empty()) err << "warning: " << fixtureWarning() << "\n";
    if (o.output.empty() || o.output == "-") {
      out << storeMonadText(m);
    } else {
      storeMonad(m, o.output);
      out << "wrote " << o.output << "\n";
    }
    return static_cast<int>(kOk);
  });
}

int runCommandLine(std::vector<std::string> args, std::ostream& out, std::ostream& err);

std::vector<std::string> splitWords(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> w;
  for (std::string t; is >> t;) w.push_back(t);
  return w;
}

/// Each line "OUTPUT: ARGS..." runs one job; its standard output goes to OUTPUT.
int cmdBatch(const Options& o, std::ostream& out, std::ostream& err) {
  std::ifstream in(o.batchFile);
  if (!in) throw InputError("cannot open batch file " + o.batchFile);
  struct Job {
    std::size_t line;
    std::string output;
    std::vector<std::string> args;
    int code = 0;
    std::string log;
  };
  std::vector<Job> jobs;
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) {
    ++n;
    auto words = splitWords(line);
    if (words.empty() || words[0][0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw InputError(o.batchFile + ":" + std::to_string(n) + ": expected OUTPUT: ARGS");
    auto outWords = splitWords(line.substr(0, colon));
    if (outWords.size() != 1) throw InputError(o.batchFile + ":" + std::to_string(n) + ": expected one output path");
    jobs.push_back({n, outWords[0], splitWords(line.substr(colon + 1)), 0, ""});
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j; (j = next++) < jobs.size();) {
      std::ostringstream jo, je;
      jobs[j].code = runCommandLine(jobs[j].args, jo, je);
      try {
        writeAtomically(jobs[j].output, jo.str());
      } catch (const std::exception& e) {
        je << "error: " << e.what() << "\n";
        jobs[j].code = std::max(jobs[j].code, static_cast<int>(kInput));
      }
      jobs[j].log = je.str();
    }
  };
  std::vector<std::thread> pool;
  unsigned w = std::max(1u, std::min<unsigned>(o.workers, static_cast<unsigned>(jobs.size())));
  for (unsigned t = 0; t < w; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  int code = kOk;
  for (const auto& j : jobs) {
    out << j.output << "\texit " << j.code << "\n";
    std::istringstream log(j.log);
    for (std::string l; std::getline(log, l);) err << o.batchFile << ":" << j.line << ": " << l << "\n";
    code = std::max(code, j.code);
  }
  return code;
}

int runCommandLine(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"monadlab: monads of rank 2 bundles on P^3, their cohomology and moduli components"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--field", o.field, "coefficient field: qq or fp:P (default fp:32003, or MONADLAB_FIELD)");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "tsv"}));
  app.add_option("--budget", o.budget, "time budget per job in seconds, 0 for none")->check(CLI::NonNegativeNumber);
  app.add_option("--max-steps", o.steps, "step budget per computation, 0 for none")->check(CLI::NonNegativeNumber);
  app.add_option("--workers", o.workers, "parallel workers for reports and batches")->check(CLI::Range(1u, 256u));
  app.add_option("--checkpoint-dir", o.checkpointDir, "where budget checkpoints are written");
  app.add_option("--resume", o.resume, "checkpoint written by an earlier run of the same job");
  app.add_option("--golden", o.goldenDir, "directory of expected values")->default_str(MONADLAB_GOLDEN_DIR);

  auto input = [&](CLI::App* sc) {
    sc->add_option("file", o.file, "monad file");
    sc->add_option("--fixture", o.fixtureName, "bundled fixture instead of a file");
    sc->add_option("--a", o.a, "fixture parameter a");
    sc->add_option("--b", o.b, "fixture parameter b");
  };
  auto* validate = app.add_subcommand("validate", "check that a monad defines a stable rank 2 bundle");
  input(validate);
  validate->add_flag("--no-stability", o.noStability, "skip the stability check");

  auto* compute = app.add_subcommand("compute", "compute an invariant of the cohomology bundle");
  input(compute);
  compute->add_option("--what", o.what, "quantity")
      ->required()
      ->check(CLI::IsMember({"tangent", "spectrum", "chern", "euler", "cohomology"}));
  compute->add_option("--i", o.i, "cohomology index")->check(CLI::Range(0, 3));
  compute->add_option("--d", o.d, "twist");
  compute->add_option("--component-dim", o.componentDim, "known dimension of the component, for the smoothness verdict");

  auto* report = app.add_subcommand("report", "regenerate a published table and diff it against expected values");
  report->add_option("--which", o.which, "report")
      ->required()
      ->check(CLI::IsMember({"table1", "table2", "thm34", "singular42", "census", "sweep"}));
  report->add_option("--c2", o.c2, "second Chern class for census");
  report->add_option("--k", o.k, "sweep family k");
  report->add_option("--b", o.sweepB, "sweep family b");
  report->add_option("--a-min", o.aMin, "sweep start");
  report->add_option("--a-max", o.aMax, "sweep end");
  report->add_option("--a", o.a, "largest a for singular42 (default 5)");

  auto* fix = app.add_subcommand("fixture", "write a bundled fixture as a monad file");
  fix->add_option("--name", o.fixtureName, "fixture name")->required()->check(CLI::IsMember(fixtureNames()));
  fix->add_option("--a", o.a, "parameter a");
  fix->add_option("--b", o.b, "parameter b");
  fix->add_option("-o,--output", o.output, "output file, - for standard output");

  auto* batch = app.add_subcommand("batch", "run the jobs listed in a file, one 'OUTPUT: ARGS' per line");
  batch->add_option("file", o.batchFile, "batch file")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e, out, err);
    return r == 0 ? kOk : kInput;
  }
  o.command = app.get_subcommands().front()->get_name();
  if (o.goldenDir.empty()) o.goldenDir = MONADLAB_GOLDEN_DIR;

  JobContext ctx;
  ctx.budgetSeconds = o.budget;
  ctx.maxSteps = o.steps;
  ctx.workers = o.workers;
  ctx.goldenDir = o.goldenDir;
  std::string key;
  try {
    if (o.command == "batch") return cmdBatch(o, out, err);
    if (o.command == "fixture") return cmdFixture(o, out, err);
    key = jobKey(o);
    loadCheckpoint(o, key, ctx);
    if (o.command == "validate") return cmdValidate(o, ctx, out, err);
    if (o.command == "compute") return cmdCompute(o, ctx, out, err);
    return cmdReport(o, ctx, out);
  } catch (const BudgetExceeded& e) {
    return budgetExhausted(o, key, ctx, e.what(), out, err);
  } catch (const MonadFileError& e) {
    err << "error: " << (o.file.empty() ? "" : o.file + ":") << e.what() << "\n";
    return kInput;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const FixtureError& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const GoldenError& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const FieldError& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    return kFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return runCommandLine(std::move(args), std::cout, std::cerr);
}
