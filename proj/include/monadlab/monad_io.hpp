#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "monad.hpp"
#include "parse.hpp"

namespace monadlab {

/// Malformed or ill-typed monad file. line and column are 1-based; 0 when unknown.
class MonadFileError : public std::runtime_error {
public:
  MonadFileError(const std::string& msg, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(line ? std::to_string(line) + ":" + std::to_string(column) + ": " + msg : msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_, column_;
};

/// Coefficient field named in a file or on the command line.
struct FieldSpec {
  enum class Kind { QQ, Fp } kind = Kind::Fp;
  std::uint32_t p = 32003;

  /// "qq", "fp" or "fp:P", case-insensitive.
  static FieldSpec parse(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    FieldSpec f;
    if (s == "qq") {
      f.kind = Kind::QQ;
      return f;
    }
    if (s == "fp") return f;
    if (s.rfind("fp:", 0) == 0) {
      std::string num = s.substr(3);
      if (num.empty() || num.size() > 10 || num.find_first_not_of("0123456789") != std::string::npos)
        throw MonadFileError("bad field '" + s + "': expected fp:P with P a prime");
      unsigned long long p = std::stoull(num);
      if (p >= (1ull << 31) || !isPrime(static_cast<std::uint32_t>(p)))
        throw MonadFileError("p = " + num + " is not a prime below 2^31");
      f.p = static_cast<std::uint32_t>(p);
      return f;
    }
    throw MonadFileError("bad field '" + s + "': expected qq or fp:P");
  }
  std::string toString() const { return kind == Kind::QQ ? "qq" : "fp:" + std::to_string(p); }
  bool operator==(const FieldSpec&) const = default;
};

/// A monad file before its entries are turned into polynomials.
struct MonadDocument {
  FieldSpec field;
  std::vector<int> left, middle, right;  // generator degrees
  std::vector<std::vector<std::string>> alpha, beta;
  /// JSON pointer ("/beta/1/4") -> (line, column) of the value.
  std::map<std::string, std::pair<std::size_t, std::size_t>> positions;

  std::pair<std::size_t, std::size_t> where(const std::string& pointer) const {
    auto it = positions.find(pointer);
    return it == positions.end() ? std::pair<std::size_t, std::size_t>{0, 0} : it->second;
  }
};

namespace detail {

inline std::pair<std::size_t, std::size_t> lineColumn(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Forward iterator that counts how far the JSON lexer has read.
struct CountingIterator {
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  const char* p = nullptr;
  std::size_t* count = nullptr;

  reference operator*() const { return *p; }
  CountingIterator& operator++() {
    ++p;
    ++*count;
    return *this;
  }
  CountingIterator operator++(int) {
    auto old = *this;
    ++*this;
    return old;
  }
  bool operator==(const CountingIterator& o) const { return p == o.p; }
  bool operator!=(const CountingIterator& o) const { return p != o.p; }
};

// Records the start offset of every value, keyed by JSON pointer.
class PositionRecorder : public nlohmann::json_sax<nlohmann::json> {
public:
  PositionRecorder(std::string_view text, const std::size_t* consumed) : text_(text), consumed_(consumed) {}

  std::map<std::string, std::size_t> offsets;

  bool null() override { return scalar(scalarStart()); }
  bool boolean(bool) override { return scalar(scalarStart()); }
  bool number_integer(number_integer_t) override { return scalar(scalarStart()); }
  bool number_unsigned(number_unsigned_t) override { return scalar(scalarStart()); }
  bool number_float(number_float_t, const string_t&) override { return scalar(scalarStart()); }
  bool string(string_t&) override { return scalar(stringStart()); }
  bool binary(binary_t&) override { return scalar(scalarStart()); }
  bool start_object(std::size_t) override { return open(false); }
  bool key(string_t& k) override {
    frames_.back().key = k;
    return true;
  }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override { return open(true); }
  bool end_array() override { return close(); }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

private:
  struct Frame {
    bool array;
    std::size_t index = 0;
    std::string key;
  };

  std::string pointer() const {
    std::string s;
    for (const auto& f : frames_) s += "/" + (f.array ? std::to_string(f.index) : f.key);
    return s;
  }
  void advance() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }
  bool scalar(std::size_t start) {
    offsets[pointer()] = start;
    advance();
    return true;
  }
  bool open(bool array) {
    offsets[pointer()] = *consumed_ ? *consumed_ - 1 : 0;
    frames_.push_back({array, 0, {}});
    return true;
  }
  bool close() {
    frames_.pop_back();
    advance();
    return true;
  }
  // The lexer has just read the closing quote.
  std::size_t stringStart() const {
    std::size_t i = *consumed_ ? *consumed_ - 1 : 0;
    while (i > 0) {
      --i;
      if (text_[i] == '"') {
        std::size_t bs = 0;
        while (i >= bs + 1 && text_[i - bs - 1] == '\\') ++bs;
        if (bs % 2 == 0) return i;
      }
    }
    return 0;
  }
  // The lexer may have read one character past the token.
  std::size_t scalarStart() const {
    auto tokenChar = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.'; };
    std::size_t i = std::min(*consumed_, text_.size());
    while (i > 0 && !tokenChar(text_[i - 1])) --i;
    while (i > 0 && tokenChar(text_[i - 1])) --i;
    return i;
  }

  std::string_view text_;
  const std::size_t* consumed_;
  std::vector<Frame> frames_;
};

inline std::vector<int> degreeList(const nlohmann::json& j, const std::string& key, const MonadDocument& doc) {
  auto [l, c] = doc.where("/" + key);
  if (!j.contains(key)) throw MonadFileError("missing field '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_array()) throw MonadFileError("'" + key + "' must be a list of integers", l, c);
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer()) {
      auto [li, ci] = doc.where("/" + key + "/" + std::to_string(i));
      throw MonadFileError("'" + key + "' entry " + std::to_string(i + 1) + " is not an integer", li, ci);
    }
    out.push_back(v[i].get<int>());
  }
  return out;
}

inline std::vector<std::vector<std::string>> stringMatrix(const nlohmann::json& j, const std::string& key,
                                                          std::size_t nrows, std::size_t ncols,
                                                          const MonadDocument& doc) {
  auto [l, c] = doc.where("/" + key);
  if (!j.contains(key)) throw MonadFileError("missing field '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != nrows)
    throw MonadFileError("'" + key + "' must have " + std::to_string(nrows) + " rows", l, c);
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < nrows; ++i) {
    std::string rp = "/" + key + "/" + std::to_string(i);
    auto [lr, cr] = doc.where(rp);
    if (!v[i].is_array() || v[i].size() != ncols)
      throw MonadFileError("row " + std::to_string(i + 1) + " of '" + key + "' must have " + std::to_string(ncols) +
                               " entries",
                           lr, cr);
    out.emplace_back();
    for (std::size_t k = 0; k < ncols; ++k) {
      if (!v[i][k].is_string()) {
        auto [le, ce] = doc.where(rp + "/" + std::to_string(k));
        throw MonadFileError("entry (" + std::to_string(i + 1) + "," + std::to_string(k + 1) + ") of '" + key +
                                 "' must be a polynomial string",
                             le, ce);
      }
      out.back().push_back(v[i][k].get<std::string>());
    }
  }
  return out;
}

template <class F>
GradedMap<F> buildMap(const RingPtr<F>& ring, const MonadDocument& doc, const std::string& key,
                      const std::vector<std::vector<std::string>>& m, const GradedFree& src, const GradedFree& tgt) {
  std::vector<std::vector<Poly<F>>> rows(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t k = 0; k < m[i].size(); ++k) {
      auto [l, c] = doc.where("/" + key + "/" + std::to_string(i) + "/" + std::to_string(k));
      std::string cell = key + " entry (" + std::to_string(i + 1) + "," + std::to_string(k + 1) + ")";
      Poly<F> p(ring);
      try {
        p = parsePoly(m[i][k], ring);
      } catch (const ParseError& e) {
        // the column of a character inside a string without escapes
        throw MonadFileError(cell + ": " + e.message(), l, c ? c + 1 + e.position() : 0);
      } catch (const std::exception& e) {
        throw MonadFileError(cell + ": " + e.what(), l, c);
      }
      if (p.isZero()) {
        rows[i].push_back(std::move(p));
        continue;
      }
      auto hd = p.homogeneousDegree();
      int want = src.degree(k) - tgt.degree(i);
      if (!hd.isHomogeneous())
        throw MonadFileError(cell + " '" + m[i][k] + "' is not homogeneous", l, c);
      if (hd.degree != want)
        throw MonadFileError(cell + " '" + m[i][k] + "' has degree " + std::to_string(hd.degree) + ", expected " +
                                 std::to_string(want),
                             l, c);
      rows[i].push_back(std::move(p));
    }
  return makeMap(ring, src, tgt, rows);
}

inline std::string jsonString(const std::string& s) { return nlohmann::json(s).dump(); }

inline std::string intList(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}

}  // namespace detail

/// Parses the JSON text and checks its shape; polynomials stay unparsed.
inline MonadDocument parseMonadDocument(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    auto [l, c] = detail::lineColumn(text, e.byte ? e.byte - 1 : 0);
    std::string what = e.what();
    auto cut = what.find(": ", what.find("column"));
    throw MonadFileError(cut == std::string::npos ? what : what.substr(cut + 2), l, c);
  }

  MonadDocument doc;
  std::size_t consumed = 0;
  detail::PositionRecorder rec(text, &consumed);
  detail::CountingIterator first{text.data(), &consumed}, last{text.data() + text.size(), &consumed};
  nlohmann::json::sax_parse(first, last, &rec);
  for (const auto& [ptr, off] : rec.offsets) doc.positions[ptr] = detail::lineColumn(text, off);

  if (!j.is_object()) throw MonadFileError("top level must be an object", 1, 1);

  if (!j.contains("ring") || !j["ring"].is_object()) throw MonadFileError("missing object 'ring'");
  const auto& ring = j["ring"];
  auto [lf, cf] = doc.where("/ring/field");
  if (!ring.contains("field") || !ring["field"].is_string()) throw MonadFileError("missing string 'ring.field'");
  std::string field = ring["field"].get<std::string>();
  if (field == "QQ") {
    doc.field.kind = FieldSpec::Kind::QQ;
  } else if (field == "Fp") {
    doc.field.kind = FieldSpec::Kind::Fp;
    auto [lp, cp] = doc.where("/ring/p");
    if (!ring.contains("p") || !ring["p"].is_number_unsigned()) throw MonadFileError("Fp needs a positive integer 'p'", lf, cf);
    auto p = ring["p"].get<unsigned long long>();
    if (p >= (1ull << 31) || !isPrime(static_cast<std::uint32_t>(p)))
      throw MonadFileError("p = " + std::to_string(p) + " is not prime", lp, cp);
    doc.field.p = static_cast<std::uint32_t>(p);
  } else {
    throw MonadFileError("ring.field must be \"QQ\" or \"Fp\"", lf, cf);
  }

  auto [lv, cv] = doc.where("/variables");
  if (!j.contains("variables")) throw MonadFileError("missing field 'variables'");
  if (j["variables"] != nlohmann::json({"x", "y", "z", "w"}))
    throw MonadFileError("variables must be [\"x\", \"y\", \"z\", \"w\"]", lv, cv);

  doc.left = detail::degreeList(j, "left", doc);
  doc.middle = detail::degreeList(j, "middle", doc);
  doc.right = detail::degreeList(j, "right", doc);
  doc.alpha = detail::stringMatrix(j, "alpha", doc.middle.size(), doc.left.size(), doc);
  doc.beta = detail::stringMatrix(j, "beta", doc.right.size(), doc.middle.size(), doc);
  return doc;
}

/// Builds the monad over the given ring, which may differ from the file's field.
template <class F>
Monad<F> buildMonad(const MonadDocument& doc, const RingPtr<F>& ring) {
  GradedFree L(doc.left), M(doc.middle), R(doc.right);
  auto alpha = detail::buildMap(ring, doc, "alpha", doc.alpha, L, M);
  auto beta = detail::buildMap(ring, doc, "beta", doc.beta, M, R);
  return makeMonad(std::move(alpha), std::move(beta));
}

template <class F>
FieldSpec fieldSpecOf(const F& field) {
  FieldSpec f;
  if constexpr (std::is_same_v<F, QQ>) {
    f.kind = FieldSpec::Kind::QQ;
  } else {
    f.p = field.characteristic();
  }
  return f;
}

/// Canonical text: one matrix row per line.
template <class F>
std::string storeMonadText(const Monad<F>& m) {
  FieldSpec fs = fieldSpecOf(m.ring()->field);
  std::ostringstream os;
  os << "{\n  \"ring\": {\"field\": " << (fs.kind == FieldSpec::Kind::QQ ? "\"QQ\"" : "\"Fp\", \"p\": " + std::to_string(fs.p))
     << "},\n";
  os << "  \"variables\": [\"x\", \"y\", \"z\", \"w\"],\n";
  os << "  \"left\": " << detail::intList(m.left().degrees) << ",\n";
  os << "  \"middle\": " << detail::intList(m.middle().degrees) << ",\n";
  os << "  \"right\": " << detail::intList(m.right().degrees) << ",\n";
  auto matrix = [&](const char* key, const GradedMap<F>& g, bool last) {
    os << "  \"" << key << "\": [";
    for (std::size_t i = 0; i < g.target().rank(); ++i) {
      os << (i ? ",\n    [" : "\n    [");
      for (std::size_t k = 0; k < g.source().rank(); ++k)
        os << (k ? ", " : "") << detail::jsonString(g.entry(i, k).toString());
      os << "]";
    }
    os << "\n  ]" << (last ? "\n" : ",\n");
  };
  matrix("alpha", m.alpha, false);
  matrix("beta", m.beta, true);
  os << "}\n";
  return os.str();
}

inline std::string readTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MonadFileError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

template <class F>
Monad<F> loadMonad(const std::string& path, const RingPtr<F>& ring) {
  return buildMonad(parseMonadDocument(readTextFile(path)), ring);
}

/// Writes to path.tmp and renames, so readers never see a partial file.
template <class F>
void storeMonad(const Monad<F>& m, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw MonadFileError("cannot write " + path);
    out << storeMonadText(m);
    if (!out) throw MonadFileError("write failed for " + path);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw MonadFileError("cannot rename " + tmp + " to " + path);
}

}  // namespace monadlab
