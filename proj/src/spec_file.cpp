#include "aq/spec_file.hpp"

#include "aq/parse.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <tuple>

namespace aq {

using nlohmann::ordered_json;

namespace {

std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

class Reader {
public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& where, const std::string& msg) const {
    throw SpecError(origin_ + ": " + where + ": " + msg);
  }

  const ordered_json& field(const ordered_json& obj, const char* key, const std::string& where) const {
    if (!obj.is_object()) fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing key `") + key + "`");
    return *it;
  }

  std::size_t index(const ordered_json& v, std::size_t bound, const std::string& where) const {
    if (!v.is_number_integer()) fail(where, "expected an integer index");
    const auto i = v.get<long long>();
    if (i < 1 || static_cast<std::size_t>(i) > bound)
      fail(where, "index " + std::to_string(i) + " out of range 1.." + std::to_string(bound));
    return static_cast<std::size_t>(i - 1);
  }

  std::size_t count(const ordered_json& v, const std::string& where) const {
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(where, "expected a nonnegative integer");
    return static_cast<std::size_t>(v.get<long long>());
  }

  PolyFn expr(const ordered_json& v, const ChartPtr& chart, const std::string& where) const {
    if (v.is_number_integer()) return PolyFn::constant(chart, Rational(v.get<long long>()));
    if (!v.is_string()) fail(where, "expected an expression string");
    try {
      return parse_poly(v.get<std::string>(), chart);
    } catch (const ParseError& e) {
      fail(where, e.what());
    }
  }

  Rational rational(const ordered_json& v, const std::string& where) const {
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (!v.is_string()) fail(where, "expected a rational (integer or \"p/q\" string)");
    try {
      return parse_rational(v.get<std::string>());
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }

private:
  std::string origin_;
};

} // namespace

Rational parse_rational(const std::string& s) {
  static const std::regex pattern(R"(\s*(-?\d+)(/(\d+))?\s*)");
  std::smatch m;
  if (!std::regex_match(s, m, pattern)) throw PreconditionError("malformed rational `" + s + "`");
  if (m[3].matched && m[3].str().find_first_not_of('0') == std::string::npos)
    throw PreconditionError("zero denominator in `" + s + "`");
  return m[3].matched ? Rational(m[1].str()) / Rational(m[3].str()) : Rational(m[1].str());
}

AlgebroidSpec parse_spec(const std::string& text, const std::string& origin) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
    std::string msg = e.what();
    if (auto pos = msg.find("; last read"); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw SpecError(origin + ":" + location(text, byte) + ": JSON syntax error: " + msg);
  }
  const Reader rd(origin);

  const auto& coords = rd.field(rd.field(doc, "chart", "document"), "coords", "chart");
  if (!coords.is_array()) rd.fail("chart.coords", "expected a list of identifiers");
  std::vector<std::string> names;
  for (const auto& c : coords) {
    if (!c.is_string()) rd.fail("chart.coords", "expected identifier strings");
    names.push_back(c.get<std::string>());
  }
  ChartPtr chart;
  try {
    chart = make_chart(names);
  } catch (const Error& e) {
    rd.fail("chart.coords", e.what());
  }
  const std::size_t m = chart->dim();

  const auto& alg = rd.field(doc, "algebroid", "document");
  const std::size_t r = rd.count(rd.field(alg, "rank", "algebroid"), "algebroid.rank");
  if (r == 0) rd.fail("algebroid.rank", "rank must be positive");
  const auto& anchor_src = rd.field(alg, "anchor", "algebroid");
  if (!anchor_src.is_array() || anchor_src.size() != r * m)
    rd.fail("algebroid.anchor", "expected rank*base_dim = " + std::to_string(r * m) + " expressions");
  PolyMatrix<Rational> anchor(chart, r, m);
  for (std::size_t k = 0; k < r * m; ++k)
    anchor(k / m, k % m) = rd.expr(anchor_src[k], chart, "algebroid.anchor[" + std::to_string(k + 1) + "]");

  std::vector<PolyFn> structure(r * r * r, PolyFn(chart));
  auto slot = [&](std::size_t i, std::size_t j, std::size_t k) -> PolyFn& { return structure[(i * r + j) * r + k]; };
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> explicit_entries;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, PolyFn>> entries;
  if (auto it = alg.find("structure"); it != alg.end()) {
    if (!it->is_array()) rd.fail("algebroid.structure", "expected a list of {i, j, k, expr}");
    for (std::size_t n = 0; n < it->size(); ++n) {
      const std::string where = "algebroid.structure[" + std::to_string(n + 1) + "]";
      const auto& e = (*it)[n];
      const std::size_t i = rd.index(rd.field(e, "i", where), r, where + ".i");
      const std::size_t j = rd.index(rd.field(e, "j", where), r, where + ".j");
      const std::size_t k = rd.index(rd.field(e, "k", where), r, where + ".k");
      if (!explicit_entries.insert({i, j, k}).second) rd.fail(where, "duplicate structure entry");
      entries.emplace_back(i, j, k, rd.expr(rd.field(e, "expr", where), chart, where + ".expr"));
    }
  }
  for (const auto& [i, j, k, p] : entries) {
    slot(i, j, k) = p;
    if (!explicit_entries.count({j, i, k})) slot(j, i, k) = -p;
  }

  PolyMatrix<Rational> omega(chart, r, r);
  if (auto it = doc.find("omega"); it != doc.end()) {
    if (!it->is_array()) rd.fail("omega", "expected a list of {i, j, expr}");
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t n = 0; n < it->size(); ++n) {
      const std::string where = "omega[" + std::to_string(n + 1) + "]";
      const auto& e = (*it)[n];
      const std::size_t i = rd.index(rd.field(e, "i", where), r, where + ".i");
      const std::size_t j = rd.index(rd.field(e, "j", where), r, where + ".j");
      if (i >= j) rd.fail(where, "omega entries must have i < j");
      if (!seen.insert({i, j}).second) rd.fail(where, "duplicate omega entry");
      omega(i, j) = rd.expr(rd.field(e, "expr", where), chart, where + ".expr");
      omega(j, i) = -omega(i, j);
    }
  } else {
    rd.fail("document", "missing key `omega`");
  }

  AlgebroidSpec spec{chart, AlgebroidPresentation(chart, r, anchor, std::move(structure)), omega,
                     std::nullopt, std::nullopt, {}, doc};

  if (auto it = doc.find("fock"); it != doc.end()) {
    FockSettings f;
    if (it->contains("modes")) f.modes = rd.count((*it)["modes"], "fock.modes");
    if (it->contains("cutoff")) f.cutoff = rd.count((*it)["cutoff"], "fock.cutoff");
    if (it->contains("buffer")) f.buffer = rd.count((*it)["buffer"], "fock.buffer");
    spec.fock = f;
  }
  if (auto it = doc.find("star"); it != doc.end()) {
    StarSettings s;
    if (it->contains("order")) s.order = rd.count((*it)["order"], "star.order");
    if (it->contains("seed")) s.seed = rd.count((*it)["seed"], "star.seed");
    if (it->contains("trials")) s.trials = rd.count((*it)["trials"], "star.trials");
    if (it->contains("J")) {
      const auto& J = (*it)["J"];
      if (!J.is_array() || J.size() != r) rd.fail("star.J", "expected a rank x rank matrix");
      RatMatrix M(r, r);
      for (std::size_t i = 0; i < r; ++i) {
        if (!J[i].is_array() || J[i].size() != r) rd.fail("star.J", "expected a rank x rank matrix");
        for (std::size_t j = 0; j < r; ++j)
          M(i, j) = rd.rational(J[i][j], "star.J[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]");
      }
      s.J = M;
    }
    spec.star = s;
  }
  if (auto it = doc.find("points"); it != doc.end()) {
    if (!it->is_array()) rd.fail("points", "expected a list of base points");
    for (std::size_t n = 0; n < it->size(); ++n) {
      const std::string where = "points[" + std::to_string(n + 1) + "]";
      const auto& p = (*it)[n];
      if (!p.is_array() || p.size() != m) rd.fail(where, "expected " + std::to_string(m) + " coordinates");
      std::vector<Rational> pt;
      for (const auto& c : p) pt.push_back(rd.rational(c, where));
      spec.points.push_back(std::move(pt));
    }
  }
  return spec;
}

AlgebroidSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str(), path.string());
}

RatMatrix frame_complex_structure(const AlgebroidSpec& spec) {
  if (spec.star && spec.star->J) return *spec.star->J;
  RatMatrix W(spec.omega.rows(), spec.omega.cols());
  for (std::size_t i = 0; i < spec.omega.rows(); ++i)
    for (std::size_t j = 0; j < spec.omega.cols(); ++j) {
      if (!spec.omega(i, j).is_constant()) throw SpecError("star: omega is not constant, set star.J explicitly");
      W(i, j) = spec.omega(i, j).constant_term();
    }
  if (W.transpose() * W != RatMatrix::Identity(W.rows(), W.cols()))
    throw SpecError("star: omega is not orthogonal, set star.J explicitly");
  return W;
}

} // namespace aq
