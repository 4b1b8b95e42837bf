#include "lorentz/spacetime_file.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "lorentz/errors.hpp"
#include "lorentz/expr.hpp"
#include "lorentz/geometry.hpp"

namespace lorentz {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

struct Line {
  int number;
  std::string text;
};

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw FormatError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_real(const std::string& s, const std::string& origin, int line) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(origin, line, "expected a number, got '" + s + "'");
  }
  if (used != s.size()) fail(origin, line, "expected a number, got '" + s + "'");
  return v;
}

// "name = value" or "name=value"; several per line separated by commas.
void parse_params(const std::string& rest, std::map<std::string, double>& out, const std::string& origin, int line) {
  for (const std::string& item : split(rest, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(origin, line, "expected name = value");
    const std::string name = trim(item.substr(0, eq));
    if (name.empty()) fail(origin, line, "empty parameter name");
    out[name] = parse_real(trim(item.substr(eq + 1)), origin, line);
  }
}

struct SubmanifoldBlock {
  int line = 0;
  std::string name;
  std::vector<std::string> params;
  std::map<std::string, double> periodic;
  std::map<std::string, std::pair<double, double>> range;
  std::vector<int> grid;
  std::vector<std::string> map;
  std::vector<std::string> hint;
};

}  // namespace

Vec parse_vector(const std::string& text, int expected_dim) {
  if (text.find_first_of(" \t") != std::string::npos) throw FormatError("vectors are written without spaces");
  const auto parts = split(text, ',');
  if (parts.empty() || text.empty()) throw FormatError("empty vector");
  if (parts.size() > static_cast<std::size_t>(kMaxDim)) throw FormatError("too many components in '" + text + "'");
  Vec v(static_cast<int>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty()) throw FormatError("empty component in '" + text + "'");
    std::size_t used = 0;
    try {
      v(static_cast<int>(i)) = std::stod(parts[i], &used);
    } catch (const std::exception&) {
      throw FormatError("bad number '" + parts[i] + "'");
    }
    if (used != parts[i].size() || !std::isfinite(v(static_cast<int>(i))))
      throw FormatError("bad number '" + parts[i] + "'");
  }
  if (expected_dim >= 0 && v.size() != expected_dim)
    throw FormatError("expected " + std::to_string(expected_dim) + " components, got " + std::to_string(v.size()));
  return v;
}

Spacetime parse_spacetime(const std::string& text, const std::map<std::string, double>& overrides,
                          const std::string& origin) {
  std::vector<Line> lines;
  {
    std::istringstream is(text);
    std::string raw;
    int no = 0;
    while (std::getline(is, raw)) {
      ++no;
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw = raw.substr(0, hash);
      raw = trim(raw);
      if (!raw.empty()) lines.push_back({no, raw});
    }
  }

  std::optional<std::string> builtin;
  std::optional<int> dimension;
  std::vector<std::string> coords;
  std::map<std::string, double> periods, params;
  std::map<std::string, std::pair<double, double>> domain;
  std::vector<std::string> metric;
  std::vector<int> metric_lines;
  int metric_line = 0;
  std::vector<std::string> orientation;
  int orientation_line = 0;
  std::optional<std::string> temporal;
  int temporal_line = 0;
  std::map<std::string, std::vector<std::pair<std::string, std::pair<double, double>>>> regions;
  std::vector<SubmanifoldBlock> subs;
  std::string name;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Line& L = lines[i];
    const auto sp = L.text.find_first_of(" \t:");
    const std::string key = L.text.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(L.text.substr(sp + 1));
    if (!rest.empty() && rest.front() == ':') rest = trim(rest.substr(1));

    if (key == "builtin") {
      if (rest.empty()) fail(origin, L.number, "builtin needs a name");
      builtin = rest;
    } else if (key == "name") {
      name = rest;
    } else if (key == "dimension") {
      const double d = parse_real(rest, origin, L.number);
      if (d != std::floor(d) || d < 2 || d > kMaxDim)
        fail(origin, L.number, "dimension must be an integer in [2, " + std::to_string(kMaxDim) + "]");
      dimension = static_cast<int>(d);
    } else if (key == "coordinates") {
      // coordinates t x y z   (optionally "x periodic 1" groups)
      const auto w = words(rest);
      for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] == "periodic") {
          if (coords.empty() || k + 1 >= w.size()) fail(origin, L.number, "periodic needs a preceding name and a length");
          periods[coords.back()] = parse_real(w[++k], origin, L.number);
        } else {
          coords.push_back(w[k]);
        }
      }
    } else if (key == "periodic") {
      const auto w = words(rest);
      if (w.size() != 2) fail(origin, L.number, "expected: periodic <coordinate> <length>");
      periods[w[0]] = parse_real(w[1], origin, L.number);
    } else if (key == "param" || key == "params") {
      parse_params(rest, params, origin, L.number);
    } else if (key == "domain") {
      const auto w = words(rest);
      if (w.size() != 3) fail(origin, L.number, "expected: domain <coordinate> <lo> <hi>");
      domain[w[0]] = {parse_real(w[1], origin, L.number), parse_real(w[2], origin, L.number)};
    } else if (key == "metric") {
      metric_line = L.number;
      if (!rest.empty()) fail(origin, L.number, "metric entries go on the following lines");
      bool closed = false;
      for (++i; i < lines.size(); ++i) {
        if (lines[i].text == "end") {
          closed = true;
          break;
        }
        std::string row = lines[i].text;
        if (!row.empty() && row.back() == ',') row.pop_back();  // rows may end with a separator
        for (const std::string& e : split(row, ',')) {
          if (e.empty()) fail(origin, lines[i].number, "empty metric entry");
          metric.push_back(e);
          metric_lines.push_back(lines[i].number);
        }
      }
      if (!closed) fail(origin, L.number, "metric block without 'end'");
    } else if (key == "orientation") {
      orientation_line = L.number;
      orientation = split(rest, ',');
    } else if (key == "temporal") {
      if (rest.empty()) fail(origin, L.number, "temporal needs an expression");
      temporal = rest;
      temporal_line = L.number;
    } else if (key == "region") {
      const auto w = words(rest);
      if (w.empty() || (w.size() - 1) % 3 != 0) fail(origin, L.number, "expected: region <name> (<coord> <lo> <hi>)...");
      auto& r = regions[w[0]];
      for (std::size_t k = 1; k < w.size(); k += 3)
        r.push_back({w[k], {parse_real(w[k + 1], origin, L.number), parse_real(w[k + 2], origin, L.number)}});
    } else if (key == "submanifold") {
      SubmanifoldBlock b;
      b.line = L.number;
      b.name = rest;
      if (b.name.empty()) fail(origin, L.number, "submanifold needs a name");
      bool closed = false;
      for (++i; i < lines.size(); ++i) {
        const Line& S = lines[i];
        if (S.text == "end") {
          closed = true;
          break;
        }
        const auto s2 = S.text.find_first_of(" \t");
        const std::string k2 = S.text.substr(0, s2);
        const std::string r2 = s2 == std::string::npos ? "" : trim(S.text.substr(s2 + 1));
        if (k2 == "parameters") {
          b.params = words(r2);
        } else if (k2 == "periodic") {
          const auto w = words(r2);
          if (w.size() != 2) fail(origin, S.number, "expected: periodic <parameter> <length>");
          b.periodic[w[0]] = parse_real(w[1], origin, S.number);
        } else if (k2 == "range") {
          const auto w = words(r2);
          if (w.size() != 3) fail(origin, S.number, "expected: range <parameter> <lo> <hi>");
          b.range[w[0]] = {parse_real(w[1], origin, S.number), parse_real(w[2], origin, S.number)};
        } else if (k2 == "grid") {
          for (const auto& w : words(r2)) {
            const double g = parse_real(w, origin, S.number);
            if (g != std::floor(g) || g < 1) fail(origin, S.number, "grid sizes must be positive integers");
            b.grid.push_back(static_cast<int>(g));
          }
        } else if (k2 == "map") {
          b.map = split(r2, ',');
        } else if (k2 == "hint") {
          b.hint = split(r2, ',');
        } else {
          fail(origin, S.number, "unknown submanifold entry '" + k2 + "'");
        }
      }
      if (!closed) fail(origin, L.number, "submanifold block without 'end'");
      subs.push_back(std::move(b));
    } else {
      fail(origin, L.number, "unknown stanza '" + key + "'");
    }
  }

  if (builtin) {
    if (dimension || !coords.empty() || !metric.empty() || !subs.empty())
      throw FormatError(origin + ": a builtin document may only add params");
    std::map<std::string, double> p = params;
    for (const auto& [k, v] : overrides) p[k] = v;
    return load(*builtin, p);
  }

  if (!dimension) throw FormatError(origin + ": missing 'dimension'");
  const int n = *dimension;
  if (static_cast<int>(coords.size()) != n)
    throw FormatError(origin + ": expected " + std::to_string(n) + " coordinate names, got " + std::to_string(coords.size()));
  for (const auto& [k, v] : overrides) {
    if (!params.count(k)) throw ParamError("unknown parameter '" + k + "' for " + origin);
    params[k] = v;
  }
  if (metric_line == 0) throw FormatError(origin + ": missing 'metric' block");
  if (static_cast<int>(metric.size()) != n * (n + 1) / 2)
    fail(origin, metric_line,
         "metric block needs " + std::to_string(n * (n + 1) / 2) + " entries, got " + std::to_string(metric.size()));
  if (orientation_line == 0) throw FormatError(origin + ": missing 'orientation'");
  if (static_cast<int>(orientation.size()) != n) fail(origin, orientation_line, "orientation needs n components");

  auto coord_index = [&](const std::string& c, int line) {
    for (int k = 0; k < n; ++k)
      if (coords[k] == c) return k;
    fail(origin, line, "unknown coordinate '" + c + "'");
  };

  std::vector<std::optional<double>> per(n);
  for (const auto& [c, L] : periods) {
    if (!(L > 0) || !std::isfinite(L)) throw FormatError(origin + ": period of '" + c + "' must be positive");
    per[coord_index(c, 0)] = L;
  }
  const double inf = std::numeric_limits<double>::infinity();
  Box dom{std::vector<double>(n, -inf), std::vector<double>(n, inf)};
  for (const auto& [c, lh] : domain) {
    const int k = coord_index(c, 0);
    if (!(lh.first < lh.second)) throw FormatError(origin + ": empty domain for '" + c + "'");
    dom.lo[k] = lh.first;
    dom.hi[k] = lh.second;
  }

  {
    // Parse each expression once here so errors point at their own line.
    std::vector<std::string> names;
    for (const auto& [k, v] : params) names.push_back(k);
    const SymbolTable symbols(coords, names);
    auto check = [&](const std::string& text, int line) {
      try {
        parse(text, symbols);
      } catch (const Error& e) {
        fail(origin, line, e.what());
      }
    };
    for (std::size_t k = 0; k < metric.size(); ++k) check(metric[k], metric_lines[k]);
    for (const auto& c : orientation) check(c, orientation_line);
    if (temporal) check(*temporal, temporal_line);
  }

  Spacetime st;
  st.name = name.empty() ? origin : name;
  st.params = params;
  try {
    st.metric = make_expr_metric(coords, metric, params, per, dom);
    st.orientation = make_expr_vector(coords, orientation, params);
    if (temporal) st.temporal = make_expr_scalar(coords, *temporal, params);
  } catch (const Error& e) {
    throw FormatError(origin + ": " + e.what());
  }
  st.chart = "user chart (" + [&] {
    std::string s;
    for (const auto& c : coords) s += (s.empty() ? "" : ", ") + c;
    return s;
  }() + ")";

  // Default region: the period for periodic coordinates, the domain shrunk by 5% where
  // finite, otherwise a unit-size window.
  Box def{std::vector<double>(n), std::vector<double>(n)};
  for (int k = 0; k < n; ++k) {
    if (per[k]) {
      def.lo[k] = 0;
      def.hi[k] = *per[k];
      continue;
    }
    double lo = dom.lo[k], hi = dom.hi[k];
    if (std::isfinite(lo) && std::isfinite(hi)) {
      const double pad = 0.05 * (hi - lo);
      lo += pad;
      hi -= pad;
    } else if (std::isfinite(lo)) {
      lo += 0.05;
      hi = lo + 2;
    } else if (std::isfinite(hi)) {
      hi -= 0.05;
      lo = hi - 2;
    } else {
      lo = -1;
      hi = 1;
    }
    def.lo[k] = lo;
    def.hi[k] = hi;
  }
  Region base;
  base.box = def;
  st.regions["default"] = base;
  for (const auto& [rname, entries] : regions) {
    Box b = def;
    for (const auto& [c, lh] : entries) {
      const int k = coord_index(c, 0);
      b.lo[k] = lh.first;
      b.hi[k] = lh.second;
    }
    Region r;
    r.box = b;
    st.regions[rname] = r;
  }

  // The metric must be Lorentzian where we will look at it.
  try {
    const Point c = def.center();
    if (signature(*st.metric, c) != 1) throw FormatError(origin + ": metric is not Lorentzian at the region centre");
    const Vec X = st.orientation->at(c);
    const MetricValue m = st.metric->value(c);
    if (!(m.inner(X, X) < 0)) throw FormatError(origin + ": orientation field is not timelike at the region centre");
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(origin + ": cannot evaluate the metric at the region centre: " + e.what());
  }

  for (const SubmanifoldBlock& b : subs) {
    const int m = static_cast<int>(b.params.size());
    if (m < 1) fail(origin, b.line, "submanifold needs 'parameters'");
    if (static_cast<int>(b.map.size()) != n) fail(origin, b.line, "submanifold map needs n components");
    std::vector<std::optional<double>> pp(m);
    Box range{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
    bool have_range = true;
    for (int a = 0; a < m; ++a) {
      const std::string& pn = b.params[a];
      if (auto it = b.periodic.find(pn); it != b.periodic.end()) pp[a] = it->second;
      if (auto it = b.range.find(pn); it != b.range.end()) {
        range.lo[a] = it->second.first;
        range.hi[a] = it->second.second;
      } else if (pp[a]) {
        range.lo[a] = 0;
        range.hi[a] = *pp[a];
      } else {
        have_range = false;
      }
    }
    if (!have_range) fail(origin, b.line, "every non-periodic parameter needs a range");
    std::vector<int> grid = b.grid.empty() ? std::vector<int>(m, 8) : b.grid;
    if (static_cast<int>(grid.size()) != m) fail(origin, b.line, "grid needs one size per parameter");
    VectorFieldPtr hint;
    try {
      if (!b.hint.empty()) {
        if (static_cast<int>(b.hint.size()) != n) fail(origin, b.line, "hint needs n components");
        hint = make_expr_vector(coords, b.hint, params);
      }
      st.submanifolds.push_back({b.name, "user submanifold",
                                 std::make_shared<const Embedding>(
                                     make_embedding(b.name, b.params, b.map, params, pp, range, grid, hint))});
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      fail(origin, b.line, e.what());
    }
  }
  return st;
}

LoadedSpacetime load_spacetime(const std::string& spec, const std::map<std::string, double>& overrides) {
  LoadedSpacetime out;
  std::ostringstream canon;
  if (spec.rfind("builtin:", 0) == 0) {
    const std::string name = trim(spec.substr(8));
    out.spacetime = load(name, overrides);
    canon << "builtin:" << name;
  } else {
    std::ifstream in(spec, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + spec + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    out.spacetime = parse_spacetime(ss.str(), overrides, spec);
    canon << ss.str();
  }
  canon.precision(17);
  for (const auto& [k, v] : overrides) canon << "\nparam " << k << "=" << v;
  out.canonical_input = canon.str();
  return out;
}

}  // namespace lorentz
