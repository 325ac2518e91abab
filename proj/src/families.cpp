#include "slab/families.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

#include "slab/rng.hpp"
#include "slab/stabilizer.hpp"

namespace slab {

namespace {

const char* const kNames[] = {"empty",         "origin",           "full",
                              "full-minus-origin", "line-origin",  "line-affine",
                              "complement",    "axis-subgroup",    "subfield-plane",
                              "orbit-union",   "random",           "explicit"};

bool known_name(const std::string& n) {
  for (auto k : kNames)
    if (n == k) return true;
  return false;
}

/// Splits on sep outside of () and [] nesting.
std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(' || ch == '[') ++depth;
    if (ch == ')' || ch == ']') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::uint64_t to_u64(const std::string& s, const std::string& key) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("parameter " + key + "=" + s + " is not a nonnegative integer");
  }
  return v;
}

std::vector<Point2> parse_point_list(std::string_view body) {
  std::vector<Point2> out;
  if (body.empty()) return out;
  for (const auto& item : split_top(body, ';')) {
    // q is unknown here; use the widest range and recheck in gen_family.
    out.push_back(parse_point(item, ~std::uint32_t{0}));
  }
  return out;
}

}  // namespace

std::string FamilySpec::param(const std::string& key, const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::uint64_t FamilySpec::int_param(const std::string& key, std::uint64_t fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : to_u64(it->second, key);
}

FamilySpec parse_family_spec(std::string_view text) {
  FamilySpec spec;
  if (text.starts_with("points:")) {
    spec.name = "explicit";
    spec.points = parse_point_list(text.substr(7));
    return spec;
  }
  if (!text.starts_with("family:")) {
    throw std::invalid_argument("set spec must start with 'family:' or 'points:'");
  }
  text.remove_prefix(7);
  const auto colon = text.find(':');
  spec.name = std::string(text.substr(0, colon));
  if (!known_name(spec.name) || spec.name == "explicit") {
    throw std::invalid_argument("unknown family '" + spec.name + "'");
  }
  if (colon != std::string_view::npos) {
    for (const auto& kv : split_top(text.substr(colon + 1), ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw std::invalid_argument("family parameter '" + kv + "' is not key=value");
      }
      spec.params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
  }
  return spec;
}

std::string format_family_spec(const FamilySpec& spec) {
  if (spec.name == "explicit") return "points:" + format_point_list(spec.points);
  std::string out = "family:" + spec.name;
  bool first = true;
  for (const auto& [k, v] : spec.params) {
    out += first ? ':' : ',';
    first = false;
    out += k + "=" + v;
  }
  return out;
}

PointSet random_point_set(std::uint32_t q, std::uint64_t n, std::uint64_t seed) {
  const std::uint64_t universe = std::uint64_t{q} * q;
  if (n > universe) throw std::invalid_argument("random family needs n <= q^2");
  std::vector<std::uint64_t> codes(universe);
  std::iota(codes.begin(), codes.end(), 0);
  SplitMix64 rng(seed);
  PointSet out(q);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t j = i + rng.below(universe - i);
    std::swap(codes[i], codes[j]);
    out.insert(Point2::unpack(codes[i], q));
  }
  return out;
}

PointSet gen_family(const Field& f, const FamilySpec& spec) {
  const std::uint32_t q = f.q();
  const std::string& name = spec.name;
  if (name == "empty") return PointSet(q);
  if (name == "origin") return PointSet::from_points(q, {{0, 0}});
  if (name == "full") return PointSet::full(q);
  if (name == "full-minus-origin") return PointSet::full(q).without_origin();
  if (name == "line-origin") {
    const auto idx = spec.int_param("line", 0);
    if (idx > q) throw std::invalid_argument("line index must be at most q");
    return PointSet::from_points(q, points_on_line(f, {static_cast<std::uint32_t>(idx)}));
  }
  if (name == "line-affine") {
    const auto x = spec.int_param("x", 1);
    if (x == 0 || x >= q) throw std::invalid_argument("line-affine needs 0 < x < q");
    PointSet s(q);
    for (Elem y = 0; y < q; ++y) s.insert({static_cast<Elem>(x), y});
    return s;
  }
  if (name == "complement") {
    FamilySpec inner = spec;
    inner.name = spec.param("of", "");
    inner.params.erase("of");
    if (inner.name.empty() || inner.name == "complement" || !known_name(inner.name)) {
      throw std::invalid_argument("complement needs of=<family name>");
    }
    return gen_family(f, inner).complement();
  }
  if (name == "axis-subgroup") {
    const auto sub = mult_subgroup(f, static_cast<std::uint32_t>(spec.int_param("c", 1)));
    PointSet s(q);
    for (auto y : sub.members) s.insert({0, y});
    return s;
  }
  if (name == "subfield-plane") {
    const auto sub = subfield_elements(f, static_cast<std::uint32_t>(spec.int_param("sub-r", 1)));
    PointSet s(q);
    for (auto x : sub.members)
      for (auto y : sub.members) s.insert({x, y});
    return s;
  }
  if (name == "orbit-union") {
    std::vector<Mat2> gens;
    for (const auto& g : split_top(spec.param("gens", ""), '|'))
      if (!g.empty()) gens.push_back(parse_matrix(g, q));
    if (gens.empty()) throw std::invalid_argument("orbit-union needs gens=[a,b;c,d]|...");
    const auto orbits = subgroup_orbits(f, gens);
    const std::string sel = spec.param("orbits", "all-nonzero");
    PointSet s(q);
    auto add = [&](const PointSet& o) {
      for (auto v : o.points()) s.insert(v);
    };
    if (sel == "all-nonzero") {
      for (std::size_t i = 1; i < orbits.orbits.size(); ++i) add(orbits.orbits[i]);
    } else {
      for (const auto& tok : split_top(sel, '+')) {
        const auto i = to_u64(tok, "orbits");
        if (i >= orbits.orbits.size()) {
          throw std::invalid_argument("orbit index " + tok + " out of range");
        }
        add(orbits.orbits[i]);
      }
    }
    return s;
  }
  if (name == "random") {
    return random_point_set(q, spec.int_param("n", 0), spec.int_param("seed", 0));
  }
  if (name == "explicit") {
    PointSet s(q);
    for (auto v : spec.points) {
      if (v.x >= q || v.y >= q) {
        throw std::invalid_argument("point " + format_point(v) + " has a code >= q");
      }
      s.insert(v);
    }
    return s;
  }
  throw std::invalid_argument("unknown family '" + name + "'");
}

PointSet gen_family(const Field& f, std::string_view text) {
  return gen_family(f, parse_family_spec(text));
}

PointSet uniform_line_set(const Field& f, std::uint32_t m0, std::uint32_t m1, std::uint64_t seed) {
  const std::uint32_t q = f.q();
  if (m0 == 0 || m0 > q + 1 || m1 == 0 || m1 > q - 1) {
    throw std::invalid_argument("uniform_line_set needs 1 <= m0 <= q+1 and 1 <= m1 <= q-1");
  }
  SplitMix64 rng(seed);
  std::vector<std::uint32_t> lines(q + 1);
  std::iota(lines.begin(), lines.end(), 0);
  PointSet out(q);
  for (std::uint32_t i = 0; i < m0; ++i) {
    std::swap(lines[i], lines[i + rng.below(q + 1 - i)]);
    auto pts = points_on_line(f, {lines[i]});
    pts.erase(pts.begin());  // origin
    for (std::uint32_t k = 0; k < m1; ++k) {
      std::swap(pts[k], pts[k + rng.below(pts.size() - k)]);
      out.insert(pts[k]);
    }
  }
  return out;
}

}  // namespace slab
