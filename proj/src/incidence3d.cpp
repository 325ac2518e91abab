#include "slab/incidence3d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace slab {

std::string format_point3(Point3 v) {
  return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + "," + std::to_string(v.z) + ")";
}

namespace {

Point3 scale(const Field& f, Elem s, Point3 v) { return {f.mul(s, v.x), f.mul(s, v.y), f.mul(s, v.z)}; }
Point3 plus(const Field& f, Point3 u, Point3 v) { return {f.add(u.x, v.x), f.add(u.y, v.y), f.add(u.z, v.z)}; }
Point3 minus(const Field& f, Point3 u, Point3 v) { return {f.sub(u.x, v.x), f.sub(u.y, v.y), f.sub(u.z, v.z)}; }

int lead_index(Point3 v) {
  for (int i = 0; i < 3; ++i)
    if (v[i] != 0) return i;
  return -1;
}

Point3 monic(const Field& f, Point3 v) {
  const int j = lead_index(v);
  if (j < 0) throw std::invalid_argument("zero vector has no canonical scaling");
  return scale(f, f.inv(v[j]), v);
}

}  // namespace

Elem dot(const Field& f, Point3 u, Point3 v) {
  return f.add(f.add(f.mul(u.x, v.x), f.mul(u.y, v.y)), f.mul(u.z, v.z));
}

Point3 cross(const Field& f, Point3 u, Point3 v) {
  return {f.sub(f.mul(u.y, v.z), f.mul(u.z, v.y)), f.sub(f.mul(u.z, v.x), f.mul(u.x, v.z)),
          f.sub(f.mul(u.x, v.y), f.mul(u.y, v.x))};
}

Line3 Line3::through(const Field& f, Point3 base, Point3 dir) {
  Line3 l;
  l.lead_ = lead_index(dir);
  if (l.lead_ < 0) throw std::invalid_argument("line direction must be nonzero");
  l.dir_ = monic(f, dir);
  l.base_ = minus(f, base, scale(f, base[l.lead_], l.dir_));
  return l;
}

std::vector<Point3> Line3::points(const Field& f) const {
  std::vector<Point3> out;
  out.reserve(f.q());
  for (Elem t = 0; t < f.q(); ++t) out.push_back(plus(f, base_, scale(f, t, dir_)));
  return out;
}

bool Line3::contains(const Field& f, Point3 v) const {
  // base[lead] = 0 and dir[lead] = 1, so the parameter is v[lead].
  return plus(f, base_, scale(f, v[lead_], dir_)) == v;
}

Plane3 Plane3::make(const Field& f, Point3 normal, Elem offset) {
  const int j = lead_index(normal);
  if (j < 0) throw std::invalid_argument("plane normal must be nonzero");
  const Elem s = f.inv(normal[j]);
  Plane3 p;
  p.normal_ = scale(f, s, normal);
  p.offset_ = f.mul(s, offset);
  return p;
}

bool Plane3::contains(const Field& f, Point3 v) const { return dot(f, normal_, v) == offset_; }

bool Plane3::contains(const Field& f, const Line3& line) const {
  return dot(f, normal_, line.dir()) == 0 && contains(f, line.base());
}

std::string format_plane(const Plane3& p) {
  return "<" + format_point3(p.normal()) + ",x>=" + std::to_string(p.offset());
}

std::vector<Point3> plane_normals(const Field& f) {
  const Elem q = f.q();
  std::vector<Point3> out;
  out.reserve(std::size_t{q} * q + q + 1);
  for (Elem a = 0; a < q; ++a)
    for (Elem b = 0; b < q; ++b) out.push_back({1, a, b});
  for (Elem b = 0; b < q; ++b) out.push_back({0, 1, b});
  out.push_back({0, 0, 1});
  return out;
}

Line3 pair_line(const Field& f, Point2 m1, Point2 m2) {
  if (m1.x == 0 || m2.x == 0) {
    throw std::invalid_argument("pair_line needs nonzero first coordinates");
  }
  if (m1.y == 0 && m2.y == 0) {
    throw std::invalid_argument("pair_line needs (v1, v2) != (0, 0)");
  }
  const Elem iu1 = f.inv(m1.x), iu2 = f.inv(m2.x);
  const Point3 base{f.mul(m2.x, iu1), f.mul(m1.x, iu2), f.sub(f.mul(m2.y, iu1), f.mul(m1.y, iu2))};
  const Point3 dir{f.neg(f.mul(m1.y, iu1)), f.mul(m2.y, iu2),
                   f.neg(f.mul(f.mul(m1.y, m2.y), f.mul(iu1, iu2)))};
  return Line3::through(f, base, dir);
}

MatrixSet solution_set(const Field& f, Point2 m1, Point2 m2) {
  if (m1.is_origin() || m2.is_origin()) {
    throw std::invalid_argument("solution_set needs nonzero points");
  }
  std::vector<Mat2> out;
  Sl2Enumerator(f).for_each([&](const Mat2& m) {
    if (apply(f, m, m1) == m2) out.push_back(m);
  });
  return MatrixSet(std::move(out));
}

std::uint64_t count_incidences(const Field& f, std::span<const Point3> points,
                               std::span<const Line3> lines) {
  std::unordered_set<std::uint64_t> members;
  members.reserve(points.size() * 2);
  for (auto v : points) members.insert(v.pack(f.q()));
  std::vector<Line3> distinct(lines.begin(), lines.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::uint64_t total = 0;
  for (const auto& line : distinct) {
    for (auto v : line.points(f)) total += members.count(v.pack(f.q()));
  }
  return total;
}

std::uint64_t count_incidences_brute(const Field& f, std::span<const Point3> points,
                                     std::span<const Line3> lines) {
  std::vector<Point3> ps(points.begin(), points.end());
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  std::vector<Line3> ls(lines.begin(), lines.end());
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  std::uint64_t total = 0;
  for (auto v : ps) {
    for (const auto& l : ls) {
      for (auto w : l.points(f)) {
        if (w == v) {
          ++total;
          break;
        }
      }
    }
  }
  return total;
}

PlaneRichness plane_richness(const Field& f, std::span<const Line3> lines,
                             std::uint32_t sweep_max_q) {
  if (f.q() > sweep_max_q) return plane_richness_pencil(f, lines);
  PlaneRichness best;
  best.witness = Plane3::make(f, {1, 0, 0}, 0);
  std::vector<std::uint64_t> per_offset(f.q());
  for (auto n : plane_normals(f)) {
    std::fill(per_offset.begin(), per_offset.end(), 0);
    for (const auto& l : lines) {
      if (dot(f, n, l.dir()) == 0) ++per_offset[dot(f, n, l.base())];
    }
    for (Elem s = 0; s < f.q(); ++s) {
      if (per_offset[s] > best.max_lines) {
        best.max_lines = per_offset[s];
        best.witness = Plane3::make(f, n, s);
      }
    }
  }
  return best;
}

PlaneRichness plane_richness_pencil(const Field& f, std::span<const Line3> lines) {
  PlaneRichness best;
  best.exhaustive_sweep = false;
  best.witness = Plane3::make(f, {1, 0, 0}, 0);
  const std::uint64_t q = f.q();
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  auto key = [&](const Plane3& p) { return p.normal().pack(f.q()) * q + p.offset(); };
  for (const auto& l : lines) {
    // Normals orthogonal to dir are spanned by e_k - dir[k] e_lead for the other two k.
    std::vector<Point3> basis;
    for (int k = 0; k < 3; ++k) {
      if (k == l.lead()) continue;
      Point3 v{};
      v[k] = 1;
      v[l.lead()] = f.neg(l.dir()[k]);
      basis.push_back(v);
    }
    std::vector<Point3> normals{basis[1]};
    for (Elem t = 0; t < f.q(); ++t) normals.push_back(plus(f, basis[0], scale(f, t, basis[1])));
    for (auto n : normals) {
      const Plane3 p = Plane3::make(f, n, dot(f, n, l.base()));
      const auto c = ++counts[key(p)];
      if (c > best.max_lines) {
        best.max_lines = c;
        best.witness = p;
      }
    }
  }
  return best;
}

const char* to_string(LineRelation r) {
  switch (r) {
    case LineRelation::Equal: return "equal";
    case LineRelation::Parallel: return "parallel";
    case LineRelation::Intersecting: return "intersecting";
    case LineRelation::Skew: return "skew";
  }
  return "?";
}

LineRelation line_relation(const Field& f, const Line3& l1, const Line3& l2) {
  if (l1 == l2) return LineRelation::Equal;
  if (l1.dir() == l2.dir()) return LineRelation::Parallel;
  const Point3 gap = minus(f, l2.base(), l1.base());
  return dot(f, cross(f, l1.dir(), l2.dir()), gap) == 0 ? LineRelation::Intersecting
                                                         : LineRelation::Skew;
}

bool coplanar(const Field& f, const Line3& l1, const Line3& l2) {
  return line_relation(f, l1, l2) != LineRelation::Skew;
}

bool coplanar(const Field& f, const Line3& l1, const Line3& l2, const Line3& l3) {
  if (l1 == l2) return coplanar(f, l1, l3);
  if (l1 == l3 || l2 == l3) return coplanar(f, l1, l2);
  const auto rel = line_relation(f, l1, l2);
  if (rel == LineRelation::Skew) return false;
  const Point3 n = rel == LineRelation::Parallel
                       ? cross(f, l1.dir(), minus(f, l2.base(), l1.base()))
                       : cross(f, l1.dir(), l2.dir());
  return Plane3::make(f, n, dot(f, n, l1.base())).contains(f, l3);
}

IncidenceInstance make_incidence_instance(const Field& f, std::vector<Point3> points,
                                          std::vector<Line3> lines) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  IncidenceInstance inst;
  inst.q = f.q();
  inst.incidences = count_incidences(f, points, lines);
  inst.richness = plane_richness(f, lines);
  inst.points = std::move(points);
  inst.lines = std::move(lines);
  return inst;
}

std::vector<IncidenceRow> incidence_bound_report(const IncidenceInstance& inst, double c) {
  const double np = static_cast<double>(inst.points.size());
  const double nl = static_cast<double>(inst.lines.size());
  const double q = inst.q;
  const double incid = static_cast<double>(inst.incidences);
  const double m = static_cast<double>(inst.richness.max_lines);

  auto row = [](std::string name, bool applicable, double rhs, double observed) {
    return IncidenceRow{std::move(name), applicable, rhs, observed, rhs > 0 ? observed / rhs : 0.0};
  };

  std::vector<IncidenceRow> rows;
  rows.push_back(row("mt-incidence", true,
                     std::sqrt(np) * std::pow(nl, 0.75) * std::pow(m, 0.25) + np + nl, incid));
  rows.push_back(row("two-sided", true, q * std::sqrt(np * nl), std::fabs(incid - np * nl / (q * q))));
  rows.push_back(row("plane-limited", m <= c * std::sqrt(nl),
                     nl * std::pow(np, 0.4) + std::pow(np, 1.2), incid));
  rows.push_back(row("balanced", std::pow(np, 7.0 / 8.0) < nl && nl < std::pow(np, 8.0 / 7.0),
                     std::pow(np * nl, 11.0 / 15.0), incid));
  if (inst.partition) {
    const double m0 = static_cast<double>(inst.partition->m0);
    const double m1 = static_cast<double>(inst.partition->m1);
    const double s = static_cast<double>(inst.partition->s_size);
    rows.push_back(row("plugin-two-sided", true, q * q * m1, s));
    rows.push_back(row("plugin-plane-limited", true, std::pow(m0 * m1, 5.0 / 3.0), s));
    rows.push_back(row("plugin-balanced", true, std::pow(m0, 1.75) * std::pow(m1, 2.75), s));
  }
  return rows;
}

}  // namespace slab
