#include "slab/stabilizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#include "slab/rng.hpp"

namespace slab {

std::vector<ProjLine> LinePartition::meeting_lines() const {
  std::vector<ProjLine> out;
  for (std::uint32_t i = 0; i < multiplicity.size(); ++i)
    if (multiplicity[i] > 0) out.push_back({i});
  return out;
}

LinePartition line_partition(const Field& f, const PointSet& e) {
  LinePartition part;
  part.multiplicity.assign(f.q() + 1, 0);
  for (auto v : e.points()) {
    if (v.is_origin()) continue;
    ++part.multiplicity[line_of_point(f, v).index];
    ++part.nonzero_points;
  }
  for (std::uint32_t i = 0; i <= f.q(); ++i) {
    if (part.multiplicity[i] == 0) continue;
    ++part.lines_meeting;
    part.classes[part.multiplicity[i]].push_back({i});
  }
  return part;
}

bool spot_check_group(const Field& f, const MatrixSet& set, std::size_t pairs) {
  if (set.empty()) return false;
  for (const auto& m : set)
    if (!set.contains(invert(f, m))) return false;
  const auto& items = set.items();
  const std::size_t n = items.size();
  if (n * n <= pairs) {
    for (const auto& x : items)
      for (const auto& y : items)
        if (!set.contains(compose(f, x, y))) return false;
    return true;
  }
  SplitMix64 rng(n);
  for (std::size_t k = 0; k < pairs; ++k) {
    const auto& x = items[rng.below(n)];
    const auto& y = items[rng.below(n)];
    if (!set.contains(compose(f, x, y))) return false;
  }
  return true;
}

MatrixSet stabilizer_brute(const Field& f, const PointSet& e) {
  std::vector<Mat2> out;
  Sl2Enumerator(f).for_each([&](const Mat2& m) {
    if (e.preserved_by(f, m)) out.push_back(m);
  });
  MatrixSet result(std::move(out));
  if (!spot_check_group(f, result)) throw std::logic_error("stabilizer is not closed");
  return result;
}

std::vector<Mat2> transporters(const Field& f, Point2 m1, Point2 m2) {
  if (m1.x == 0) throw std::invalid_argument("transporters needs a nonzero first coordinate");
  const Elem u1 = m1.x, v1 = m1.y, u2 = m2.x, v2 = m2.y;
  const Elem iu1 = f.inv(u1);
  std::vector<Mat2> out;
  out.reserve(f.q());
  // a u1 + b v1 = u2, c u1 + d v1 = v2, ad - bc = 1 reduces to d u2 - b v2 = u1.
  if (u2 != 0) {
    const Elem iu2 = f.inv(u2);
    for (Elem b = 0; b < f.q(); ++b) {
      const Elem a = f.mul(f.sub(u2, f.mul(b, v1)), iu1);
      const Elem d = f.mul(f.add(u1, f.mul(b, v2)), iu2);
      const Elem c = f.mul(f.sub(v2, f.mul(d, v1)), iu1);
      out.push_back({a, b, c, d});
    }
  } else {
    const Elem b = f.neg(f.div(u1, v2));
    const Elem a = f.neg(f.mul(f.mul(b, v1), iu1));
    for (Elem d = 0; d < f.q(); ++d) {
      const Elem c = f.mul(f.sub(v2, f.mul(d, v1)), iu1);
      out.push_back({a, b, c, d});
    }
  }
  return out;
}

namespace {

MatrixSet stabilizer_from_base(const Field& f, const PointSet& e, Point2 base) {
  std::vector<Mat2> out;
  for (auto target : e.points()) {
    if (target.is_origin()) continue;
    for (const auto& m : transporters(f, base, target)) {
      if (e.preserved_by(f, m)) out.push_back(m);
    }
  }
  return MatrixSet(std::move(out));
}

}  // namespace

MatrixSet stabilizer_fast(const Field& f, const PointSet& e) {
  if (e.nonzero_size() == 0) {
    throw std::invalid_argument("stabilizer_fast needs a nonzero point; R_E is all of SL2");
  }
  const Point2 base = e.first_nonzero();
  if (base.x != 0) return stabilizer_from_base(f, e, base);
  // Base point on the y-axis: work in rotated coordinates, then conjugate back.
  const Mat2 g = normalize_two_lines(f, ProjLine::y_axis(f.q()), ProjLine::x_axis());
  const MatrixSet rotated = stabilizer_from_base(f, e.image(f, g), apply(f, g, base));
  return conjugate(f, rotated, invert(f, g));
}

MatrixSet stabilizer(const Field& f, const PointSet& e) {
  if (e.nonzero_size() == 0) return MatrixSet(sl2_elements(f));
  return stabilizer_fast(f, e);
}

std::uint64_t lineset_bound(std::uint64_t m) {
  return 2 * m * m * m * (m - 1) * (m - 1);
}

MatrixSet lineset_stabilizer(const Field& f, const std::vector<ProjLine>& lines) {
  std::vector<char> member(f.q() + 1, 0);
  std::size_t m = 0;
  for (auto l : lines) {
    if (l.index > f.q()) throw std::invalid_argument("line index out of range");
    if (!member[l.index]) ++m;
    member[l.index] = 1;
  }
  std::vector<ProjLine> distinct;
  for (std::uint32_t i = 0; i <= f.q(); ++i)
    if (member[i]) distinct.push_back({i});

  std::vector<Mat2> out;
  Sl2Enumerator(f).for_each([&](const Mat2& g) {
    for (auto l : distinct)
      if (!member[image_line(f, g, l).index]) return;
    out.push_back(g);
  });
  MatrixSet result(std::move(out));
  if (m >= 3 && result.size() > lineset_bound(m)) {
    throw std::logic_error("line-set stabilizer of " + std::to_string(m) + " lines has " +
                           std::to_string(result.size()) + " elements");
  }
  return result;
}

SubgroupOrbits subgroup_orbits(const Field& f, const std::vector<Mat2>& generators,
                               std::uint64_t max_group) {
  for (const auto& g : generators)
    if (!is_sl2(f, g)) throw std::invalid_argument(format_matrix(g) + " is not in SL2");

  std::unordered_set<Mat2, Mat2Hash> seen{Mat2::identity()};
  std::deque<Mat2> frontier{Mat2::identity()};
  while (!frontier.empty()) {
    const Mat2 h = frontier.front();
    frontier.pop_front();
    for (const auto& g : generators) {
      const Mat2 next = compose(f, g, h);
      if (seen.insert(next).second) {
        if (seen.size() > max_group) {
          throw LimitError("generated subgroup exceeds " + std::to_string(max_group) + " elements");
        }
        frontier.push_back(next);
      }
    }
  }

  SubgroupOrbits out;
  out.group = MatrixSet(std::vector<Mat2>(seen.begin(), seen.end()));

  const std::uint32_t q = f.q();
  std::vector<char> visited(std::uint64_t{q} * q, 0);
  for (std::uint64_t code = 0; code < visited.size(); ++code) {
    if (visited[code]) continue;
    PointSet orbit(q);
    std::deque<Point2> queue{Point2::unpack(code, q)};
    visited[code] = 1;
    while (!queue.empty()) {
      const Point2 v = queue.front();
      queue.pop_front();
      orbit.insert(v);
      for (const auto& g : generators) {
        const Point2 w = apply(f, g, v);
        if (!visited[w.pack(q)]) {
          visited[w.pack(q)] = 1;
          queue.push_back(w);
        }
      }
    }
    const Point2 rep = Point2::unpack(code, q);
    std::uint64_t stab = 0;
    for (const auto& h : out.group)
      if (apply(f, h, rep) == rep) ++stab;
    if (orbit.size() * stab != out.group.size()) {
      throw std::logic_error("orbit-stabilizer identity fails at " + format_point(rep));
    }
    out.orbits.push_back(std::move(orbit));
  }
  return out;
}

const BoundRow& BoundReport::row(const std::string& name) const {
  for (const auto& r : rows)
    if (r.name == name) return r;
  throw std::out_of_range("no bound row named " + name);
}

bool BoundReport::any_violation() const {
  return std::any_of(rows.begin(), rows.end(), [](const BoundRow& r) { return r.violated; });
}

bool affinely_collinear(const Field& f, const PointSet& e) {
  const auto pts = e.points();
  if (pts.size() <= 2) return true;
  const Point2 p0 = pts[0], p1 = pts[1];
  const Elem dx = f.sub(p1.x, p0.x), dy = f.sub(p1.y, p0.y);
  for (std::size_t i = 2; i < pts.size(); ++i) {
    const Elem ex = f.sub(pts[i].x, p0.x), ey = f.sub(pts[i].y, p0.y);
    if (f.mul(ex, dy) != f.mul(ey, dx)) return false;
  }
  return true;
}

BoundReport bound_report(const Field& f, const PointSet& e, const BoundConstants& k) {
  return bound_report(f, e, k, stabilizer(f, e));
}

BoundReport bound_report(const Field& f, const PointSet& e, const BoundConstants& k,
                         const MatrixSet& r_e) {
  const LinePartition part = line_partition(f, e);
  BoundReport rep;
  rep.size_e = e.size();
  rep.size_e_nonzero = e.nonzero_size();
  rep.r_e = r_e.size();
  rep.lines_meeting = part.lines_meeting;
  rep.contained_in_origin_line = part.lines_meeting <= 1;
  rep.collinear = affinely_collinear(f, e);

  const double q = f.q();
  const double size = static_cast<double>(rep.size_e);
  const double nonzero = static_cast<double>(rep.size_e_nonzero);
  const double observed = static_cast<double>(rep.r_e);
  const std::uint64_t universe = std::uint64_t{f.q()} * f.q();

  auto push = [&](std::string name, bool applicable, double rhs, double obs, bool proved) {
    BoundRow row{std::move(name), applicable, rhs, obs, 0.0, false};
    if (applicable && rhs > 0) row.ratio = obs / rhs;
    row.violated = proved && applicable && obs > rhs;
    rep.rows.push_back(std::move(row));
  };

  const bool two_or_more = rep.lines_meeting >= 2;
  push("three-halves", two_or_more, std::pow(size, 1.5), observed, false);
  push("three-halves-nonzero", two_or_more, std::pow(nonzero, 1.5), observed, false);
  push("two-lines", rep.lines_meeting == 2, nonzero, observed, true);
  push("lineset", rep.lines_meeting >= 3,
       static_cast<double>(lineset_bound(rep.lines_meeting)), observed, true);

  const bool whole = rep.size_e == universe || (rep.size_e == universe - 1 && !e.has_origin());
  push("prime-power", two_or_more && !whole, std::pow(double(f.p()), f.r() - 1.0) * size,
       observed, true);
  push("quadratic", rep.size_e >= 1 && rep.size_e < universe, q * q, observed, false);

  const double contained = rep.contained_in_origin_line ? 1.0 : 0.0;
  struct Case {
    const char* name;
    double a, b;
  };
  const Case cases[] = {{"cor-i", 0.5, 0.75}, {"cor-ii", 2.0 / 3.0, 1.0},
                        {"cor-iii", 1.0, 1.5}, {"cor-iv", 4.0 / 3.0, 2.0},
                        {"threshold", k.alpha, k.beta}};
  for (const auto& cs : cases) {
    const bool exponent_ok = cs.b >= 1.5 * cs.a - 1e-12;
    const double threshold = k.c2 * std::pow(q, cs.b);
    const bool hyp = exponent_ok && size <= k.c1 * std::pow(q, cs.a) && observed >= threshold;
    BoundRow row{cs.name, hyp, threshold, contained, hyp ? contained : 0.0, false};
    rep.rows.push_back(row);
  }
  return rep;
}

namespace {

// True when the lines share exactly one point and it has third coordinate 0,
// the image of an upper triangular matrix, where f forgets the b entry.
bool meet_in_fixed_plane(const Field& f, const Line3& a, const Line3& b) {
  if (line_relation(f, a, b) != LineRelation::Intersecting) return false;
  for (const auto& v : a.points(f))
    if (b.contains(f, v)) return v.z == 0;
  return false;
}

}  // namespace

LineClassAudit audit_line_class(const Field& f, const PointSet& e, std::size_t m1, double c) {
  const PointSet nonzero = e.without_origin();
  const LinePartition part = line_partition(f, nonzero);
  auto it = part.classes.find(m1);
  if (m1 == 0 || it == part.classes.end()) {
    throw std::invalid_argument("no line class with multiplicity " + std::to_string(m1));
  }
  const std::vector<ProjLine>& class_lines = it->second;
  const std::uint32_t q = f.q();

  LineClassAudit audit;
  audit.m0 = class_lines.size();
  audit.m1 = m1;
  audit.c = c;

  const bool has_axis = std::any_of(class_lines.begin(), class_lines.end(), [&](ProjLine l) {
    return l.index == 0 || l.is_y_axis(q);
  });
  audit.normalization = (!has_axis && audit.m0 >= 2)
                            ? normalize_two_lines(f, class_lines[0], class_lines[1])
                            : Mat2::identity();
  const Mat2& g = audit.normalization;
  const PointSet moved = nonzero.image(f, g);

  std::vector<char> in_class(q + 1, 0);
  for (auto l : class_lines) in_class[image_line(f, g, l).index] = 1;

  PointSet pieces(q);  // union of the E_j
  std::vector<std::vector<Point2>> by_line(q + 1);
  for (auto v : moved.points()) {
    const auto idx = line_of_point(f, v).index;
    if (in_class[idx]) {
      pieces.insert(v);
      by_line[idx].push_back(v);
    }
  }

  auto on_axes = [](Point2 v) { return v.x == 0 || v.y == 0; };
  std::vector<Point2> b_set, c_set;
  for (std::uint32_t idx = 0; idx <= q; ++idx) {
    if (!in_class[idx]) continue;
    const Point2 a = by_line[idx].front();  // points() is ascending, so this is the smallest code
    audit.base_points.push_back(a);
    if (!on_axes(a)) b_set.push_back(a);
  }
  for (auto v : pieces.points())
    if (!on_axes(v)) c_set.push_back(v);
  audit.b_size = b_set.size();
  audit.c_size = c_set.size();

  // S: matrices sending every E_j onto some E_k, i.e. preserving their union.
  std::vector<Mat2> s_items;
  Sl2Enumerator(f).for_each([&](const Mat2& m) {
    if (pieces.preserved_by(f, m)) s_items.push_back(m);
  });
  const MatrixSet s(std::move(s_items));
  audit.s_size = s.size();
  std::vector<Point3> s1_points;
  for (const auto& m : s) {
    if (m.c != 0) {
      ++audit.s1_size;
      s1_points.push_back(f_map(m));
    } else {
      ++audit.s2_size;
    }
  }

  const MatrixSet r_e = stabilizer_fast(f, moved);
  audit.r_e_size = r_e.size();
  audit.r_e_in_s = r_e.is_subset_of(s);

  PointSet c_lookup = PointSet::from_points(q, c_set);
  for (auto u1 : b_set) {
    for (const auto& m : s) {
      if (c_lookup.contains(apply(f, m, u1))) {
        ++audit.omega;
        if (m.c == 0) ++audit.omega_s2_part;
      }
    }
  }

  std::vector<Line3> lines;
  lines.reserve(b_set.size() * c_set.size());
  for (auto u1 : b_set)
    for (auto u2 : c_set) lines.push_back(pair_line(f, u1, u2));
  std::vector<Line3> distinct = lines;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  audit.lines_size = distinct.size();
  audit.lines_distinct = distinct.size() == lines.size();
  audit.incidence_part = count_incidences(f, s1_points, distinct);

  const PlaneRichness rich = plane_richness(f, distinct);
  audit.plane_richness = rich.max_lines;
  audit.richness_witness = rich.witness;

  // Pair lines from one base point: targets on distinct origin lines give skew
  // lines; three targets on one origin line give parallel, non-coplanar lines.
  for (auto u : b_set) {
    for (std::size_t i = 0; i < c_set.size(); ++i) {
      const Line3 li = pair_line(f, u, c_set[i]);
      const auto line_i = line_of_point(f, c_set[i]);
      for (std::size_t j = i + 1; j < c_set.size(); ++j) {
        const Line3 lj = pair_line(f, u, c_set[j]);
        if (line_of_point(f, c_set[j]) != line_i) {
          ++audit.skew_pairs;
          if (line_relation(f, li, lj) != LineRelation::Skew) {
            ++audit.skew_failures;
            if (!meet_in_fixed_plane(f, li, lj)) ++audit.skew_failures_off_fixed_plane;
          }
          continue;
        }
        for (std::size_t k = j + 1; k < c_set.size(); ++k) {
          if (line_of_point(f, c_set[k]) != line_i) continue;
          const Line3 lk = pair_line(f, u, c_set[k]);
          ++audit.parallel_triples;
          const bool parallel = line_relation(f, li, lj) == LineRelation::Parallel &&
                                line_relation(f, li, lk) == LineRelation::Parallel &&
                                line_relation(f, lj, lk) == LineRelation::Parallel;
          if (!parallel || coplanar(f, li, lj, lk)) ++audit.parallel_failures;
        }
      }
    }
  }

  const double m0 = static_cast<double>(audit.m0), dm1 = static_cast<double>(m1);
  const double ss = static_cast<double>(audit.s_size);
  audit.lower_bound = (static_cast<std::int64_t>(audit.m0) - 4) * static_cast<std::int64_t>(audit.s_size);
  audit.upper_rhs = 2 * c * (std::pow(m0, 1.75) * std::pow(dm1, 0.75) * std::sqrt(ss) + m0 * m0 * dm1 + ss);
  audit.s_bound = 16 * c * c * std::pow(m0 * dm1, 1.5);
  audit.s_within_bound = ss <= audit.s_bound;
  return audit;
}

}  // namespace slab
