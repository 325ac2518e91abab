#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "slab/incidence3d.hpp"
#include "slab/rng.hpp"

using namespace slab;

namespace {

std::set<Point3> image_of_solutions(const Field& f, Point2 m1, Point2 m2) {
  std::set<Point3> out;
  for (const auto& m : sl2_elements(f))
    if (apply(f, m, m1) == m2) out.insert({m.a, m.d, m.c});
  return out;
}

std::set<Point3> point_set(const Field& f, const Line3& l) {
  const auto pts = l.points(f);
  return {pts.begin(), pts.end()};
}

Point3 axpy(const Field& f, Point3 base, Elem t, Point3 dir) {
  return {f.add(base.x, f.mul(t, dir.x)), f.add(base.y, f.mul(t, dir.y)),
          f.add(base.z, f.mul(t, dir.z))};
}

std::vector<Line3> all_lines(const Field& f) {
  const std::uint32_t q = f.q();
  const std::uint64_t cube = std::uint64_t{q} * q * q;
  std::set<Line3> lines;
  for (std::uint64_t b = 0; b < cube; ++b)
    for (const auto& n : plane_normals(f))  // canonical directions
      lines.insert(Line3::through(f, Point3::unpack(b, q), n));
  return {lines.begin(), lines.end()};
}

bool admissible(Point2 m1, Point2 m2) { return m1.x != 0 && m2.x != 0 && (m1.y != 0 || m2.y != 0); }

}  // namespace

TEST_CASE("f map") {
  CHECK(f_map(Mat2::identity()) == Point3{1, 1, 0});
  CHECK(f_map({1, 1, 0, 1}) == Point3{1, 1, 0});
  const Field f5 = Field::make(5, 1);
  CHECK(f_map(make_sl2(f5, 0, 4, 1, 0)) == Point3{0, 0, 1});

  for (auto [p, r] : {std::pair{3u, 1u}, {2u, 2u}, {5u, 1u}}) {
    const Field f = Field::make(p, r);
    std::map<Point3, int> fiber;
    for (const auto& m : sl2_elements(f)) ++fiber[f_map(m)];
    const std::uint32_t q = f.q();
    for (std::uint64_t code = 0; code < std::uint64_t{q} * q * q; ++code) {
      const Point3 v = Point3::unpack(code, q);
      const int n = fiber.count(v) ? fiber[v] : 0;
      if (v.z != 0)
        REQUIRE(n == 1);
      else
        REQUIRE(n == (f.mul(v.x, v.y) == 1 ? static_cast<int>(q) : 0));
    }
  }
}

TEST_CASE("pair lines") {
  const Field f5 = Field::make(5, 1);
  const Line3 l = pair_line(f5, {1, 0}, {1, 1});
  CHECK(l.dir() == Point3{0, 1, 0});
  CHECK(l.base() == Point3{1, 0, 1});
  for (Elem t = 0; t < 5; ++t) CHECK(l.contains(f5, {1, t, 1}));
  CHECK_THROWS_AS(pair_line(f5, {1, 0}, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(pair_line(f5, {0, 1}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(pair_line(f5, {1, 1}, {0, 1}), std::invalid_argument);

  for (auto [p, r] : {std::pair{3u, 1u}, {5u, 1u}}) {
    const Field f = Field::make(p, r);
    const std::uint64_t sq = std::uint64_t{f.q()} * f.q();
    for (std::uint64_t a = 1; a < sq; ++a)
      for (std::uint64_t b = 1; b < sq; ++b) {
        const Point2 m1 = Point2::unpack(a, f.q()), m2 = Point2::unpack(b, f.q());
        if (!admissible(m1, m2)) continue;
        REQUIRE(point_set(f, pair_line(f, m1, m2)) == image_of_solutions(f, m1, m2));
      }
  }
  for (auto [p, r] : {std::pair{7u, 1u}, {2u, 3u}, {3u, 2u}}) {
    const Field f = Field::make(p, r);
    const std::uint64_t sq = std::uint64_t{f.q()} * f.q();
    SplitMix64 rng(p + r);
    for (int i = 0; i < 40;) {
      const Point2 m1 = Point2::unpack(rng.below(sq), f.q()), m2 = Point2::unpack(rng.below(sq), f.q());
      if (!admissible(m1, m2)) continue;
      ++i;
      REQUIRE(point_set(f, pair_line(f, m1, m2)) == image_of_solutions(f, m1, m2));
    }
  }
}

TEST_CASE("pair lines from base points on distinct origin lines are distinct") {
  for (auto p : {3u, 5u}) {
    const Field f = Field::make(p, 1);
    const std::uint64_t sq = std::uint64_t{p} * p;
    std::vector<std::pair<Point2, Point2>> pairs;
    for (std::uint64_t a = 1; a < sq; ++a)
      for (std::uint64_t b = 1; b < sq; ++b)
        if (admissible(Point2::unpack(a, p), Point2::unpack(b, p)))
          pairs.push_back({Point2::unpack(a, p), Point2::unpack(b, p)});
    std::vector<Line3> lines;
    for (auto [m1, m2] : pairs) lines.push_back(pair_line(f, m1, m2));
    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (std::size_t j = i + 1; j < pairs.size(); ++j) {
        if (line_of_point(f, pairs[i].first) == line_of_point(f, pairs[j].first)) continue;
        REQUIRE(lines[i] != lines[j]);
      }
  }
}

TEST_CASE("solution sets") {
  const Field f3 = Field::make(3, 1);
  CHECK(solution_set(f3, {1, 0}, {1, 0}) == point_stabilizer(f3, {1, 0}).matrices);
  const auto s = solution_set(f3, {1, 0}, {0, 1});
  CHECK(s.size() == 3);
  for (const auto& m : s) CHECK(apply(f3, m, {1, 0}) == Point2{0, 1});
  for (std::uint64_t a = 1; a < 9; ++a)
    for (std::uint64_t b = 1; b < 9; ++b)
      REQUIRE(solution_set(f3, Point2::unpack(a, 3), Point2::unpack(b, 3)).size() == 3);
}

TEST_CASE("line canonical form") {
  const Field f = Field::make(7, 1);
  SplitMix64 rng(9);
  for (int i = 0; i < 2000; ++i) {
    const Point3 base = Point3::unpack(rng.below(343), 7);
    const Point3 dir = Point3::unpack(1 + rng.below(342), 7);
    const Line3 l = Line3::through(f, base, dir);
    const Elem t = static_cast<Elem>(rng.below(7));
    const Elem s = static_cast<Elem>(1 + rng.below(6));
    const Point3 scaled{f.mul(s, dir.x), f.mul(s, dir.y), f.mul(s, dir.z)};
    REQUIRE(Line3::through(f, axpy(f, base, t, dir), scaled) == l);
    REQUIRE(Line3::through(f, l.base(), l.dir()) == l);
    REQUIRE(l.dir()[l.lead()] == 1);
    REQUIRE(l.base()[l.lead()] == 0);
    REQUIRE(point_set(f, l).size() == 7);
    REQUIRE(l.contains(f, base));
  }
  CHECK_THROWS_AS(Line3::through(f, {1, 2, 3}, {0, 0, 0}), std::invalid_argument);
}

TEST_CASE("incidence counting") {
  const Field f3 = Field::make(3, 1);
  std::vector<Point3> every;
  for (std::uint64_t c = 0; c < 27; ++c) every.push_back(Point3::unpack(c, 3));
  const std::vector<Line3> two{Line3::through(f3, {0, 0, 0}, {1, 0, 0}),
                               Line3::through(f3, {0, 1, 2}, {1, 1, 1})};
  CHECK(count_incidences(f3, every, two) == 6);
  const auto on_line = two[0].points(f3);
  CHECK(count_incidences(f3, on_line, std::vector<Line3>{two[0]}) == 3);
  const std::vector<Point3> off{{0, 2, 2}, {1, 2, 2}};
  CHECK(count_incidences(f3, off, std::vector<Line3>{two[0]}) == 0);

  for (auto p : {3u, 5u}) {
    const Field f = Field::make(p, 1);
    const std::uint64_t cube = std::uint64_t{p} * p * p;
    SplitMix64 rng(p);
    for (int i = 0; i < 200; ++i) {
      std::set<Point3> pts;
      std::set<Line3> lines;
      const auto np = rng.below(cube), nl = 1 + rng.below(30);
      for (std::uint64_t k = 0; k < np; ++k) pts.insert(Point3::unpack(rng.below(cube), p));
      for (std::uint64_t k = 0; k < nl; ++k)
        lines.insert(Line3::through(f, Point3::unpack(rng.below(cube), p),
                                    Point3::unpack(1 + rng.below(cube - 1), p)));
      const std::vector<Point3> pv(pts.begin(), pts.end());
      const std::vector<Line3> lv(lines.begin(), lines.end());
      std::uint64_t naive = 0;
      for (const auto& l : lv)
        for (const auto& v : pv) naive += l.contains(f, v);
      REQUIRE(count_incidences(f, pv, lv) == naive);
      REQUIRE(count_incidences_brute(f, pv, lv) == naive);
    }
  }
}

TEST_CASE("plane structure") {
  for (auto [p, r] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}}) {
    const Field f = Field::make(p, r);
    const std::uint32_t q = f.q();
    const auto normals = plane_normals(f);
    REQUIRE(normals.size() == q * q + q + 1);
    const auto lines = all_lines(f);
    REQUIRE(lines.size() == std::uint64_t{q} * q * (q * q + q + 1));
    for (const auto& n : normals)
      for (Elem s = 0; s < q; ++s) {
        const Plane3 plane = Plane3::make(f, n, s);
        std::uint64_t pts = 0, in = 0;
        for (std::uint64_t c = 0; c < std::uint64_t{q} * q * q; ++c)
          pts += plane.contains(f, Point3::unpack(c, q));
        for (const auto& l : lines) in += plane.contains(f, l);
        REQUIRE(pts == std::uint64_t{q} * q);
        REQUIRE(in == std::uint64_t{q} * (q + 1));
      }
  }
}

TEST_CASE("plane richness") {
  const Field f5 = Field::make(5, 1);
  std::vector<Line3> vertical;
  for (Elem x = 0; x < 5; ++x)
    for (Elem y = 0; y < 5; ++y) vertical.push_back(Line3::through(f5, {x, y, 0}, {0, 0, 1}));
  const auto rv = plane_richness(f5, vertical);
  CHECK(rv.max_lines == 5);
  CHECK(rv.exhaustive_sweep);
  CHECK(rv.witness.normal().z == 0);
  CHECK(plane_richness_pencil(f5, vertical).max_lines == 5);

  CHECK(plane_richness(f5, std::vector<Line3>{vertical[3]}).max_lines == 1);
  CHECK(plane_richness(f5, std::vector<Line3>{}).max_lines == 0);

  for (auto [p, r] : {std::pair{3u, 1u}, {5u, 1u}, {2u, 2u}}) {
    const Field f = Field::make(p, r);
    const std::uint32_t q = f.q();
    const std::uint64_t cube = std::uint64_t{q} * q * q;
    SplitMix64 rng(q * 7);
    for (int i = 0; i < 30; ++i) {
      std::set<Line3> lines;
      for (std::uint64_t k = 0, n = 1 + rng.below(25); k < n; ++k)
        lines.insert(Line3::through(f, Point3::unpack(rng.below(cube), q),
                                    Point3::unpack(1 + rng.below(cube - 1), q)));
      const std::vector<Line3> lv(lines.begin(), lines.end());
      const auto sweep = plane_richness(f, lv);
      const auto pencil = plane_richness_pencil(f, lv);
      REQUIRE(sweep.max_lines == pencil.max_lines);
      std::uint64_t in = 0;
      for (const auto& l : lv) in += sweep.witness.contains(f, l);
      REQUIRE(in == sweep.max_lines);
    }
  }
}

TEST_CASE("line relations") {
  const Field f5 = Field::make(5, 1);
  const Line3 xaxis = Line3::through(f5, {0, 0, 0}, {1, 0, 0});
  CHECK(line_relation(f5, xaxis, Line3::through(f5, {0, 1, 0}, {0, 0, 1})) == LineRelation::Skew);
  CHECK(line_relation(f5, xaxis, Line3::through(f5, {0, 1, 0}, {2, 0, 0})) == LineRelation::Parallel);
  CHECK(line_relation(f5, xaxis, Line3::through(f5, {3, 0, 0}, {0, 1, 1})) ==
        LineRelation::Intersecting);
  CHECK(line_relation(f5, xaxis, Line3::through(f5, {4, 0, 0}, {3, 0, 0})) == LineRelation::Equal);
  CHECK(std::string(to_string(LineRelation::Skew)) == "skew");

  const Line3 a = Line3::through(f5, {0, 0, 0}, {1, 0, 0});
  const Line3 b = Line3::through(f5, {0, 1, 0}, {1, 0, 0});
  const Line3 c = Line3::through(f5, {0, 2, 0}, {1, 0, 0});
  const Line3 d = Line3::through(f5, {0, 0, 1}, {1, 0, 0});
  CHECK(coplanar(f5, a, b, c));
  CHECK_FALSE(coplanar(f5, a, b, d));
}

TEST_CASE("pair lines from one base point") {
  // Targets on distinct origin lines give skew lines, except when the targets
  // share their second coordinate: then both lines pass through one image of an
  // upper triangular matrix, a point with third coordinate 0.
  for (auto p : {5u, 7u}) {
    const Field f = Field::make(p, 1);
    std::vector<Point2> off_axes;
    for (Elem x = 1; x < p; ++x)
      for (Elem y = 1; y < p; ++y) off_axes.push_back({x, y});
    std::uint64_t meeting = 0;
    for (auto u : off_axes)
      for (std::size_t i = 0; i < off_axes.size(); ++i)
        for (std::size_t j = i + 1; j < off_axes.size(); ++j) {
          const Point2 v = off_axes[i], w = off_axes[j];
          const Line3 lv = pair_line(f, u, v), lw = pair_line(f, u, w);
          if (line_of_point(f, v) == line_of_point(f, w)) {
            REQUIRE(line_relation(f, lv, lw) == LineRelation::Parallel);
            continue;
          }
          if (v.y != w.y) {
            REQUIRE(line_relation(f, lv, lw) == LineRelation::Skew);
            continue;
          }
          ++meeting;
          REQUIRE(line_relation(f, lv, lw) == LineRelation::Intersecting);
          std::set<Point3> common;
          for (auto z : lv.points(f))
            if (lw.contains(f, z)) common.insert(z);
          REQUIRE(common.size() == 1);
          REQUIRE(common.begin()->z == 0);
        }
    CHECK(meeting > 0);

    // Three targets on one origin line: pairwise parallel and never coplanar.
    for (auto u : off_axes)
      for (Elem slope = 1; slope < p; ++slope)
        for (Elem x1 = 1; x1 < p; ++x1)
          for (Elem x2 = x1 + 1; x2 < p; ++x2)
            for (Elem x3 = x2 + 1; x3 < p; ++x3) {
              const Line3 l1 = pair_line(f, u, {x1, f.mul(slope, x1)});
              const Line3 l2 = pair_line(f, u, {x2, f.mul(slope, x2)});
              const Line3 l3 = pair_line(f, u, {x3, f.mul(slope, x3)});
              REQUIRE(line_relation(f, l1, l2) == LineRelation::Parallel);
              REQUIRE(line_relation(f, l2, l3) == LineRelation::Parallel);
              REQUIRE_FALSE(coplanar(f, l1, l2, l3));
            }
  }
}

TEST_CASE("incidence bound report") {
  const Field f3 = Field::make(3, 1);
  std::vector<Point3> every;
  for (std::uint64_t c = 0; c < 27; ++c) every.push_back(Point3::unpack(c, 3));
  const auto inst = make_incidence_instance(f3, every, {Line3::through(f3, {0, 0, 0}, {1, 1, 0})});
  CHECK(inst.incidences == 3);
  CHECK(inst.richness.max_lines == 1);
  const auto rows = incidence_bound_report(inst);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].name == "mt-incidence");
  CHECK(rows[0].rhs == doctest::Approx(std::sqrt(27.0) + 28.0));
  CHECK(rows[0].ratio <= 1.0 / 9.0);
  CHECK(rows[1].name == "two-sided");
  CHECK(rows[1].observed == doctest::Approx(0.0));
  CHECK(rows[1].rhs == doctest::Approx(3 * std::sqrt(27.0)));
  CHECK(rows[2].name == "plane-limited");
  CHECK(rows[2].applicable);
  CHECK_FALSE(incidence_bound_report(inst, 0.5)[2].applicable);
  CHECK(rows[3].name == "balanced");
  CHECK_FALSE(rows[3].applicable);

  // |L| = |P|^2 is outside the balanced window.
  std::vector<Point3> few{{0, 0, 0}, {1, 0, 0}};
  std::vector<Line3> four;
  for (const auto& d : std::vector<Point3>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}})
    four.push_back(Line3::through(f3, {0, 0, 0}, d));
  auto sq = make_incidence_instance(f3, few, four);
  CHECK_FALSE(incidence_bound_report(sq)[3].applicable);

  // Balanced window: |P| = |L|.
  std::vector<Point3> pts4{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  auto bal = make_incidence_instance(f3, pts4, four);
  const auto brows = incidence_bound_report(bal);
  CHECK(brows[3].applicable);
  CHECK(brows[3].rhs == doctest::Approx(std::pow(16.0, 11.0 / 15.0)));
  CHECK(bal.incidences == 7);
  CHECK(brows[1].observed == doctest::Approx(7.0 - 16.0 / 9.0));

  bal.partition = LineClassData{4, 2, 24};
  const auto prow = incidence_bound_report(bal);
  REQUIRE(prow.size() == 7);
  CHECK(prow[4].rhs == doctest::Approx(18.0));
  CHECK(prow[4].observed == doctest::Approx(24.0));
  CHECK(prow[5].rhs == doctest::Approx(std::pow(8.0, 5.0 / 3.0)));
  CHECK(prow[6].rhs == doctest::Approx(std::pow(4.0, 1.75) * std::pow(2.0, 2.75)));
}
