#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slab/gf.hpp"
#include "slab/plane.hpp"

namespace slab {

struct Point3 {
  Elem x = 0;
  Elem y = 0;
  Elem z = 0;

  Elem operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  Elem& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  bool is_zero() const { return x == 0 && y == 0 && z == 0; }
  std::uint64_t pack(std::uint32_t q) const {
    return (std::uint64_t{x} * q + y) * q + z;
  }
  static Point3 unpack(std::uint64_t code, std::uint32_t q) {
    return {static_cast<Elem>(code / (std::uint64_t{q} * q)), static_cast<Elem>((code / q) % q),
            static_cast<Elem>(code % q)};
  }
  auto operator<=>(const Point3&) const = default;
};

std::string format_point3(Point3 v);

/**
 * Affine line in F_q^3 in canonical form: the direction is scaled so its first
 * nonzero coordinate (index lead()) is 1, and the base point is slid along the
 * direction until base[lead()] = 0. Equal point sets give equal values.
 */
class Line3 {
 public:
  static Line3 through(const Field& f, Point3 base, Point3 dir);

  Point3 base() const { return base_; }
  Point3 dir() const { return dir_; }
  int lead() const { return lead_; }

  /// The q points base + t dir in increasing t.
  std::vector<Point3> points(const Field& f) const;
  bool contains(const Field& f, Point3 v) const;

  auto operator<=>(const Line3& o) const {
    if (auto c = base_ <=> o.base_; c != 0) return c;
    return dir_ <=> o.dir_;
  }
  bool operator==(const Line3& o) const { return base_ == o.base_ && dir_ == o.dir_; }

 private:
  Point3 base_;
  Point3 dir_;
  int lead_ = 0;
};

/// Affine plane {x : <normal, x> = offset} with the normal's first nonzero coordinate 1.
class Plane3 {
 public:
  static Plane3 make(const Field& f, Point3 normal, Elem offset);

  Point3 normal() const { return normal_; }
  Elem offset() const { return offset_; }
  bool contains(const Field& f, Point3 v) const;
  bool contains(const Field& f, const Line3& line) const;

  bool operator==(const Plane3&) const = default;

 private:
  Point3 normal_{1, 0, 0};
  Elem offset_ = 0;
};

std::string format_plane(const Plane3& p);

/// Canonical plane normals in sweep order: (1,a,b), then (0,1,b), then (0,0,1).
std::vector<Point3> plane_normals(const Field& f);

Elem dot(const Field& f, Point3 u, Point3 v);
Point3 cross(const Field& f, Point3 u, Point3 v);

/// (a b; c d) -> (a, d, c).
inline Point3 f_map(const Mat2& m) { return {m.a, m.d, m.c}; }

/**
 * Image under f_map of {theta : theta m1 = m2}: the line through
 * (u2/u1, u1/u2, v2/u1 - v1/u2) with direction (-v1/u1, v2/u2, -v1 v2/(u1 u2)).
 * Requires u1, u2 != 0 and (v1, v2) != (0, 0).
 */
Line3 pair_line(const Field& f, Point2 m1, Point2 m2);

/// Brute force {theta in SL2 : theta m1 = m2}; both points nonzero.
MatrixSet solution_set(const Field& f, Point2 m1, Point2 m2);

/// Sum over distinct lines of |P meet line| for distinct points; hashed membership.
std::uint64_t count_incidences(const Field& f, std::span<const Point3> points,
                               std::span<const Line3> lines);

/// Double loop over P x L walking each line's q points; the oracle for count_incidences.
std::uint64_t count_incidences_brute(const Field& f, std::span<const Point3> points,
                                     std::span<const Line3> lines);

inline constexpr std::uint32_t kExhaustivePlaneSweepMaxQ = 16;

struct PlaneRichness {
  std::uint64_t max_lines = 0;
  Plane3 witness;
  bool exhaustive_sweep = true;  // false: counted over planes through members of L
};

/**
 * Largest number of lines of L inside one affine plane. Up to q = 16 every
 * plane is swept; beyond that only the q + 1 planes through each member of L
 * are counted, which still gives the exact maximum when L is nonempty.
 */
PlaneRichness plane_richness(const Field& f, std::span<const Line3> lines,
                             std::uint32_t sweep_max_q = kExhaustivePlaneSweepMaxQ);
PlaneRichness plane_richness_pencil(const Field& f, std::span<const Line3> lines);

enum class LineRelation { Equal, Parallel, Intersecting, Skew };
const char* to_string(LineRelation r);

LineRelation line_relation(const Field& f, const Line3& l1, const Line3& l2);
bool coplanar(const Field& f, const Line3& l1, const Line3& l2);
/// Whether three lines lie in one common plane.
bool coplanar(const Field& f, const Line3& l1, const Line3& l2, const Line3& l3);

/// Line-class data of a planar set, for the plug-in columns.
struct LineClassData {
  std::uint64_t m0 = 0;
  std::uint64_t m1 = 0;
  std::uint64_t s_size = 0;  // |S|, the class-permuting matrices
};

struct IncidenceInstance {
  std::uint32_t q = 0;
  std::vector<Point3> points;
  std::vector<Line3> lines;
  std::uint64_t incidences = 0;
  PlaneRichness richness;
  std::optional<LineClassData> partition;
};

/// Deduplicates P and L, then counts incidences and plane richness.
IncidenceInstance make_incidence_instance(const Field& f, std::vector<Point3> points,
                                          std::vector<Line3> lines);

struct IncidenceRow {
  std::string name;
  bool applicable = false;
  double rhs = 0.0;
  double observed = 0.0;  // I, or |I - |P||L|/q^2| for the two-sided bound
  double ratio = 0.0;     // observed / rhs; 0 when rhs is 0
};

/**
 * Rows: mt-incidence (sqrt|P| |L|^{3/4} M^{1/4} + |P| + |L|), two-sided (q sqrt(|P||L|)), plane-limited
 * (|L||P|^{2/5} + |P|^{6/5}, needs M <= c sqrt|L|), balanced
 * ((|P||L|)^{11/15}, needs |P|^{7/8} < |L| < |P|^{8/7}); plus three plug-in
 * columns when partition data is attached.
 */
std::vector<IncidenceRow> incidence_bound_report(const IncidenceInstance& inst, double c = 1.0);

}  // namespace slab
