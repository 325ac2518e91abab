#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "slab/gf.hpp"
#include "slab/incidence3d.hpp"
#include "slab/plane.hpp"

namespace slab {

/// Lines through the origin meeting E \ {0}, grouped by how many points they carry.
struct LinePartition {
  std::map<std::size_t, std::vector<ProjLine>> classes;  // m1 -> lines, ascending index
  std::vector<std::size_t> multiplicity;                 // per ProjLine index, length q + 1
  std::size_t lines_meeting = 0;
  std::size_t nonzero_points = 0;

  std::size_t m0(std::size_t m1) const {
    auto it = classes.find(m1);
    return it == classes.end() ? 0 : it->second.size();
  }
  std::vector<ProjLine> meeting_lines() const;
};

LinePartition line_partition(const Field& f, const PointSet& e);

/// R_E by filtering every SL2 element. Closure is spot-checked; failure throws std::logic_error.
MatrixSet stabilizer_brute(const Field& f, const PointSet& e);

/**
 * R_E from the transporters of one base point. Every theta in R_E sends the
 * base point m to some m' in E \ {0}; the q solutions of theta m = m' are read
 * off the linear system (first coordinate of m nonzero) and each is tested.
 * Throws std::invalid_argument when E \ {0} is empty.
 */
MatrixSet stabilizer_fast(const Field& f, const PointSet& e);

/// stabilizer_fast, or all of SL2 when E \ {0} is empty.
MatrixSet stabilizer(const Field& f, const PointSet& e);

/// The q matrices with theta m1 = m2; m1 must have a nonzero first coordinate.
std::vector<Mat2> transporters(const Field& f, Point2 m1, Point2 m2);

/// Checks inverses of every member and products of up to `pairs` member pairs.
bool spot_check_group(const Field& f, const MatrixSet& set, std::size_t pairs = 64);

/// 2 m^3 (m-1)^2.
std::uint64_t lineset_bound(std::uint64_t m);

/// {theta : theta permutes the given lines}. For three or more lines the size
/// bound 2 m^3 (m-1)^2 is checked and a violation throws std::logic_error.
MatrixSet lineset_stabilizer(const Field& f, const std::vector<ProjLine>& lines);

struct SubgroupOrbits {
  MatrixSet group;
  std::vector<PointSet> orbits;  // ordered by smallest member
};

/// Closure of the generators and the orbit partition of F_q^2; asserts
/// |H| = |orbit| |stabilizer| for a representative of each orbit.
SubgroupOrbits subgroup_orbits(const Field& f, const std::vector<Mat2>& generators,
                               std::uint64_t max_group = kMaxMaterializedSl2);

struct BoundConstants {
  double c = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double alpha = 1.0;
  double beta = 1.5;
};

struct BoundRow {
  std::string name;
  bool applicable = false;
  double rhs = 0.0;
  double observed = 0.0;
  double ratio = 0.0;
  bool violated = false;  // only proved bounds can be violated
};

/**
 * Rows, in order:
 *   three-halves          |R_E| / |E|^{3/2}, needs >= 2 lines through 0 meeting E \ {0}
 *   three-halves-nonzero  same with |E \ {0}|
 *   two-lines             |R_E| <= |E \ {0}| when exactly 2 lines meet E \ {0}
 *   lineset               |R_E| <= 2m^3(m-1)^2 for m >= 3 meeting lines
 *   prime-power           |R_E| <= p^{r-1}|E| unless E is F_q^2 or F_q^2 \ {0}
 *   quadratic             |R_E| / q^2, E and its complement nonempty
 *   cor-i .. cor-iv       |E| <= c1 q^a and |R_E| >= c2 q^b for (a, b) in
 *                         (1/2, 3/4), (2/3, 1), (1, 3/2), (4/3, 2); observed is 1
 *                         when E lies in a line through the origin
 *   threshold             same with the supplied alpha, beta (needs beta >= 3 alpha / 2)
 */
struct BoundReport {
  std::uint64_t size_e = 0;
  std::uint64_t size_e_nonzero = 0;
  std::uint64_t r_e = 0;
  std::uint64_t lines_meeting = 0;
  bool contained_in_origin_line = false;  // at most one line through 0 meets E \ {0}
  bool collinear = false;                 // E lies in some affine line
  std::vector<BoundRow> rows;

  const BoundRow& row(const std::string& name) const;
  bool any_violation() const;
};

bool affinely_collinear(const Field& f, const PointSet& e);

BoundReport bound_report(const Field& f, const PointSet& e, const BoundConstants& k,
                         const MatrixSet& r_e);
BoundReport bound_report(const Field& f, const PointSet& e, const BoundConstants& k = {});

/**
 * Counting audit of one line class (m0 lines, m1 points each) of E \ {0}.
 *
 * S is the set of matrices permuting the class pieces E_j, split by whether
 * the x-axis is fixed (S2) or not (S1). B holds one base point per piece and C
 * all class points, both off the coordinate axes. Omega is the set of triples
 * (u1, u2, theta) in B x C x S with theta u1 = u2; its S1 part is recounted as
 * incidences between f(S1) and the pair lines L from B x C.
 */
struct LineClassAudit {
  std::uint64_t m0 = 0;
  std::uint64_t m1 = 0;
  Mat2 normalization;
  std::vector<Point2> base_points;
  std::uint64_t b_size = 0;
  std::uint64_t c_size = 0;
  std::uint64_t s_size = 0;
  std::uint64_t s1_size = 0;
  std::uint64_t s2_size = 0;
  std::uint64_t r_e_size = 0;
  bool r_e_in_s = false;
  std::uint64_t omega = 0;
  std::uint64_t omega_s2_part = 0;
  std::uint64_t incidence_part = 0;
  std::uint64_t lines_size = 0;
  bool lines_distinct = false;
  std::uint64_t plane_richness = 0;
  Plane3 richness_witness;
  std::int64_t lower_bound = 0;
  double c = 1.0;
  double upper_rhs = 0.0;
  double s_bound = 0.0;
  bool s_within_bound = false;
  std::uint64_t skew_pairs = 0;
  std::uint64_t skew_failures = 0;
  std::uint64_t skew_failures_off_fixed_plane = 0;  // not meeting at a point with z = 0
  std::uint64_t parallel_triples = 0;
  std::uint64_t parallel_failures = 0;

  bool decomposition_exact() const { return omega == omega_s2_part + incidence_part; }
  bool lower_bound_holds() const { return static_cast<std::int64_t>(omega) >= lower_bound; }
  bool s2_part_bounded() const {
    return omega_s2_part <= b_size * c_size && b_size * c_size <= m0 * m0 * m1;
  }
  bool richness_bounded() const { return plane_richness <= 2 * m0; }
  /// Pair lines from one base point to targets on distinct origin lines never share a point.
  bool skew_claim_holds() const { return skew_failures == 0; }
  /// Every structural identity (not the c-dependent s_within_bound). Non-skew
  /// pairs are tolerated when they meet in the plane z = 0, which holds no
  /// point of f(S1).
  bool holds() const {
    return r_e_in_s && decomposition_exact() && lower_bound_holds() && s2_part_bounded() &&
           richness_bounded() && lines_distinct && skew_failures_off_fixed_plane == 0 &&
           parallel_failures == 0;
  }
};

LineClassAudit audit_line_class(const Field& f, const PointSet& e, std::size_t m1, double c = 1.0);

}  // namespace slab
