#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slab/gf.hpp"

namespace slab {

class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kMaxStreamedSl2 = 1'000'000'000;
inline constexpr std::uint64_t kMaxMaterializedSl2 = 10'000'000;

struct Point2 {
  Elem x = 0;
  Elem y = 0;

  bool is_origin() const { return x == 0 && y == 0; }
  std::uint64_t pack(std::uint32_t q) const { return std::uint64_t{x} * q + y; }
  static Point2 unpack(std::uint64_t code, std::uint32_t q) {
    return {static_cast<Elem>(code / q), static_cast<Elem>(code % q)};
  }
  auto operator<=>(const Point2&) const = default;
};

/// Row-major 2x2 matrix (a b; c d).
struct Mat2 {
  Elem a = 1;
  Elem b = 0;
  Elem c = 0;
  Elem d = 1;

  static Mat2 identity() { return {}; }
  auto operator<=>(const Mat2&) const = default;
};

struct Mat2Hash {
  std::size_t operator()(const Mat2& m) const noexcept {
    std::uint64_t k = (std::uint64_t{m.a} << 48) ^ (std::uint64_t{m.b} << 32) ^
                      (std::uint64_t{m.c} << 16) ^ m.d;
    return std::hash<std::uint64_t>{}(k * 0x9E3779B97F4A7C15ull);
  }
};

Elem det(const Field& f, const Mat2& m);
/// Builds (a b; c d) and checks ad - bc = 1.
Mat2 make_sl2(const Field& f, Elem a, Elem b, Elem c, Elem d);
bool is_sl2(const Field& f, const Mat2& m);
/// Matrix product lhs * rhs, i.e. apply rhs first.
Mat2 compose(const Field& f, const Mat2& lhs, const Mat2& rhs);
/// Inverse of an SL2 element: (d -b; -c a).
Mat2 invert(const Field& f, const Mat2& m);

inline Point2 apply(const Field& f, const Mat2& m, Point2 v) {
  return {f.add(f.mul(m.a, v.x), f.mul(m.b, v.y)), f.add(f.mul(m.c, v.x), f.mul(m.d, v.y))};
}

/// Finite set of SL2 elements, stored sorted and deduplicated.
class MatrixSet {
 public:
  MatrixSet() = default;
  explicit MatrixSet(std::vector<Mat2> items);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool contains(const Mat2& m) const;
  bool is_subset_of(const MatrixSet& other) const;

  const std::vector<Mat2>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  bool operator==(const MatrixSet&) const = default;

 private:
  std::vector<Mat2> items_;
};

/// Conjugates every member: {g m g^-1}.
MatrixSet conjugate(const Field& f, const MatrixSet& set, const Mat2& g);

/// True when the set is closed under products and inverses (exhaustive over pairs).
bool is_closed_group(const Field& f, const MatrixSet& set);

/**
 * Index-addressable enumeration of SL2(F_q), q^3 - q elements.
 *
 * Indices [0, (q-1) q^2) run over a != 0 in lexicographic (a, b, c) order with
 * d = (1 + bc) / a. The remaining q(q-1) indices are the a = 0 sweep in
 * lexicographic (b, d) order with c = -1/b.
 */
class Sl2Enumerator {
 public:
  explicit Sl2Enumerator(const Field& f, std::uint64_t max_count = kMaxStreamedSl2);

  std::uint64_t size() const { return size_; }
  Mat2 at(std::uint64_t index) const;

  template <typename Fn>
  void for_each(std::uint64_t begin, std::uint64_t end, Fn&& fn) const {
    for (std::uint64_t i = begin; i < end; ++i) fn(at(i));
  }
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for_each(0, size_, std::forward<Fn>(fn));
  }

 private:
  const Field* field_;
  std::uint64_t size_;
  std::uint64_t nonzero_sweep_;
};

/// Every SL2 element, in enumeration order.
std::vector<Mat2> sl2_elements(const Field& f, std::uint64_t max_count = kMaxMaterializedSl2);

/// Line through the origin: index t < q is the line spanned by (1, t); index q is the y-axis.
struct ProjLine {
  std::uint32_t index = 0;

  static ProjLine x_axis() { return {0}; }
  static ProjLine y_axis(std::uint32_t q) { return {q}; }
  bool is_y_axis(std::uint32_t q) const { return index == q; }
  auto operator<=>(const ProjLine&) const = default;
};

std::vector<ProjLine> proj_lines(const Field& f);
/// Throws std::invalid_argument for the origin.
ProjLine line_of_point(const Field& f, Point2 v);
/// Canonical spanning vector (1, t) or (0, 1).
Point2 line_direction(const Field& f, ProjLine line);
/// All q points, origin first.
std::vector<Point2> points_on_line(const Field& f, ProjLine line);
ProjLine image_line(const Field& f, const Mat2& m, ProjLine line);

/// g in SL2 with g(first) = x-axis and g(second) = y-axis.
Mat2 normalize_two_lines(const Field& f, ProjLine first, ProjLine second);

struct PointStabilizer {
  MatrixSet matrices;
  bool origin = false;  // stabilizer of the origin is all of SL2
};

/// {theta : theta x = x}, computed as a conjugate of the unipotent family fixing (1,0).
PointStabilizer point_stabilizer(const Field& f, Point2 x);

/// Subset of F_q^2 as a bitset over packed point codes.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::uint32_t q);
  static PointSet full(std::uint32_t q);
  static PointSet from_points(std::uint32_t q, const std::vector<Point2>& points);
  /// Bit i of mask is packed code i; requires q^2 <= 64.
  static PointSet from_mask(std::uint32_t q, std::uint64_t mask);

  std::uint32_t q() const { return q_; }
  std::uint64_t universe() const { return std::uint64_t{q_} * q_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(Point2 v) const { return contains_code(v.pack(q_)); }
  bool contains_code(std::uint64_t code) const {
    return (words_[code >> 6] >> (code & 63)) & 1u;
  }
  void insert(Point2 v);
  void erase(Point2 v);

  bool has_origin() const { return count_ > 0 && contains_code(0); }
  std::size_t nonzero_size() const { return count_ - (has_origin() ? 1 : 0); }
  PointSet without_origin() const;
  PointSet complement() const;

  /// Members in ascending packed-code order.
  std::vector<Point2> points() const;
  /// Smallest nonzero member; requires one to exist.
  Point2 first_nonzero() const;

  /// theta(E) as a new set.
  PointSet image(const Field& f, const Mat2& m) const;
  /// theta(E) = E, tested by theta(E) being contained in E.
  bool preserved_by(const Field& f, const Mat2& m) const;

  bool operator==(const PointSet& other) const {
    return q_ == other.q_ && words_ == other.words_;
  }

 private:
  std::uint32_t q_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

std::string format_point(Point2 v);
std::string format_matrix(const Mat2& m);
std::string format_point_list(const std::vector<Point2>& pts);
/// Parses "(x,y)"; codes are checked against q.
Point2 parse_point(std::string_view text, std::uint32_t q);
/// Parses "[a,b;c,d]".
Mat2 parse_matrix(std::string_view text, std::uint32_t q);

}  // namespace slab
