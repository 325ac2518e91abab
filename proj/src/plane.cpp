#include "slab/plane.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <sstream>

namespace slab {

Elem det(const Field& f, const Mat2& m) { return f.sub(f.mul(m.a, m.d), f.mul(m.b, m.c)); }

bool is_sl2(const Field& f, const Mat2& m) {
  return f.contains(m.a) && f.contains(m.b) && f.contains(m.c) && f.contains(m.d) &&
         det(f, m) == f.one();
}

Mat2 make_sl2(const Field& f, Elem a, Elem b, Elem c, Elem d) {
  Mat2 m{a, b, c, d};
  if (!is_sl2(f, m)) throw std::invalid_argument(format_matrix(m) + " is not in SL2");
  return m;
}

Mat2 compose(const Field& f, const Mat2& l, const Mat2& r) {
  return {f.add(f.mul(l.a, r.a), f.mul(l.b, r.c)), f.add(f.mul(l.a, r.b), f.mul(l.b, r.d)),
          f.add(f.mul(l.c, r.a), f.mul(l.d, r.c)), f.add(f.mul(l.c, r.b), f.mul(l.d, r.d))};
}

Mat2 invert(const Field& f, const Mat2& m) { return {m.d, f.neg(m.b), f.neg(m.c), m.a}; }

MatrixSet::MatrixSet(std::vector<Mat2> items) : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool MatrixSet::contains(const Mat2& m) const {
  return std::binary_search(items_.begin(), items_.end(), m);
}

bool MatrixSet::is_subset_of(const MatrixSet& other) const {
  return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
}

MatrixSet conjugate(const Field& f, const MatrixSet& set, const Mat2& g) {
  const Mat2 g_inv = invert(f, g);
  std::vector<Mat2> out;
  out.reserve(set.size());
  for (const auto& m : set) out.push_back(compose(f, compose(f, g, m), g_inv));
  return MatrixSet(std::move(out));
}

bool is_closed_group(const Field& f, const MatrixSet& set) {
  if (set.empty()) return false;
  for (const auto& x : set) {
    if (!set.contains(invert(f, x))) return false;
    for (const auto& y : set) {
      if (!set.contains(compose(f, x, y))) return false;
    }
  }
  return true;
}

Sl2Enumerator::Sl2Enumerator(const Field& f, std::uint64_t max_count) : field_(&f) {
  const std::uint64_t q = f.q();
  size_ = q * q * q - q;
  nonzero_sweep_ = (q - 1) * q * q;
  if (size_ > max_count) {
    throw LimitError("|SL2(F_" + std::to_string(q) + ")| = " + std::to_string(size_) +
                     " exceeds enumeration maximum " + std::to_string(max_count));
  }
}

Mat2 Sl2Enumerator::at(std::uint64_t i) const {
  const Field& f = *field_;
  const std::uint64_t q = f.q();
  if (i < nonzero_sweep_) {
    const Elem a = static_cast<Elem>(1 + i / (q * q));
    const Elem b = static_cast<Elem>((i / q) % q);
    const Elem c = static_cast<Elem>(i % q);
    const Elem d = f.div(f.add(f.one(), f.mul(b, c)), a);
    return {a, b, c, d};
  }
  const std::uint64_t j = i - nonzero_sweep_;
  const Elem b = static_cast<Elem>(1 + j / q);
  const Elem d = static_cast<Elem>(j % q);
  return {0, b, f.neg(f.inv(b)), d};
}

std::vector<Mat2> sl2_elements(const Field& f, std::uint64_t max_count) {
  Sl2Enumerator en(f, max_count);
  std::vector<Mat2> out;
  out.reserve(en.size());
  en.for_each([&](const Mat2& m) { out.push_back(m); });
  return out;
}

std::vector<ProjLine> proj_lines(const Field& f) {
  std::vector<ProjLine> out;
  out.reserve(f.q() + 1);
  for (std::uint32_t i = 0; i <= f.q(); ++i) out.push_back({i});
  return out;
}

ProjLine line_of_point(const Field& f, Point2 v) {
  if (v.is_origin()) throw std::invalid_argument("the origin lies on every line");
  if (v.x == 0) return ProjLine::y_axis(f.q());
  return {f.div(v.y, v.x)};
}

Point2 line_direction(const Field& f, ProjLine line) {
  if (line.is_y_axis(f.q())) return {0, 1};
  return {1, line.index};
}

std::vector<Point2> points_on_line(const Field& f, ProjLine line) {
  const Point2 dir = line_direction(f, line);
  std::vector<Point2> out;
  out.reserve(f.q());
  for (Elem t = 0; t < f.q(); ++t) out.push_back({f.mul(t, dir.x), f.mul(t, dir.y)});
  return out;
}

ProjLine image_line(const Field& f, const Mat2& m, ProjLine line) {
  return line_of_point(f, apply(f, m, line_direction(f, line)));
}

Mat2 normalize_two_lines(const Field& f, ProjLine first, ProjLine second) {
  if (first == second) throw std::invalid_argument("normalize_two_lines needs distinct lines");
  const Point2 v1 = line_direction(f, first);
  const Point2 v2 = line_direction(f, second);
  // N has columns v1 and v2 / det[v1 v2], so det N = 1; the answer is N^-1.
  const Elem dv = f.sub(f.mul(v1.x, v2.y), f.mul(v2.x, v1.y));
  const Elem s = f.inv(dv);
  const Mat2 n{v1.x, f.mul(v2.x, s), v1.y, f.mul(v2.y, s)};
  return invert(f, n);
}

PointStabilizer point_stabilizer(const Field& f, Point2 x) {
  PointStabilizer out;
  if (x.is_origin()) {
    out.origin = true;
    out.matrices = MatrixSet(sl2_elements(f));
    return out;
  }
  // N e = x with e = (1,0) and det N = 1, so Stab(x) = N Stab(e) N^-1.
  Mat2 n = x.x != 0 ? Mat2{x.x, 0, x.y, f.inv(x.x)} : Mat2{0, f.neg(f.inv(x.y)), x.y, 0};
  std::vector<Mat2> unipotent;
  unipotent.reserve(f.q());
  for (Elem alpha = 0; alpha < f.q(); ++alpha) unipotent.push_back({1, alpha, 0, 1});
  out.matrices = conjugate(f, MatrixSet(std::move(unipotent)), n);
  return out;
}

PointSet::PointSet(std::uint32_t q) : q_(q), words_((universe() + 63) / 64, 0) {}

PointSet PointSet::full(std::uint32_t q) {
  PointSet s(q);
  for (std::uint64_t c = 0; c < s.universe(); ++c) s.words_[c >> 6] |= std::uint64_t{1} << (c & 63);
  s.count_ = s.universe();
  return s;
}

PointSet PointSet::from_points(std::uint32_t q, const std::vector<Point2>& points) {
  PointSet s(q);
  for (auto v : points) s.insert(v);
  return s;
}

PointSet PointSet::from_mask(std::uint32_t q, std::uint64_t mask) {
  PointSet s(q);
  if (s.universe() > 64) throw std::invalid_argument("from_mask requires q^2 <= 64");
  if (s.universe() < 64) mask &= (std::uint64_t{1} << s.universe()) - 1;
  s.words_[0] = mask;
  s.count_ = static_cast<std::size_t>(std::popcount(mask));
  return s;
}

void PointSet::insert(Point2 v) {
  if (v.x >= q_ || v.y >= q_) throw std::out_of_range("point " + format_point(v) + " outside F_q^2");
  const auto code = v.pack(q_);
  if (!contains_code(code)) {
    words_[code >> 6] |= std::uint64_t{1} << (code & 63);
    ++count_;
  }
}

void PointSet::erase(Point2 v) {
  const auto code = v.pack(q_);
  if (contains_code(code)) {
    words_[code >> 6] &= ~(std::uint64_t{1} << (code & 63));
    --count_;
  }
}

PointSet PointSet::without_origin() const {
  PointSet s = *this;
  s.erase({0, 0});
  return s;
}

PointSet PointSet::complement() const {
  PointSet s(q_);
  for (std::size_t w = 0; w < words_.size(); ++w) s.words_[w] = ~words_[w];
  const auto tail = universe() & 63;
  if (tail) s.words_.back() &= (std::uint64_t{1} << tail) - 1;
  s.count_ = universe() - count_;
  return s;
}

std::vector<Point2> PointSet::points() const {
  std::vector<Point2> out;
  out.reserve(count_);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      const int b = std::countr_zero(bits);
      out.push_back(Point2::unpack(w * 64 + b, q_));
      bits &= bits - 1;
    }
  }
  return out;
}

Point2 PointSet::first_nonzero() const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    if (w == 0) bits &= ~std::uint64_t{1};
    if (bits) return Point2::unpack(w * 64 + std::countr_zero(bits), q_);
  }
  throw std::invalid_argument("set has no nonzero point");
}

PointSet PointSet::image(const Field& f, const Mat2& m) const {
  PointSet s(q_);
  for (auto v : points()) s.insert(apply(f, m, v));
  return s;
}

bool PointSet::preserved_by(const Field& f, const Mat2& m) const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      const Point2 v = Point2::unpack(w * 64 + std::countr_zero(bits), q_);
      if (!contains(apply(f, m, v))) return false;
      bits &= bits - 1;
    }
  }
  return true;
}

std::string format_point(Point2 v) {
  return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")";
}

std::string format_matrix(const Mat2& m) {
  return "[" + std::to_string(m.a) + "," + std::to_string(m.b) + ";" + std::to_string(m.c) +
         "," + std::to_string(m.d) + "]";
}

std::string format_point_list(const std::vector<Point2>& pts) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ';';
    out += format_point(pts[i]);
  }
  return out;
}

namespace {

std::vector<Elem> parse_codes(std::string_view body, std::string_view seps, std::size_t want,
                              std::uint32_t q, std::string_view what) {
  std::vector<Elem> out;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < want; ++k) {
    while (pos < body.size() && body[pos] == ' ') ++pos;
    Elem v = 0;
    auto [ptr, ec] = std::from_chars(body.data() + pos, body.data() + body.size(), v);
    if (ec != std::errc{}) throw std::invalid_argument("malformed " + std::string(what));
    pos = static_cast<std::size_t>(ptr - body.data());
    while (pos < body.size() && body[pos] == ' ') ++pos;
    if (v >= q) {
      throw std::invalid_argument(std::string(what) + " entry " + std::to_string(v) +
                                  " is not a code below q = " + std::to_string(q));
    }
    out.push_back(v);
    if (k + 1 < want) {
      if (pos >= body.size() || body[pos] != seps[k]) {
        throw std::invalid_argument("malformed " + std::string(what));
      }
      ++pos;
    }
  }
  if (pos != body.size()) throw std::invalid_argument("malformed " + std::string(what));
  return out;
}

std::string_view strip(std::string_view s, char open, char close, std::string_view what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.size() < 2 || s.front() != open || s.back() != close) {
    throw std::invalid_argument("malformed " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return s.substr(1, s.size() - 2);
}

}  // namespace

Point2 parse_point(std::string_view text, std::uint32_t q) {
  auto v = parse_codes(strip(text, '(', ')', "point"), ",", 2, q, "point");
  return {v[0], v[1]};
}

Mat2 parse_matrix(std::string_view text, std::uint32_t q) {
  auto v = parse_codes(strip(text, '[', ']', "matrix"), ",;,", 4, q, "matrix");
  return {v[0], v[1], v[2], v[3]};
}

}  // namespace slab
