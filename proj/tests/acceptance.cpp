// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "slab/families.hpp"
#include "slab/harness.hpp"
#include "slab/incidence3d.hpp"
#include "slab/rng.hpp"
#include "slab/stabilizer.hpp"

using namespace slab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail = what;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double took = seconds_since(t0);
  if (took > limit_s) {
    out.pass = false;
    char buf[96];
    std::snprintf(buf, sizeof buf, "runtime %.2f s over the %.0f s limit", took, limit_s);
    out.detail = out.detail.empty() ? buf : out.detail + "; " + buf;
  }
  if (!out.pass) ++failures;
  std::printf("[%s] %2d %-44s %8.2f s  %s\n", out.pass ? "PASS" : "FAIL", id, title, took,
              out.detail.c_str());
  std::fflush(stdout);
}

std::string num(std::uint64_t v) { return std::to_string(v); }

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::size_t lines_meeting(const Field& f, const PointSet& e) {
  std::set<std::uint32_t> lines;
  for (auto v : e.points())
    if (!v.is_origin()) lines.insert(line_of_point(f, v).index);
  return lines.size();
}

std::string csv_of(const CampaignConfig& cfg) {
  std::ostringstream out;
  write_table(out, run_campaign(cfg).table, OutputFormat::Csv);
  return out.str();
}

// Every nonempty subset of the nonzero points of a line, as bitmasks over points_on_line()[1..].
std::vector<std::vector<Point2>> nonempty_subsets(const std::vector<Point2>& pts) {
  std::vector<std::vector<Point2>> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << pts.size()); ++mask) {
    std::vector<Point2> s;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (mask >> i & 1) s.push_back(pts[i]);
    out.push_back(std::move(s));
  }
  return out;
}

Outcome line_through_origin() {
  Outcome o;
  double slowest = 0;
  for (auto [p, r] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}, {7u, 1u}, {2u, 3u}, {3u, 2u}}) {
    const auto t0 = Clock::now();
    const Field f = Field::make(p, r);
    const std::uint64_t q = f.q();
    for (const auto& line : proj_lines(f)) {
      const auto e = PointSet::from_points(f.q(), points_on_line(f, line));
      const auto fast = stabilizer(f, e);
      o.require(fast.size() == q * q - q, "q=" + num(q) + " |R_E|=" + num(fast.size()));
      o.require(fast == stabilizer_brute(f, e), "q=" + num(q) + " brute mismatch");
    }
    const double took = seconds_since(t0);
    slowest = std::max(slowest, took);
    o.require(took < 1.0, "q=" + num(q) + " took over 1 s");
  }
  if (o.pass) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "all q+1 lines, 7 fields; slowest field %.3f s", slowest);
    o.detail = buf;
  }
  return o;
}

Outcome axis_subgroup() {
  Outcome o;
  for (auto [q, c] : {std::pair{7u, 2u}, {7u, 3u}, {13u, 2u}, {13u, 3u}, {13u, 4u}}) {
    const Field f = Field::make(q, 1);
    const auto e = gen_family(f, "family:axis-subgroup:c=" + num(c));
    const auto re = stabilizer(f, e);
    o.require(re.size() == std::uint64_t{q} * (q - 1) / c,
              "q=" + num(q) + " c=" + num(c) + " |R_E|=" + num(re.size()));
    std::vector<Mat2> displayed;
    for (Elem a : mult_subgroup(f, c).members)
      for (Elem d = 0; d < q; ++d) displayed.push_back({a, 0, d, f.inv(a)});
    o.require(re == MatrixSet(displayed), "q=" + num(q) + " c=" + num(c) + " family differs");
    o.require(re == stabilizer_brute(f, e), "q=" + num(q) + " c=" + num(c) + " brute mismatch");
  }
  if (o.pass) o.detail = "5 (q,c) pairs equal the lower triangular family";
  return o;
}

Outcome subfield_plane() {
  Outcome o;
  for (auto [p, r, sub] : {std::tuple{2u, 2u, 1u}, {3u, 2u, 1u}, {5u, 2u, 1u}, {2u, 4u, 2u}}) {
    const Field f = Field::make(p, r);
    const auto e = gen_family(f, "family:subfield-plane:sub-r=" + num(sub));
    const auto re = stabilizer(f, e);
    const auto brute = stabilizer_brute(f, e);
    const std::uint64_t ps = ipow(p, sub);
    const std::string tag = "(" + num(p) + "," + num(r) + "," + num(sub) + ")";
    std::vector<Mat2> embedded;
    const auto members = subfield_elements(f, sub).members;
    for (Elem a : members)
      for (Elem b : members)
        for (Elem c : members)
          for (Elem d : members)
            if (f.sub(f.mul(a, d), f.mul(b, c)) == 1) embedded.push_back({a, b, c, d});
    o.require(embedded.size() == ps * ps * ps - ps, tag + " embedded group size");
    o.require(MatrixSet(embedded).is_subset_of(re), tag + " embedded group not contained");
    o.require(re.size() == ps * ps * ps - ps, tag + " |R_E|=" + num(re.size()));
    o.require(re == brute, tag + " brute mismatch");
  }
  if (o.pass) o.detail = "R_E equals the embedded subfield SL2 in all 4 cases";
  return o;
}

Outcome pair_line_suite() {
  Outcome o;
  std::uint64_t pairs_checked = 0, distinct_checked = 0;
  for (auto p : {3u, 5u}) {
    const Field f = Field::make(p, 1);
    const std::uint64_t sq = std::uint64_t{p} * p;
    std::vector<std::pair<Point2, Point2>> admissible;
    for (std::uint64_t a = 1; a < sq; ++a)
      for (std::uint64_t b = 1; b < sq; ++b) {
        const Point2 m1 = Point2::unpack(a, p), m2 = Point2::unpack(b, p);
        if (m1.x != 0 && m2.x != 0 && (m1.y != 0 || m2.y != 0)) admissible.push_back({m1, m2});
      }
    std::vector<Line3> lines;
    for (auto [m1, m2] : admissible) {
      const Line3 l = pair_line(f, m1, m2);
      lines.push_back(l);
      std::set<Point3> image;
      for (const auto& m : solution_set(f, m1, m2)) image.insert(f_map(m));
      const auto pts = l.points(f);
      o.require(image == std::set<Point3>(pts.begin(), pts.end()),
                "q=" + num(p) + " pair line differs from f(solution set)");
      ++pairs_checked;
    }
    for (std::size_t i = 0; i < admissible.size(); ++i)
      for (std::size_t j = i + 1; j < admissible.size(); ++j) {
        if (line_of_point(f, admissible[i].first) == line_of_point(f, admissible[j].first)) continue;
        ++distinct_checked;
        o.require(lines[i] != lines[j], "q=" + num(p) + " coincident pair lines");
      }
    // Fibers of f: size 1 over c != 0, size q or 0 over c = 0.
    std::map<Point3, std::uint64_t> fiber;
    for (const auto& m : sl2_elements(f)) ++fiber[f_map(m)];
    for (const auto& [v, n] : fiber) {
      if (v.z != 0)
        o.require(n == 1, "q=" + num(p) + " fiber over c != 0 has size " + num(n));
      else
        o.require(n == p && f.mul(v.x, v.y) == 1, "q=" + num(p) + " fiber over c = 0 has size " + num(n));
    }
    o.require(fiber.size() == std::uint64_t{p} * p * (p - 1) + (p - 1),
              "q=" + num(p) + " image of f has the wrong size");
  }
  if (o.pass) o.detail = num(pairs_checked) + " pairs, " + num(distinct_checked) + " distinctness checks";
  return o;
}

Outcome two_lines() {
  Outcome o;
  std::uint64_t sets = 0;
  for (auto [p, r] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}}) {
    const Field f = Field::make(p, r);
    const auto lines = proj_lines(f);
    for (std::size_t i = 0; i < lines.size(); ++i)
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        auto li = points_on_line(f, lines[i]), lj = points_on_line(f, lines[j]);
        li.erase(li.begin());
        lj.erase(lj.begin());
        for (const auto& a : nonempty_subsets(li))
          for (const auto& b : nonempty_subsets(lj))
            for (bool origin : {false, true}) {
              std::vector<Point2> pts = a;
              pts.insert(pts.end(), b.begin(), b.end());
              if (origin) pts.push_back({0, 0});
              const auto e = PointSet::from_points(f.q(), pts);
              ++sets;
              const auto rep = bound_report(f, e);
              o.require(rep.row("two-lines").applicable, "applicability flag wrong");
              o.require(rep.r_e <= e.nonzero_size(),
                        "q=" + num(f.q()) + " " + format_point_list(e.points()) + " |R_E|=" + num(rep.r_e));
            }
      }
  }
  if (o.pass) o.detail = num(sets) + " sets, 0 violations";
  return o;
}

Outcome line_sets() {
  Outcome o;
  std::uint64_t sets = 0, worst_num = 0, worst_den = 1;
  for (auto q : {5u, 7u}) {
    const Field f = Field::make(q, 1);
    const auto all = proj_lines(f);
    auto check = [&](const std::vector<ProjLine>& ls) {
      ++sets;
      std::uint64_t size = 0;
      try {
        size = lineset_stabilizer(f, ls).size();
      } catch (const std::logic_error&) {
        o.require(false, "q=" + num(q) + " bound exceeded");
        return;
      }
      const std::uint64_t bound = lineset_bound(ls.size());
      o.require(size <= bound, "q=" + num(q) + " bound exceeded");
      if (size * worst_den > worst_num * bound) {
        worst_num = size;
        worst_den = bound;
      }
    };
    const std::size_t n = all.size();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        for (std::size_t c = b + 1; c < n; ++c) {
          check({all[a], all[b], all[c]});
          for (std::size_t d = c + 1; d < n; ++d) check({all[a], all[b], all[c], all[d]});
        }
    SplitMix64 rng(q);
    for (int t = 0; t < 200; ++t) {
      std::vector<ProjLine> pool = all;
      std::vector<ProjLine> pick;
      for (std::size_t i = 0; i < 5; ++i) {
        std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
        pick.push_back(pool[i]);
      }
      check(pick);
    }
  }
  if (o.pass) o.detail = num(sets) + " line sets; largest |stab|/bound = " + num(worst_num) + "/" + num(worst_den);
  return o;
}

Outcome prime_power() {
  Outcome o;
  std::uint64_t tested = 0;
  for (auto [p, r] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}}) {
    const Field f = Field::make(p, r);
    const std::uint32_t q = f.q();
    const std::uint64_t universe = std::uint64_t{q} * q;
    const std::uint64_t factor = ipow(p, r - 1);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << universe); ++mask) {
      const auto e = PointSet::from_mask(q, mask);
      if (e.nonzero_size() == universe - 1) continue;  // F_q^2 and F_q^2 \ {0}
      if (lines_meeting(f, e) < 2) continue;
      ++tested;
      const auto re = stabilizer_brute(f, e);
      o.require(re.size() <= factor * e.size(), "q=" + num(q) + " subset " + num(mask));
    }
  }
  if (o.pass) o.detail = num(tested) + " subsets meet the hypotheses, 0 violations";
  return o;
}

Outcome empirical_constant() {
  Outcome o;
  std::string maxima;
  for (auto [p, r] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}}) {
    CampaignConfig cfg;
    cfg.p = p;
    cfg.r = r;
    cfg.campaign = Campaign::ExhaustiveSubsets;
    cfg.workers = 1;
    const auto res = run_campaign(cfg);
    std::ostringstream a;
    write_table(a, res.table, OutputFormat::Csv);
    o.require(res.ok(), "campaign reported violations");
    o.require(a.str() == csv_of(cfg), "rerun differs");
    cfg.workers = 4;
    o.require(a.str() == csv_of(cfg), "4 workers differ from 1");
    const std::string best = res.summary.get("max_three_halves_nonzero_ratio");
    o.require(best != "NA" && std::isfinite(std::stod(best)), "maximum not recorded");
    maxima += (maxima.empty() ? "" : ", ") + ("q=" + num(ipow(p, r)) + ": " + best);
    if (p == 2 && r == 2) {
      const Field f = Field::make(2, 2);
      const auto target = gen_family(f, "family:subfield-plane:sub-r=1");
      std::uint64_t mask = 0;
      for (auto v : target.points()) mask |= std::uint64_t{1} << v.pack(4);
      const std::string desc = "subset:" + num(mask);
      bool seen = false;
      for (std::size_t i = 0; i < res.table.rows.size(); ++i) {
        if (res.table.cell(i, "descriptor") != desc) continue;
        seen = true;
        o.require(res.table.cell(i, "three_halves_ratio") == "0.75",
                  "subfield plane ratio " + res.table.cell(i, "three_halves_ratio"));
      }
      o.require(seen, "subfield plane row missing");
    }
  }
  if (o.pass) o.detail = "max nonzero ratio " + maxima + "; GF(4) subfield plane at 0.75";
  return o;
}

Outcome triple_count_audit() {
  Outcome o;
  struct Job {
    Field f;
    PointSet e;
    std::size_t m1;
  };
  std::vector<Job> jobs;
  const Field f9 = Field::make(3, 2);
  jobs.push_back({f9, gen_family(f9, "family:subfield-plane:sub-r=1"), 2});
  const Field f7 = Field::make(7, 1);
  SplitMix64 rng(2024);
  for (int i = 0; i < 20; ++i) {
    const auto m0 = static_cast<std::uint32_t>(3 + rng.below(6));
    const auto m1 = static_cast<std::uint32_t>(1 + rng.below(6));
    jobs.push_back({f7, uniform_line_set(f7, m0, m1, rng.next()), m1});
  }
  std::uint64_t skew_rows = 0, skew_pairs = 0, skew_bad = 0, off_plane = 0, par = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& j = jobs[i];
    const auto a = audit_line_class(j.f, j.e, j.m1);
    const std::string tag = "instance " + num(i) + ": ";
    o.require(a.r_e_in_s, tag + "R_E not inside S");
    o.require(a.decomposition_exact(), tag + "omega decomposition");
    o.require(a.lower_bound_holds(), tag + "lower bound");
    o.require(a.s2_part_bounded(), tag + "S2 part");
    o.require(a.lines_distinct, tag + "pair lines not distinct");
    o.require(a.richness_bounded(), tag + "plane richness " + num(a.plane_richness));
    o.require(a.parallel_failures == 0, tag + "parallel triples");
    skew_pairs += a.skew_pairs;
    skew_bad += a.skew_failures;
    off_plane += a.skew_failures_off_fixed_plane;
    skew_rows += a.skew_failures > 0;
    par += a.parallel_triples;
  }
  const std::string stats = num(skew_bad) + " of " + num(skew_pairs) + " distinct-line pairs not skew in " +
                            num(skew_rows) + "/" + num(jobs.size()) + " instances, " + num(off_plane) +
                            " of them meet off z=0; " + num(par) + " parallel triples fine";
  const bool others = o.pass;
  o.require(skew_bad == 0, "skew claim: " + stats);
  if (o.pass) o.detail = num(jobs.size()) + " instances; " + stats;
  else if (others) o.detail += "; every other identity holds";
  return o;
}

Outcome incidence_engine() {
  Outcome o;
  std::uint64_t balanced_on = 0, balanced_off = 0, limited_on = 0, limited_off = 0;
  for (auto q : {3u, 5u, 7u}) {
    const Field f = Field::make(q, 1);
    const std::uint64_t cube = std::uint64_t{q} * q * q;
    SplitMix64 rng(q * 1000 + 1);
    for (int t = 0; t < 1000; ++t) {
      std::vector<Point3> pts;
      std::vector<Line3> lines;
      const std::uint64_t np = 1 + rng.below(t % 2 ? 3 * q * q : cube);
      const std::uint64_t nl = t % 3 == 0 ? np : 1 + rng.below(2 * q * q);
      for (std::uint64_t i = 0; i < np; ++i) pts.push_back(Point3::unpack(rng.below(cube), q));
      for (std::uint64_t i = 0; i < nl; ++i)
        lines.push_back(Line3::through(f, Point3::unpack(rng.below(cube), q),
                                       Point3::unpack(1 + rng.below(cube - 1), q)));
      const auto inst = make_incidence_instance(f, pts, lines);
      const std::uint64_t brute = count_incidences_brute(f, inst.points, inst.lines);
      o.require(inst.incidences == brute, "q=" + num(q) + " incidence count mismatch");

      const double P = static_cast<double>(inst.points.size());
      const double L = static_cast<double>(inst.lines.size());
      const double M = static_cast<double>(inst.richness.max_lines);
      const double I = static_cast<double>(brute);
      const auto rows = incidence_bound_report(inst);
      auto close = [](double a, double b) { return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(b)); };
      o.require(rows.size() == 4, "row count");
      o.require(rows[0].applicable && close(rows[0].rhs, std::sqrt(P) * std::pow(L, 0.75) * std::pow(M, 0.25) + P + L),
                "mt-incidence rhs");
      o.require(close(rows[1].observed, std::fabs(I - P * L / (q * q))) && close(rows[1].rhs, q * std::sqrt(P * L)),
                "two-sided deviation");
      const bool limited = M <= std::sqrt(L);
      o.require(rows[2].applicable == limited && close(rows[2].rhs, L * std::pow(P, 0.4) + std::pow(P, 1.2)),
                "plane-limited row");
      const bool window = std::pow(P, 7.0 / 8.0) < L && L < std::pow(P, 8.0 / 7.0);
      o.require(rows[3].applicable == window && close(rows[3].rhs, std::pow(P * L, 11.0 / 15.0)),
                "balanced row");
      (window ? balanced_on : balanced_off)++;
      (limited ? limited_on : limited_off)++;
    }
  }
  o.require(balanced_on > 0 && balanced_off > 0, "balanced window not exercised both ways");
  o.require(limited_on > 0 && limited_off > 0, "plane-limited flag not exercised both ways");
  if (o.pass)
    o.detail = "3000 instances; balanced on/off " + num(balanced_on) + "/" + num(balanced_off) +
               ", plane-limited on/off " + num(limited_on) + "/" + num(limited_off);
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::uint64_t checked = 0;
  for (auto p : {2u, 3u}) {
    const Field f = Field::make(p, 1);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (p * p)); ++mask) {
      const auto e = PointSet::from_mask(p, mask);
      ++checked;
      o.require(stabilizer(f, e) == stabilizer_brute(f, e), "q=" + num(p) + " subset " + num(mask));
    }
  }
  for (auto [p, r] : {std::pair{2u, 2u}, {5u, 1u}, {7u, 1u}, {2u, 3u}, {3u, 2u}}) {
    const Field f = Field::make(p, r);
    const std::uint32_t q = f.q();
    const std::uint64_t universe = std::uint64_t{q} * q;
    SplitMix64 rng(q * 31);
    for (int t = 0; t < 1000; ++t) {
      const auto e = random_point_set(q, rng.below(universe + 1), rng.next());
      ++checked;
      o.require(stabilizer(f, e) == stabilizer_brute(f, e), "q=" + num(q) + " random subset " + num(t));
    }
  }
  if (o.pass) o.detail = num(checked) + " sets, 0 mismatches";
  return o;
}

}  // namespace

int main() {
  std::printf("slab acceptance suite\n");
  criterion(1, "line through the origin: q^2 - q", 7.0, line_through_origin);
  criterion(2, "axis subgroup: q(q-1)/c and displayed family", 5.0, axis_subgroup);
  criterion(3, "subfield plane: embedded SL2, exact size", 30.0, subfield_plane);
  criterion(4, "pair lines: f(solutions), distinctness, fibers", 60.0, pair_line_suite);
  criterion(5, "two origin-lines: |R_E| <= |E \\ 0|", 120.0, two_lines);
  criterion(6, "line sets: 2m^3(m-1)^2", 120.0, line_sets);
  criterion(7, "prime-power bound, all subsets q <= 4", 600.0, prime_power);
  criterion(8, "three-halves constant, reproducible", 600.0, empirical_constant);
  criterion(9, "triple-counting audit", 300.0, triple_count_audit);
  criterion(10, "incidence engine", 60.0, incidence_engine);
  criterion(11, "fast vs brute stabilizer", 300.0, oracle_equivalence);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
