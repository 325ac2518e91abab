#include "slab/harness.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "slab/families.hpp"
#include "slab/rng.hpp"

namespace slab {

namespace {

constexpr const char* kSchema = "slab-v1";

struct CampaignName {
  Campaign id;
  const char* name;
};
constexpr CampaignName kCampaigns[] = {
    {Campaign::ExhaustiveSubsets, "exhaustive-subsets"},
    {Campaign::TwoLineExhaustive, "two-line-exhaustive"},
    {Campaign::LinesetExhaustive, "lineset-exhaustive"},
    {Campaign::FamilyVerify, "family-verify"},
    {Campaign::PrimePowerExhaustive, "prop19-exhaustive"},
    {Campaign::LineClassAudit, "prop25-audit"},
    {Campaign::IncidenceReport, "incidence-report"},
    {Campaign::SearchExtremal, "search-extremal"},
};

std::string u64(std::uint64_t v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "1" : "0"; }

std::string int_or_na(const BoundRow& row) {
  return row.applicable ? u64(static_cast<std::uint64_t>(std::llround(row.rhs))) : "NA";
}

std::string confirmation(const BoundRow& row) {
  if (!row.applicable) return "NA";
  return row.observed > 0 ? "1" : "0";
}

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::vector<std::uint32_t> divisors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

/// One evaluated planar set.
struct PlanarEval {
  std::string descriptor;
  BoundReport report;
  std::string oracle = "NA";  // NA | ok | mismatch
  std::optional<std::uint64_t> expected;
  bool expected_mismatch = false;
  bool extra_violation = false;

  bool violation() const {
    return report.any_violation() || oracle == "mismatch" || expected_mismatch || extra_violation;
  }
};

PlanarEval evaluate_planar(const Field& f, const PointSet& e, std::string descriptor,
                           const BoundConstants& k, bool run_oracle) {
  PlanarEval ev;
  ev.descriptor = std::move(descriptor);
  const MatrixSet r_e = stabilizer(f, e);
  ev.report = bound_report(f, e, k, r_e);
  if (run_oracle) ev.oracle = stabilizer_brute(f, e) == r_e ? "ok" : "mismatch";
  return ev;
}

const std::vector<std::string> kPlanarColumns = {
    "descriptor",       "size_e",       "size_e_nonzero",   "lines_meeting",
    "r_e",              "contained_in_origin_line",         "collinear",
    "three_halves_ratio", "three_halves_nonzero_ratio",     "two_lines_rhs",
    "lineset_rhs",      "prime_power_rhs", "quadratic_ratio", "cor_i",
    "cor_ii",           "cor_iii",      "cor_iv",           "threshold",
    "oracle",           "expected_r_e", "violation"};

std::vector<std::string> planar_cells(const PlanarEval& ev) {
  const auto& rep = ev.report;
  const auto& th = rep.row("three-halves");
  const auto& thn = rep.row("three-halves-nonzero");
  const auto& quad = rep.row("quadratic");
  return {ev.descriptor,
          u64(rep.size_e),
          u64(rep.size_e_nonzero),
          u64(rep.lines_meeting),
          u64(rep.r_e),
          flag(rep.contained_in_origin_line),
          flag(rep.collinear),
          format_ratio(th.ratio, th.applicable),
          format_ratio(thn.ratio, thn.applicable && thn.rhs > 0),
          int_or_na(rep.row("two-lines")),
          int_or_na(rep.row("lineset")),
          int_or_na(rep.row("prime-power")),
          format_ratio(quad.ratio, quad.applicable),
          confirmation(rep.row("cor-i")),
          confirmation(rep.row("cor-ii")),
          confirmation(rep.row("cor-iii")),
          confirmation(rep.row("cor-iv")),
          confirmation(rep.row("threshold")),
          ev.oracle,
          ev.expected ? u64(*ev.expected) : "NA",
          flag(ev.violation())};
}

CampaignResult planar_result(const Field& f, Campaign campaign, const std::vector<PlanarEval>& evals) {
  CampaignResult res;
  res.table.schema = kSchema;
  res.table.columns = kPlanarColumns;

  double best = -1, best_nz = -1;
  std::string best_desc = "NA", best_nz_desc = "NA";
  std::uint64_t v_two = 0, v_lineset = 0, v_prime = 0, cor_hyp = 0, cor_conf = 0;
  std::uint64_t oracle_checks = 0, oracle_bad = 0, expected_bad = 0, violations = 0;
  for (const auto& ev : evals) {
    res.table.rows.push_back(planar_cells(ev));
    const auto& rep = ev.report;
    const auto& th = rep.row("three-halves");
    if (th.applicable && th.ratio > best) {
      best = th.ratio;
      best_desc = ev.descriptor;
    }
    const auto& thn = rep.row("three-halves-nonzero");
    if (thn.applicable && thn.ratio > best_nz) {
      best_nz = thn.ratio;
      best_nz_desc = ev.descriptor;
    }
    v_two += rep.row("two-lines").violated;
    v_lineset += rep.row("lineset").violated;
    v_prime += rep.row("prime-power").violated;
    for (const char* name : {"cor-i", "cor-ii", "cor-iii", "cor-iv", "threshold"}) {
      const auto& row = rep.row(name);
      if (row.applicable) {
        ++cor_hyp;
        cor_conf += row.observed > 0;
      }
    }
    if (ev.oracle != "NA") ++oracle_checks;
    oracle_bad += ev.oracle == "mismatch";
    expected_bad += ev.expected_mismatch;
    violations += ev.violation();
  }
  auto& s = res.summary;
  s.add("campaign", campaign_name(campaign));
  s.add("q", u64(f.q()));
  s.add("rows", u64(evals.size()));
  s.add("max_three_halves_ratio", format_ratio(best, best >= 0));
  s.add("max_three_halves_ratio_at", best_desc);
  s.add("max_three_halves_nonzero_ratio", format_ratio(best_nz, best_nz >= 0));
  s.add("max_three_halves_nonzero_ratio_at", best_nz_desc);
  s.add("two_lines_violations", u64(v_two));
  s.add("lineset_violations", u64(v_lineset));
  s.add("prime_power_violations", u64(v_prime));
  s.add("corollary_hypothesis_rows", u64(cor_hyp));
  s.add("corollary_confirmed", u64(cor_conf));
  s.add("oracle_checks", u64(oracle_checks));
  s.add("oracle_mismatches", u64(oracle_bad));
  s.add("expected_mismatches", u64(expected_bad));
  s.add("violations", u64(violations));
  s.violations = violations;
  return res;
}

std::pair<std::uint64_t, std::uint64_t> code_range(const CampaignConfig& cfg, std::uint64_t total) {
  const std::uint64_t begin = cfg.range_begin.value_or(0);
  const std::uint64_t end = std::min(cfg.range_end.value_or(total), total);
  if (begin > end) throw std::invalid_argument("range begin exceeds range end");
  return {begin, end};
}

CampaignResult run_exhaustive_subsets(const Field& f, const CampaignConfig& cfg, bool prime_power_only) {
  const std::uint32_t q = f.q();
  const std::uint64_t universe = std::uint64_t{q} * q;
  std::vector<std::uint64_t> masks;
  if (q <= 4) {
    const auto [begin, end] = code_range(cfg, std::uint64_t{1} << universe);
    for (std::uint64_t m = begin; m < end; ++m) masks.push_back(m);
  } else if (q == 5 && cfg.allow_large) {
    SplitMix64 rng(cfg.seed);
    for (std::uint64_t i = 0; i < cfg.budget; ++i) masks.push_back(rng.next() & ((std::uint64_t{1} << universe) - 1));
    const auto [begin, end] = code_range(cfg, masks.size());
    masks = std::vector<std::uint64_t>(masks.begin() + begin, masks.begin() + end);
  } else {
    throw std::invalid_argument("exhaustive subset campaigns need q <= 4 (q = 5 with --allow-large)");
  }
  const bool oracle = q <= 9;
  auto evals = parallel_map<std::optional<PlanarEval>>(
      masks.size(), cfg.workers, [&](std::uint64_t i) -> std::optional<PlanarEval> {
        const PointSet e = PointSet::from_mask(q, masks[i]);
        // Spot check against the brute oracle on every 100th subset code.
        PlanarEval ev = evaluate_planar(f, e, "subset:" + u64(masks[i]), cfg.constants,
                                        oracle && masks[i] % 100 == 0);
        if (prime_power_only && !ev.report.row("prime-power").applicable) return std::nullopt;
        return ev;
      });
  std::vector<PlanarEval> kept;
  for (auto& ev : evals)
    if (ev) kept.push_back(std::move(*ev));
  return planar_result(f, cfg.campaign, kept);
}

CampaignResult run_two_line(const Field& f, const CampaignConfig& cfg) {
  const std::uint32_t q = f.q();
  if (q > 7) throw std::invalid_argument("two-line-exhaustive needs q <= 7");
  std::vector<PointSet> sets;
  const std::uint64_t per_line = (std::uint64_t{1} << (q - 1));
  for (std::uint32_t i = 0; i <= q; ++i) {
    for (std::uint32_t j = i + 1; j <= q; ++j) {
      auto li = points_on_line(f, {i}), lj = points_on_line(f, {j});
      for (std::uint64_t a = 1; a < per_line; ++a) {
        for (std::uint64_t b = 1; b < per_line; ++b) {
          for (int origin = 0; origin < 2; ++origin) {
            PointSet e(q);
            for (std::uint32_t k = 0; k + 1 < q; ++k) {
              if ((a >> k) & 1) e.insert(li[k + 1]);
              if ((b >> k) & 1) e.insert(lj[k + 1]);
            }
            if (origin) e.insert({0, 0});
            sets.push_back(std::move(e));
          }
        }
      }
    }
  }
  const auto [begin, end] = code_range(cfg, sets.size());
  auto evals = parallel_map<PlanarEval>(end - begin, cfg.workers, [&](std::uint64_t i) {
    const PointSet& e = sets[begin + i];
    return evaluate_planar(f, e, "points:" + format_point_list(e.points()), cfg.constants,
                           q <= 9 && (begin + i) % 100 == 0);
  });
  return planar_result(f, cfg.campaign, evals);
}

CampaignResult run_lineset(const Field& f, const CampaignConfig& cfg) {
  const std::uint32_t q = f.q();
  if (q > 16) throw std::invalid_argument("lineset-exhaustive needs q <= 16");
  const std::uint32_t n = q + 1;
  std::vector<std::vector<ProjLine>> sets;
  for (std::uint32_t m : {3u, 4u}) {
    if (m > n) continue;
    std::vector<std::uint32_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<ProjLine> s;
      for (auto i : idx) s.push_back({i});
      sets.push_back(std::move(s));
      int k = static_cast<int>(m) - 1;
      while (k >= 0 && idx[k] == n - m + k) --k;
      if (k < 0) break;
      ++idx[k];
      for (std::uint32_t j = k + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  if (n >= 5) {
    SplitMix64 rng(cfg.seed);
    for (std::uint64_t t = 0; t < cfg.budget; ++t) {
      std::vector<std::uint32_t> all(n);
      std::iota(all.begin(), all.end(), 0);
      std::vector<ProjLine> s;
      for (std::uint32_t i = 0; i < 5; ++i) {
        std::swap(all[i], all[i + rng.below(n - i)]);
        s.push_back({all[i]});
      }
      std::sort(s.begin(), s.end());
      sets.push_back(std::move(s));
    }
  }
  const auto [begin, end] = code_range(cfg, sets.size());
  auto evals = parallel_map<PlanarEval>(end - begin, cfg.workers, [&](std::uint64_t i) {
    const auto& lines = sets[begin + i];
    PointSet e(q);
    std::string desc = "lines:";
    for (std::size_t k = 0; k < lines.size(); ++k) {
      desc += (k ? "+" : "") + u64(lines[k].index);
      for (auto v : points_on_line(f, lines[k]))
        if (!v.is_origin()) e.insert(v);
    }
    PlanarEval ev;
    try {
      // The nonzero points of the lines have the same stabilizer as the line set.
      const MatrixSet direct = lineset_stabilizer(f, lines);
      ev = evaluate_planar(f, e, desc, cfg.constants, false);
      ev.oracle = direct.size() == ev.report.r_e ? "ok" : "mismatch";
    } catch (const std::logic_error&) {
      ev = evaluate_planar(f, e, desc, cfg.constants, false);
      ev.extra_violation = true;
    }
    return ev;
  });
  return planar_result(f, cfg.campaign, evals);
}

std::optional<std::uint64_t> expected_r_e(const Field& f, const FamilySpec& spec) {
  const std::uint64_t q = f.q();
  const std::string& n = spec.name;
  if (n == "empty" || n == "origin" || n == "full" || n == "full-minus-origin") return q * q * q - q;
  if (n == "line-origin") return q * q - q;
  if (n == "line-affine") return q;
  if (n == "axis-subgroup") return q * ((q - 1) / spec.int_param("c", 1));
  if (n == "subfield-plane") {
    const std::uint64_t s = ipow(f.p(), spec.int_param("sub-r", 1));
    return s * s * s - s;
  }
  if (n == "complement") {
    FamilySpec inner = spec;
    inner.name = spec.param("of", "");
    inner.params.erase("of");
    return expected_r_e(f, inner);
  }
  return std::nullopt;
}

CampaignResult run_family_verify(const Field& f, const CampaignConfig& cfg) {
  std::vector<std::string> specs;
  if (cfg.set_spec) {
    specs.push_back(*cfg.set_spec);
  } else {
    specs = {"family:empty", "family:origin", "family:full", "family:full-minus-origin",
             "family:line-origin", "family:line-origin:line=" + u64(f.q()), "family:line-affine",
             "family:complement:of=line-origin", "family:complement:of=line-affine"};
    for (auto c : divisors(f.q() - 1)) specs.push_back("family:axis-subgroup:c=" + u64(c));
    for (auto d : divisors(f.r())) specs.push_back("family:subfield-plane:sub-r=" + u64(d));
    specs.push_back("family:complement:of=subfield-plane,sub-r=1");
  }
  const bool oracle = f.q() <= 16;
  auto evals = parallel_map<PlanarEval>(specs.size(), cfg.workers, [&](std::uint64_t i) {
    const FamilySpec spec = parse_family_spec(specs[i]);
    const PointSet e = gen_family(f, spec);
    PlanarEval ev = evaluate_planar(f, e, format_family_spec(spec), cfg.constants, oracle);
    ev.expected = expected_r_e(f, spec);
    ev.expected_mismatch = ev.expected && *ev.expected != ev.report.r_e;
    // Complement symmetry R_E = R_{E^c}.
    if (stabilizer(f, e.complement()).size() != ev.report.r_e) ev.extra_violation = true;
    return ev;
  });
  return planar_result(f, cfg.campaign, evals);
}

CampaignResult run_line_class_audit(const Field& f, const CampaignConfig& cfg) {
  struct Job {
    std::string descriptor;
    PointSet set;
    std::size_t m1;
  };
  std::vector<Job> jobs;
  auto add_classes = [&](const std::string& desc, const PointSet& e) {
    const auto part = line_partition(f, e);
    if (cfg.m1) {
      jobs.push_back({desc, e, *cfg.m1});
    } else {
      for (const auto& [m1, lines] : part.classes) jobs.push_back({desc, e, m1});
    }
  };
  if (cfg.set_spec) {
    const auto spec = parse_family_spec(*cfg.set_spec);
    add_classes(format_family_spec(spec), gen_family(f, spec));
  } else {
    SplitMix64 rng(cfg.seed);
    for (std::uint64_t t = 0; t < cfg.budget; ++t) {
      const auto m0 = static_cast<std::uint32_t>(3 + rng.below(f.q() - 1));  // 3..q+1
      const auto m1 = static_cast<std::uint32_t>(1 + rng.below(f.q() - 1));  // 1..q-1
      const std::uint64_t seed = rng.next();
      const PointSet e = uniform_line_set(f, m0, m1, seed);
      add_classes("points:" + format_point_list(e.points()), e);
    }
  }

  auto audits = parallel_map<LineClassAudit>(jobs.size(), cfg.workers, [&](std::uint64_t i) {
    return audit_line_class(f, jobs[i].set, jobs[i].m1, cfg.constants.c);
  });

  CampaignResult res;
  res.table.schema = std::string(kSchema) + " audit";
  res.table.columns = {"descriptor", "m0", "m1", "b_size", "c_size", "s_size", "s1_size",
                       "s2_size", "r_e", "r_e_in_s", "omega", "omega_s2_part",
                       "incidence_part", "lines", "lines_distinct", "plane_richness",
                       "richness_bound", "lower_bound", "upper_rhs", "s_bound",
                       "s_within_bound", "skew_pairs", "skew_failures",
                       "skew_failures_off_fixed_plane", "parallel_triples",
                       "parallel_failures", "violation"};
  std::uint64_t violations = 0, within = 0, skew_rows = 0;
  for (std::size_t i = 0; i < audits.size(); ++i) {
    const auto& a = audits[i];
    const bool bad = !a.holds();
    violations += bad;
    within += a.s_within_bound;
    skew_rows += !a.skew_claim_holds();
    res.table.rows.push_back({jobs[i].descriptor, u64(a.m0), u64(a.m1), u64(a.b_size),
                              u64(a.c_size), u64(a.s_size), u64(a.s1_size), u64(a.s2_size),
                              u64(a.r_e_size), flag(a.r_e_in_s), u64(a.omega),
                              u64(a.omega_s2_part), u64(a.incidence_part), u64(a.lines_size),
                              flag(a.lines_distinct), u64(a.plane_richness), u64(2 * a.m0),
                              std::to_string(a.lower_bound), format_ratio(a.upper_rhs),
                              format_ratio(a.s_bound), flag(a.s_within_bound),
                              u64(a.skew_pairs), u64(a.skew_failures),
                              u64(a.skew_failures_off_fixed_plane), u64(a.parallel_triples),
                              u64(a.parallel_failures), flag(bad)});
  }
  auto& s = res.summary;
  s.add("campaign", campaign_name(cfg.campaign));
  s.add("q", u64(f.q()));
  s.add("rows", u64(audits.size()));
  s.add("s_within_bound_rows", u64(within));
  s.add("rows_with_non_skew_pairs", u64(skew_rows));
  s.add("violations", u64(violations));
  s.violations = violations;
  return res;
}

CampaignResult run_incidence(const Field& f, const CampaignConfig& cfg) {
  const std::uint32_t q = f.q();
  if (q > 16) throw std::invalid_argument("incidence-report needs q <= 16");
  const std::uint64_t cube = std::uint64_t{q} * q * q;
  struct Job {
    std::vector<Point3> points;
    std::vector<Line3> lines;
  };
  std::vector<Job> jobs;
  SplitMix64 rng(cfg.seed);
  for (std::uint64_t t = 0; t < cfg.budget; ++t) {
    Job job;
    const std::uint64_t np = 1 + rng.below(cube);
    const std::uint64_t nl = 1 + rng.below(2 * std::uint64_t{q} * q);
    for (std::uint64_t i = 0; i < np; ++i) job.points.push_back(Point3::unpack(rng.below(cube), q));
    for (std::uint64_t i = 0; i < nl; ++i) {
      const Point3 base = Point3::unpack(rng.below(cube), q);
      const Point3 dir = Point3::unpack(1 + rng.below(cube - 1), q);
      job.lines.push_back(Line3::through(f, base, dir));
    }
    jobs.push_back(std::move(job));
  }
  struct Out {
    IncidenceInstance inst;
    std::optional<std::uint64_t> brute;
    std::vector<IncidenceRow> rows;
  };
  auto outs = parallel_map<Out>(jobs.size(), cfg.workers, [&](std::uint64_t i) {
    Out o;
    o.inst = make_incidence_instance(f, jobs[i].points, jobs[i].lines);
    if (o.inst.points.size() * o.inst.lines.size() * q <= 50'000'000) {
      o.brute = count_incidences_brute(f, o.inst.points, o.inst.lines);
    }
    o.rows = incidence_bound_report(o.inst, cfg.constants.c);
    return o;
  });

  CampaignResult res;
  res.table.schema = std::string(kSchema) + " incidence";
  res.table.columns = {"instance", "points", "lines", "incidences", "brute_incidences",
                       "plane_richness"};
  for (const char* name : {"mt_incidence", "two_sided", "plane_limited", "balanced"}) {
    for (const char* suffix : {"_applicable", "_rhs", "_ratio"})
      res.table.columns.push_back(std::string(name) + suffix);
  }
  res.table.columns.push_back("violation");
  std::uint64_t violations = 0, checked = 0;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const auto& o = outs[i];
    const bool bad = o.brute && *o.brute != o.inst.incidences;
    violations += bad;
    checked += o.brute.has_value();
    std::vector<std::string> row{u64(i), u64(o.inst.points.size()), u64(o.inst.lines.size()),
                                 u64(o.inst.incidences), o.brute ? u64(*o.brute) : "NA",
                                 u64(o.inst.richness.max_lines)};
    for (std::size_t k = 0; k < 4; ++k) {
      row.push_back(flag(o.rows[k].applicable));
      row.push_back(format_ratio(o.rows[k].rhs));
      row.push_back(format_ratio(o.rows[k].ratio, o.rows[k].applicable));
    }
    row.push_back(flag(bad));
    res.table.rows.push_back(std::move(row));
  }
  auto& s = res.summary;
  s.add("campaign", campaign_name(cfg.campaign));
  s.add("q", u64(q));
  s.add("rows", u64(outs.size()));
  s.add("brute_checks", u64(checked));
  s.add("violations", u64(violations));
  s.violations = violations;
  return res;
}

Mat2 random_subfield_sl2(const Field& f, const ElemSet& sub, SplitMix64& rng) {
  const auto& m = sub.members;
  while (true) {
    const Elem a = m[rng.below(m.size())], b = m[rng.below(m.size())], c = m[rng.below(m.size())];
    if (a == 0) continue;
    return {a, b, c, f.div(f.add(f.one(), f.mul(b, c)), a)};
  }
}

CampaignResult run_search(const Field& f, const CampaignConfig& cfg) {
  const std::uint32_t q = f.q();
  if (cfg.strategy != "orbit-union" && cfg.strategy != "random") {
    throw std::invalid_argument("search strategy must be orbit-union or random");
  }
  std::vector<std::string> specs;
  SplitMix64 rng(cfg.seed);
  const auto degrees = divisors(f.r());
  for (std::uint64_t t = 0; t < cfg.budget; ++t) {
    if (cfg.strategy == "random") {
      const std::uint64_t n = 2 + rng.below(std::uint64_t{q} * q - 1);
      specs.push_back("family:random:n=" + u64(n) + ",seed=" + u64(rng.next()));
      continue;
    }
    const ElemSet sub = subfield_elements(f, degrees[rng.below(degrees.size())]);
    const std::uint64_t ngens = 1 + rng.below(2);
    std::string gens;
    std::vector<Mat2> gen_list;
    for (std::uint64_t g = 0; g < ngens; ++g) {
      gen_list.push_back(random_subfield_sl2(f, sub, rng));
      gens += (g ? "|" : "") + format_matrix(gen_list.back());
    }
    const auto orbits = subgroup_orbits(f, gen_list);
    const std::size_t k = orbits.orbits.size() - 1;  // non-origin orbits
    std::string sel;
    for (std::size_t i = 0; i <= k; ++i) {
      if (rng.below(2)) sel += (sel.empty() ? "" : "+") + u64(i);
    }
    if (sel.empty() || sel == "0") sel += (sel.empty() ? "" : "+") + u64(1 + rng.below(k));
    specs.push_back("family:orbit-union:gens=" + gens + ",orbits=" + sel);
  }

  struct Cand {
    PointSet set;
    PlanarEval ev;
    std::uint64_t group_order = 0;
    bool contains_group = true;
  };
  auto cands = parallel_map<Cand>(specs.size(), cfg.workers, [&](std::uint64_t i) {
    const FamilySpec spec = parse_family_spec(specs[i]);
    Cand c;
    c.set = gen_family(f, spec);
    c.ev = evaluate_planar(f, c.set, specs[i], cfg.constants, q <= 9);
    if (spec.name == "orbit-union") {
      std::vector<Mat2> gens;
      const std::string text = spec.param("gens", "");
      std::size_t pos = 0;
      while (pos <= text.size()) {
        const auto bar = text.find('|', pos);
        gens.push_back(parse_matrix(text.substr(pos, bar - pos), q));
        if (bar == std::string::npos) break;
        pos = bar + 1;
      }
      const MatrixSet group = subgroup_orbits(f, gens).group;
      c.group_order = group.size();
      c.contains_group = group.is_subset_of(stabilizer(f, c.set));
      c.ev.extra_violation = !c.contains_group;
    }
    return c;
  });

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (cands[i].ev.report.lines_meeting < 2) continue;
    bool duplicate = false;
    for (auto j : order) {
      if (cands[j].set == cands[i].set) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& rx = cands[x].ev.report;
    const auto& ry = cands[y].ev.report;
    const double ax = rx.row("three-halves-nonzero").ratio, ay = ry.row("three-halves-nonzero").ratio;
    if (ax != ay) return ax > ay;
    return rx.row("three-halves").ratio > ry.row("three-halves").ratio;
  });

  CampaignResult res;
  res.table.schema = std::string(kSchema) + " search";
  res.table.columns = {"rank", "descriptor", "size_e", "size_e_nonzero", "lines_meeting", "r_e",
                       "three_halves_nonzero_ratio", "three_halves_ratio", "subgroup_order",
                       "oracle", "violation"};
  std::uint64_t violations = 0;
  for (const auto& c : cands) violations += c.ev.violation();
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const auto& c = cands[order[rank]];
    const auto& rep = c.ev.report;
    res.table.rows.push_back({u64(rank + 1), c.ev.descriptor, u64(rep.size_e),
                              u64(rep.size_e_nonzero), u64(rep.lines_meeting), u64(rep.r_e),
                              format_ratio(rep.row("three-halves-nonzero").ratio),
                              format_ratio(rep.row("three-halves").ratio),
                              c.group_order ? u64(c.group_order) : "NA", c.ev.oracle,
                              flag(c.ev.violation())});
  }
  auto& s = res.summary;
  s.add("campaign", campaign_name(cfg.campaign));
  s.add("q", u64(q));
  s.add("strategy", cfg.strategy);
  s.add("candidates", u64(cands.size()));
  s.add("rows", u64(order.size()));
  s.add("best_nonzero_ratio", order.empty() ? "NA" : res.table.rows[0][6]);
  s.add("best_at", order.empty() ? "NA" : res.table.rows[0][1]);
  s.add("violations", u64(violations));
  s.violations = violations;
  return res;
}

}  // namespace

Campaign parse_campaign(const std::string& name) {
  for (const auto& c : kCampaigns)
    if (name == c.name) return c.id;
  throw std::invalid_argument("unknown campaign '" + name + "'");
}

const char* campaign_name(Campaign c) {
  for (const auto& k : kCampaigns)
    if (k.id == c) return k.name;
  return "?";
}

unsigned default_workers() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    unsigned v = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size() && v > 0) return v;
  }
  return 1;
}

std::string format_ratio(double value, bool applicable) {
  if (!applicable || !std::isfinite(value)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::out_of_range("no column " + name);
}

const std::string& Table::cell(std::size_t row, const std::string& name) const {
  return rows.at(row).at(column(name));
}

const std::string& CampaignSummary::get(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  throw std::out_of_range("no summary entry " + key);
}

CampaignResult run_campaign(const CampaignConfig& cfg) {
  const Field f = Field::make(cfg.p, cfg.r);
  switch (cfg.campaign) {
    case Campaign::ExhaustiveSubsets: return run_exhaustive_subsets(f, cfg, false);
    case Campaign::PrimePowerExhaustive: return run_exhaustive_subsets(f, cfg, true);
    case Campaign::TwoLineExhaustive: return run_two_line(f, cfg);
    case Campaign::LinesetExhaustive: return run_lineset(f, cfg);
    case Campaign::FamilyVerify: return run_family_verify(f, cfg);
    case Campaign::LineClassAudit: return run_line_class_audit(f, cfg);
    case Campaign::IncidenceReport: return run_incidence(f, cfg);
    case Campaign::SearchExtremal: return run_search(f, cfg);
  }
  throw std::invalid_argument("unhandled campaign");
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json json_cell(const std::string& s) {
  if (s == "NA") return nullptr;
  std::int64_t i = 0;
  if (auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
      ec == std::errc{} && p == s.data() + s.size()) {
    return i;
  }
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (!s.empty() && end == s.c_str() + s.size()) return d;
  return s;
}

}  // namespace

void write_table(std::ostream& out, const Table& table, OutputFormat format, bool header) {
  if (format == OutputFormat::Json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < table.columns.size(); ++i) obj[table.columns[i]] = json_cell(row[i]);
      arr.push_back(std::move(obj));
    }
    out << arr.dump(1) << '\n';
    return;
  }
  if (header) {
    out << "# " << table.schema << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
  }
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(row[i]);
    out << '\n';
  }
}

void write_summary(std::ostream& out, const CampaignSummary& summary) {
  for (const auto& [k, v] : summary.entries) out << k << ": " << v << '\n';
}

}  // namespace slab
