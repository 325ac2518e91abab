// slab: stabilizer laboratory for subsets of F_q^2 under SL2(F_q).

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "slab/families.hpp"
#include "slab/harness.hpp"

using namespace slab;

namespace {

struct Options {
  std::uint32_t p = 2;
  std::uint32_t r = 1;
  std::string set;
  std::string campaign;
  BoundConstants constants;
  std::uint64_t budget = 200;
  std::uint64_t seed = 1;
  unsigned workers = default_workers();
  std::string out;
  std::string format = "csv";
  std::string strategy = "orbit-union";
  std::size_t m1 = 0;
  std::uint64_t range_begin = 0;
  std::uint64_t range_end = 0;
  bool allow_large = false;
  bool brute = false;
  bool list = false;
  bool self_test = false;
};

void add_field_flags(CLI::App* app, Options& o) {
  app->add_option("--p", o.p, "Characteristic (prime)")->required();
  app->add_option("--r", o.r, "Extension degree")->default_val(1);
}

void add_campaign_flags(CLI::App* app, Options& o) {
  app->add_option("--c", o.constants.c, "Incidence constant for report columns")->default_val(1.0);
  app->add_option("--c1", o.constants.c1, "Size constant for threshold rows")->default_val(1.0);
  app->add_option("--c2", o.constants.c2, "Stabilizer constant for threshold rows")->default_val(1.0);
  app->add_option("--alpha", o.constants.alpha, "Size exponent for the threshold row")->default_val(1.0);
  app->add_option("--beta", o.constants.beta, "Stabilizer exponent for the threshold row")->default_val(1.5);
  app->add_option("--budget", o.budget, "Random instances or candidates")->default_val(200);
  app->add_option("--seed", o.seed, "Seed")->default_val(1);
  app->add_option("--workers", o.workers, "Worker threads (default $SLAB_WORKERS or 1)");
  app->add_option("--out", o.out, "Output path (default stdout)");
  app->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

int emit(const Options& o, const CampaignResult& res) {
  const auto fmt = o.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  const bool header = o.range_begin == 0;
  if (o.out.empty()) {
    write_table(std::cout, res.table, fmt, header);
    write_summary(std::cerr, res.summary);
  } else {
    std::ofstream file(o.out);
    if (!file) {
      std::cerr << "cannot open " << o.out << '\n';
      return 2;
    }
    write_table(file, res.table, fmt, header);
    if (!file.flush()) {
      std::cerr << "write to " << o.out << " failed\n";
      return 2;
    }
    write_summary(std::cout, res.summary);
  }
  return res.ok() ? 0 : 1;
}

CampaignConfig to_config(const Options& o, Campaign c) {
  CampaignConfig cfg;
  cfg.p = o.p;
  cfg.r = o.r;
  cfg.campaign = c;
  cfg.constants = o.constants;
  cfg.budget = o.budget;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.strategy = o.strategy;
  if (!o.set.empty()) cfg.set_spec = o.set;
  if (o.m1) cfg.m1 = o.m1;
  if (o.range_begin) cfg.range_begin = o.range_begin;
  if (o.range_end) cfg.range_end = o.range_end;
  cfg.allow_large = o.allow_large;
  return cfg;
}

int cmd_field(const Options& o) {
  const Field f = Field::make(o.p, o.r);
  std::cout << "q: " << f.q() << "\nmodulus: " << f.modulus_string()
            << "\nmodulus_code: " << f.modulus_code() << "\nprimitive: " << f.primitive() << '\n';
  if (o.self_test) {
    std::uint64_t failures = 0;
    for (Elem x = 1; x < f.q(); ++x) failures += f.mul(x, f.inv(x)) != 1;
    if (f.q() <= 64) {
      for (Elem x = 0; x < f.q(); ++x)
        for (Elem y = 0; y < f.q(); ++y)
          for (Elem z = 0; z < f.q(); ++z) {
            failures += f.mul(x, f.add(y, z)) != f.add(f.mul(x, y), f.mul(x, z));
            failures += f.mul(f.mul(x, y), z) != f.mul(x, f.mul(y, z));
            failures += f.add(f.add(x, y), z) != f.add(x, f.add(y, z));
          }
    }
    std::cout << "self_test_failures: " << failures << '\n';
    return failures ? 1 : 0;
  }
  return 0;
}

int cmd_family(const Options& o) {
  const Field f = Field::make(o.p, o.r);
  const PointSet e = gen_family(f, o.set);
  std::cout << "size: " << e.size() << "\npoints: " << format_point_list(e.points()) << '\n';
  return 0;
}

int cmd_stab(const Options& o) {
  const Field f = Field::make(o.p, o.r);
  const PointSet e = gen_family(f, o.set);
  const MatrixSet r_e = o.brute ? stabilizer_brute(f, e) : stabilizer(f, e);
  const BoundReport rep = bound_report(f, e, o.constants, r_e);
  std::cout << "size_e: " << rep.size_e << "\nsize_e_nonzero: " << rep.size_e_nonzero
            << "\nlines_meeting: " << rep.lines_meeting << "\nr_e: " << rep.r_e
            << "\ncontained_in_origin_line: " << rep.contained_in_origin_line
            << "\ncollinear: " << rep.collinear << '\n';
  for (const auto& row : rep.rows) {
    std::cout << row.name << ": applicable=" << row.applicable
              << " rhs=" << format_ratio(row.rhs) << " ratio=" << format_ratio(row.ratio, row.applicable)
              << (row.violated ? " VIOLATED" : "") << '\n';
  }
  if (o.list) {
    for (const auto& m : r_e) std::cout << format_matrix(m) << '\n';
  }
  return rep.any_violation() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slab: SL2 stabilizers of planar sets over finite fields"};
  app.require_subcommand(1);
  Options o;

  auto* field = app.add_subcommand("field", "Describe GF(p^r)");
  add_field_flags(field, o);
  field->add_flag("--self-test", o.self_test, "Check field axioms exhaustively");

  auto* family = app.add_subcommand("family", "List the points of a set spec");
  add_field_flags(family, o);
  family->add_option("--set", o.set, "Set spec")->required();

  auto* stab = app.add_subcommand("stab", "Compute R_E and the bound report");
  add_field_flags(stab, o);
  stab->add_option("--set", o.set, "Set spec")->required();
  stab->add_flag("--brute", o.brute, "Filter all of SL2 instead of the transporter search");
  stab->add_flag("--list", o.list, "Print every matrix of R_E");
  add_campaign_flags(stab, o);

  auto* exhaustive = app.add_subcommand("exhaustive", "Run a verification campaign");
  add_field_flags(exhaustive, o);
  add_campaign_flags(exhaustive, o);
  exhaustive->add_option("--campaign", o.campaign, "Campaign name")->default_val("exhaustive-subsets");
  exhaustive->add_option("--set", o.set, "Set spec (family-verify)");
  exhaustive->add_option("--range-begin", o.range_begin, "First instance index");
  exhaustive->add_option("--range-end", o.range_end, "One past the last instance index");
  exhaustive->add_flag("--allow-large", o.allow_large, "Sample subsets at q = 5");

  auto* incidence = app.add_subcommand("incidence", "Random incidence instances in F_q^3");
  add_field_flags(incidence, o);
  add_campaign_flags(incidence, o);

  auto* audit = app.add_subcommand("audit", "Line-class counting audit");
  add_field_flags(audit, o);
  add_campaign_flags(audit, o);
  audit->add_option("--set", o.set, "Set spec (default: random uniform-multiplicity sets)");
  audit->add_option("--m1", o.m1, "Class multiplicity (default: every class)");

  auto* search = app.add_subcommand("search", "Rank candidate sets by |R_E| / |E|^{3/2}");
  add_field_flags(search, o);
  add_campaign_flags(search, o);
  search->add_option("--strategy", o.strategy, "orbit-union or random")
      ->check(CLI::IsMember({"orbit-union", "random"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*field) return cmd_field(o);
    if (*family) return cmd_family(o);
    if (*stab) return cmd_stab(o);
    if (*exhaustive) return emit(o, run_campaign(to_config(o, parse_campaign(o.campaign))));
    if (*incidence) return emit(o, run_campaign(to_config(o, Campaign::IncidenceReport)));
    if (*audit) return emit(o, run_campaign(to_config(o, Campaign::LineClassAudit)));
    if (*search) return emit(o, run_campaign(to_config(o, Campaign::SearchExtremal)));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
