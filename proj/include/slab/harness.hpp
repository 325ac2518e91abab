#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "slab/stabilizer.hpp"

namespace slab {

enum class Campaign {
  ExhaustiveSubsets,
  TwoLineExhaustive,
  LinesetExhaustive,
  FamilyVerify,
  PrimePowerExhaustive,
  LineClassAudit,
  IncidenceReport,
  SearchExtremal,
};

Campaign parse_campaign(const std::string& name);
const char* campaign_name(Campaign c);

enum class OutputFormat { Csv, Json };

inline constexpr const char* kWorkersEnv = "SLAB_WORKERS";
/// SLAB_WORKERS when set to a positive integer, else 1.
unsigned default_workers();

struct CampaignConfig {
  std::uint32_t p = 2;
  std::uint32_t r = 1;
  Campaign campaign = Campaign::ExhaustiveSubsets;
  BoundConstants constants;
  std::uint64_t budget = 200;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string strategy = "orbit-union";  // search-extremal: orbit-union | random
  std::optional<std::string> set_spec;   // family-verify / prop25-audit
  std::optional<std::size_t> m1;         // prop25-audit class; default every class
  std::optional<std::uint64_t> range_begin;
  std::optional<std::uint64_t> range_end;
  bool allow_large = false;  // exhaustive-subsets: q = 5 by sampling `budget` subsets
};

/// Rows of strings under fixed columns; `schema` is written as a leading "# <schema>" line.
struct Table {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  const std::string& cell(std::size_t row, const std::string& name) const;
};

struct CampaignSummary {
  std::vector<std::pair<std::string, std::string>> entries;
  std::uint64_t violations = 0;

  void add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }
  const std::string& get(const std::string& key) const;
};

struct CampaignResult {
  Table table;
  CampaignSummary summary;
  bool ok() const { return summary.violations == 0; }
};

/// Throws std::invalid_argument on size-guard or parameter violations.
CampaignResult run_campaign(const CampaignConfig& config);

/// CSV: optional schema and header lines then rows. JSON: an array of row objects.
void write_table(std::ostream& out, const Table& table, OutputFormat format, bool header = true);
void write_summary(std::ostream& out, const CampaignSummary& summary);

/// Ratio text: 6 significant digits, or "NA".
std::string format_ratio(double value, bool applicable = true);

/**
 * Evaluates fn(i) for i in [0, n) on `workers` threads over contiguous index
 * ranges and returns the results in index order.
 */
template <typename T>
std::vector<T> parallel_map(std::uint64_t n, unsigned workers,
                            const std::function<T(std::uint64_t)>& fn) {
  if (workers <= 1 || n < 2) {
    std::vector<T> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
  }
  const std::uint64_t chunks = std::min<std::uint64_t>(workers, n);
  std::vector<std::vector<T>> parts(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> threads;
  for (std::uint64_t w = 0; w < chunks; ++w) {
    threads.emplace_back([&, w] {
      try {
        const std::uint64_t begin = n * w / chunks, end = n * (w + 1) / chunks;
        parts[w].reserve(end - begin);
        for (std::uint64_t i = begin; i < end; ++i) parts[w].push_back(fn(i));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(n);
  for (auto& part : parts)
    for (auto& item : part) out.push_back(std::move(item));
  return out;
}

}  // namespace slab
