#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sygr/bootstrap.hpp"
#include "sygr/kde.hpp"

namespace sygr {

// One line of a cohort x method table.
struct SummaryRow {
  std::string cohort;
  std::string method;
  double point = 0.0;  // estimate on the original data
  EstimateSummary summary;
};

// Rates to integer percent, half away from zero.
long to_percent(double rate);

// Column label of a percentile, e.g. 0.025 -> "p2.5".
std::string percentile_label(double q);

// cohort,method,p2.5,median,p97.5,width in rounded percent. Width is rounded
// from the unrounded hi - lo.
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows, double ci_level);
void write_summary_full_csv(std::ostream& out, std::span<const SummaryRow> rows, double ci_level);
void write_summary_text(std::ostream& out, std::span<const SummaryRow> rows, double ci_level);

// replicate,estimate (replicate numbered from 1).
void write_ensemble_csv(std::ostream& out, const EstimateSummary& s);
std::vector<double> read_ensemble_csv(std::istream& in);

void write_kde_csv(std::ostream& out, std::span<const KdePoint> points);

// Persistence rates of two groups per transition; keys are k in Yk -> Yk+1.
struct PersistenceTable {
  std::string label;
  std::map<int, double> unexposed;
  std::map<int, double> exposed;
};
void write_persistence_csv(std::ostream& out, std::span<const PersistenceTable> tables);
void write_persistence_text(std::ostream& out, std::span<const PersistenceTable> tables);

// Renders rows of cells as space-aligned columns.
std::string align_columns(const std::vector<std::vector<std::string>>& rows);

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view text) noexcept;

}  // namespace sygr
