#include "sygr/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "sygr/error.hpp"
#include "sygr/synth.hpp"

namespace sygr {

namespace {

std::string pct(double rate) { return std::to_string(to_percent(rate)); }

std::string signed_pct(double rate) {
  const long v = to_percent(rate);
  return (v > 0 ? "+" : "") + std::to_string(v);
}

std::string transition_label(int k) {
  return "Y" + std::to_string(k) + "->Y" + std::to_string(k + 1);
}

std::vector<int> persistence_keys(const PersistenceTable& t) {
  std::vector<int> keys;
  for (const auto& [k, v] : t.unexposed) keys.push_back(k);
  for (const auto& [k, v] : t.exposed) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

template <typename Fmt>
std::string lookup(const std::map<int, double>& m, int k, Fmt fmt) {
  const auto it = m.find(k);
  return it == m.end() ? "NA" : fmt(it->second);
}

}  // namespace

long to_percent(double rate) { return std::lround(rate * 100.0); }

std::string percentile_label(double q) { return "p" + format_double(std::round(q * 1e6) / 1e4); }

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows, double ci_level) {
  out << "cohort,method," << percentile_label((1 - ci_level) / 2) << ",median,"
      << percentile_label((1 + ci_level) / 2) << ",width\n";
  for (const auto& r : rows) {
    out << r.cohort << ',' << r.method << ',' << pct(r.summary.lo) << ',' << pct(r.summary.median)
        << ',' << pct(r.summary.hi) << ',' << pct(r.summary.width) << '\n';
  }
}

void write_summary_full_csv(std::ostream& out, std::span<const SummaryRow> rows, double ci_level) {
  out << "cohort,method,estimate," << percentile_label((1 - ci_level) / 2) << ",median,"
      << percentile_label((1 + ci_level) / 2) << ",width,replicates,failed\n";
  for (const auto& r : rows) {
    out << r.cohort << ',' << r.method << ',' << format_double(r.point) << ','
        << format_double(r.summary.lo) << ',' << format_double(r.summary.median) << ','
        << format_double(r.summary.hi) << ',' << format_double(r.summary.width) << ','
        << r.summary.ensemble.size() << ',' << r.summary.failed << '\n';
  }
}

void write_summary_text(std::ostream& out, std::span<const SummaryRow> rows, double ci_level) {
  const std::string level = format_double(std::round(ci_level * 1e6) / 1e4);
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"Cohort", "Method", percentile_label((1 - ci_level) / 2), "Median",
                   percentile_label((1 + ci_level) / 2), level + "% CI width"});
  std::string last_cohort;
  for (const auto& r : rows) {
    cells.push_back({r.cohort == last_cohort ? "" : r.cohort, r.method, pct(r.summary.lo),
                     pct(r.summary.median), pct(r.summary.hi), pct(r.summary.width)});
    last_cohort = r.cohort;
  }
  out << "Six-year graduation rate (%), rounded to the nearest percentage point\n"
      << align_columns(cells);
}

void write_ensemble_csv(std::ostream& out, const EstimateSummary& s) {
  out << "replicate,estimate\n";
  for (std::size_t i = 0; i < s.ensemble.size(); ++i) {
    out << s.replicate_index[i] + 1 << ',' << format_double(s.ensemble[i]) << '\n';
  }
}

std::vector<double> read_ensemble_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "replicate,estimate") {
    throw ParseError(0, "(header)", "expected header 'replicate,estimate'");
  }
  std::vector<double> values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(row, "estimate", "missing field");
    const std::string_view field(line.data() + comma + 1, line.size() - comma - 1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
      throw ParseError(row, "estimate", "expected a number");
    }
    values.push_back(v);
  }
  return values;
}

void write_kde_csv(std::ostream& out, std::span<const KdePoint> points) {
  out << "x,density\n";
  for (const auto& p : points) out << format_double(p.x) << ',' << format_double(p.density) << '\n';
}

void write_persistence_csv(std::ostream& out, std::span<const PersistenceTable> tables) {
  const auto full = [](double v) { return format_double(v); };
  out << "group,transition,unexposed,exposed,difference\n";
  for (const auto& t : tables) {
    for (int k : persistence_keys(t)) {
      const auto u = t.unexposed.find(k);
      const auto e = t.exposed.find(k);
      const std::string diff = (u != t.unexposed.end() && e != t.exposed.end())
                                   ? format_double(e->second - u->second)
                                   : "NA";
      out << t.label << ',' << transition_label(k) << ',' << lookup(t.unexposed, k, full) << ','
          << lookup(t.exposed, k, full) << ',' << diff << '\n';
    }
  }
}

void write_persistence_text(std::ostream& out, std::span<const PersistenceTable> tables) {
  const auto rounded = [](double v) { return pct(v); };
  for (const auto& t : tables) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"Transition", "No-LA", "LA", "Difference (LA - no-LA)"});
    for (int k : persistence_keys(t)) {
      const auto u = t.unexposed.find(k);
      const auto e = t.exposed.find(k);
      const std::string diff = (u != t.unexposed.end() && e != t.exposed.end())
                                   ? signed_pct(e->second - u->second)
                                   : "NA";
      cells.push_back({transition_label(k), lookup(t.unexposed, k, rounded),
                       lookup(t.exposed, k, rounded), diff});
    }
    out << "Year-to-year persistence (%), " << t.label << '\n' << align_columns(cells) << '\n';
  }
}

std::string align_columns(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) line += "  ";
      line += row[i];
      if (i + 1 < row.size()) line.append(widths[i] - row[i].size(), ' ');
    }
    out += line + '\n';
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace sygr
