#include "sygr/estimate.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "sygr/error.hpp"

namespace sygr {

namespace {

bool in_cohorts(std::span<const int> cohorts, int year) {
  return std::find(cohorts.begin(), cohorts.end(), year) != cohorts.end();
}

void require_complete(std::span<const int> cohorts, int horizon_year) {
  if (cohorts.empty()) throw std::invalid_argument("at least one target cohort is required");
  for (int c : cohorts) {
    if (horizon_year < c + kMaxYear) throw HorizonTooEarly(c, horizon_year);
  }
}

std::string cohort_list(std::span<const int> cohorts) {
  std::string s;
  for (int c : cohorts) s += (s.empty() ? "" : ",") + std::to_string(c);
  return s;
}

TransitionCounts accumulate_where(std::span<const StudentRecord> records, int horizon_year,
                                  bool la_truncate, std::span<const int> cohorts) {
  TransitionCounts counts;
  for (const auto& r : records) {
    if (!cohorts.empty() && !in_cohorts(cohorts, r.cohort_year)) continue;
    auto transitions = derive_transitions(r, horizon_year);
    if (la_truncate) transitions = sygr::la_truncate(r, std::move(transitions));
    for (const auto& t : transitions) counts.add(t.from, t.to);
  }
  return counts;
}

}  // namespace

std::string_view estimator_name(EstimatorKind k) noexcept {
  switch (k) {
    case EstimatorKind::Traditional: return "traditional";
    case EstimatorKind::MarkovReduced: return "markov-reduced";
    case EstimatorKind::MarkovFull: return "markov-full";
  }
  return "?";
}

std::optional<EstimatorKind> parse_estimator(std::string_view name) noexcept {
  for (auto k : {EstimatorKind::Traditional, EstimatorKind::MarkovReduced,
                 EstimatorKind::MarkovFull}) {
    if (estimator_name(k) == name) return k;
  }
  return std::nullopt;
}

void EstimatorSpec::validate() const {
  switch (kind) {
    case EstimatorKind::Traditional:
      if (la_truncate) throw std::invalid_argument("LA truncation does not apply to traditional");
      require_complete(cohorts, horizon_year);
      break;
    case EstimatorKind::MarkovReduced:
      require_complete(cohorts, horizon_year);
      break;
    case EstimatorKind::MarkovFull:
      break;
  }
}

TransitionCounts accumulate_counts(std::span<const StudentRecord> records, int horizon_year,
                                   bool la_truncate) {
  return accumulate_where(records, horizon_year, la_truncate, {});
}

double sygr_traditional(std::span<const StudentRecord> records, std::span<const int> cohorts,
                        int horizon_year) {
  require_complete(cohorts, horizon_year);
  std::int64_t started = 0;
  std::int64_t graduated = 0;
  for (const auto& r : records) {
    if (!in_cohorts(cohorts, r.cohort_year)) continue;
    ++started;
    if (r.outcome == Outcome::Graduated && r.outcome_year <= kMaxYear) ++graduated;
  }
  if (started == 0) throw EmptyCohort("no students in cohort " + cohort_list(cohorts));
  return static_cast<double>(graduated) / static_cast<double>(started);
}

double sygr_traditional(std::span<const StudentRecord> records, int cohort_year,
                        int horizon_year) {
  const int cohorts[] = {cohort_year};
  return sygr_traditional(records, cohorts, horizon_year);
}

double sygr_markov_reduced(std::span<const StudentRecord> records, std::span<const int> cohorts,
                           int horizon_year, bool la_truncate) {
  require_complete(cohorts, horizon_year);
  const auto counts = accumulate_where(records, horizon_year, la_truncate, cohorts);
  if (counts.total() == 0) throw EmptyCohort("no transitions in cohort " + cohort_list(cohorts));
  return sygr_markov(build_matrix(counts, EmptyRows::kAbsorbUnreachable));
}

double sygr_markov_reduced(std::span<const StudentRecord> records, int cohort_year,
                           int horizon_year, bool la_truncate) {
  const int cohorts[] = {cohort_year};
  return sygr_markov_reduced(records, cohorts, horizon_year, la_truncate);
}

double sygr_markov_full(std::span<const StudentRecord> records, int horizon_year,
                        std::optional<int> /*target_cohort*/, bool la_truncate) {
  if (records.empty()) throw NoRecords();
  const auto counts = accumulate_counts(records, horizon_year, la_truncate);
  return sygr_markov(build_matrix(counts, EmptyRows::kAbsorbUnreachable));
}

double estimate(std::span<const StudentRecord> records, const EstimatorSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case EstimatorKind::Traditional:
      return sygr_traditional(records, spec.cohorts, spec.horizon_year);
    case EstimatorKind::MarkovReduced:
      return sygr_markov_reduced(records, spec.cohorts, spec.horizon_year, spec.la_truncate);
    case EstimatorKind::MarkovFull:
      return sygr_markov_full(records, spec.horizon_year, std::nullopt, spec.la_truncate);
  }
  throw std::logic_error("unknown estimator");
}

std::map<int, double> persistence_rates(std::span<const StudentRecord> records, int horizon_year,
                                        bool la_truncate) {
  if (records.empty()) throw NoRecords();
  const auto counts = accumulate_counts(records, horizon_year, la_truncate);
  // Same ratio build_matrix() forms, read per row so that a group whose
  // evidence starts after Y1 (LA-truncated) still reports its later rows.
  std::map<int, double> rates;
  for (int k = 1; k < kMaxYear; ++k) {
    const auto total = counts.row_total(year_state(k));
    if (total == 0) continue;
    rates[k] = static_cast<double>(counts.at(year_state(k), year_state(k + 1))) /
               static_cast<double>(total);
  }
  if (rates.empty() && counts.row_total(AcademicState::Y6) == 0) {
    throw InsufficientData(AcademicState::Y1);
  }
  return rates;
}

}  // namespace sygr
