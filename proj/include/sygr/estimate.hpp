#pragma once

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sygr/ingest.hpp"
#include "sygr/markov.hpp"

namespace sygr {

enum class EstimatorKind { Traditional, MarkovReduced, MarkovFull };

std::string_view estimator_name(EstimatorKind k) noexcept;  // traditional | markov-reduced | markov-full
std::optional<EstimatorKind> parse_estimator(std::string_view name) noexcept;

// What to estimate. cohorts holds the target cohort(s) for Traditional and
// MarkovReduced (several cohorts = their union, "all combined"); for
// MarkovFull it is only a report label. la_truncate counts an exposed
// student's transitions only from their first LA year onward.
struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::MarkovFull;
  std::vector<int> cohorts;
  int horizon_year = 0;
  bool la_truncate = false;

  // Throws std::invalid_argument for a malformed spec and HorizonTooEarly
  // when a target cohort lacks six observable years.
  void validate() const;
};

// Transition counts over records as of horizon_year.
TransitionCounts accumulate_counts(std::span<const StudentRecord> records, int horizon_year,
                                   bool la_truncate = false);

// N_deg / N_start over the target cohort(s)' students.
double sygr_traditional(std::span<const StudentRecord> records, std::span<const int> cohorts,
                        int horizon_year);
double sygr_traditional(std::span<const StudentRecord> records, int cohort_year,
                        int horizon_year);

// Markov estimate from the target cohort(s)' transitions only.
double sygr_markov_reduced(std::span<const StudentRecord> records, std::span<const int> cohorts,
                           int horizon_year, bool la_truncate = false);
double sygr_markov_reduced(std::span<const StudentRecord> records, int cohort_year,
                           int horizon_year, bool la_truncate = false);

// Markov estimate from every record's completed transitions pooled together.
// target_cohort only labels the result.
double sygr_markov_full(std::span<const StudentRecord> records, int horizon_year,
                        std::optional<int> target_cohort = std::nullopt,
                        bool la_truncate = false);

double estimate(std::span<const StudentRecord> records, const EstimatorSpec& spec);

// P(Yk -> Yk+1) for k = 1..5 from the pooled matrix, keyed by k. States that
// no observed student reaches are omitted.
std::map<int, double> persistence_rates(std::span<const StudentRecord> records, int horizon_year,
                                        bool la_truncate = false);

}  // namespace sygr
