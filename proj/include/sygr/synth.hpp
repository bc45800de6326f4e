#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sygr/ingest.hpp"
#include "sygr/states.hpp"

namespace sygr {

// Parameters of a synthetic panel with known ground truth.
struct GeneratorSpec {
  TransitionMatrix true_matrix;
  // When set, LA-exposed students move by this matrix from their LA year on.
  std::optional<TransitionMatrix> effect_matrix;
  std::map<int, std::size_t> cohort_sizes;  // cohort_year -> students
  int horizon_year = 0;
  double aalana_rate = 0.0;
  double first_gen_rate = 0.0;
  double la_rate = 0.0;
  std::array<double, kMaxYear> la_year_weights = {1, 1, 1, 1, 1, 1};
  std::vector<std::pair<std::string, double>> colleges = {{"SCI", 1.0}};
  // Fraction of year-6 non-graduates written as still Enrolled past year 6.
  double slow_finisher_rate = 0.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws SpecError(0, ...)
};

// Plain-text `key = value` format; matrices follow their key as eight
// whitespace-separated rows. Throws SpecError with the offending line.
GeneratorSpec parse_generator_spec(std::istream& in);
GeneratorSpec parse_generator_spec(std::string_view text);
std::string format_generator_spec(const GeneratorSpec& spec);

struct GeneratedPanel {
  std::vector<StudentRecord> records;
  // Simulated steps observable at the horizon, per record (same order).
  // Empty unless requested.
  std::vector<std::vector<Transition>> walk_log;
};

// Students are simulated independently from per-index random streams;
// output depends only on the spec (seed included).
GeneratedPanel generate_panel(const GeneratorSpec& spec, bool keep_walk_log = false);

// Explicit enumeration of every path out of Y1, summing the probability of
// sitting in Graduated after six steps. Shares no code with matrix_power.
double brute_force_sygr(const TransitionMatrix& p);

// Transitions re-derived through ingest, accumulated.
TransitionCounts round_trip_counts(std::span<const StudentRecord> records, int horizon_year);

// Scales P(Y1->Y2) to `persistence`, keeping the proportions of the rest of
// the Y1 row.
TransitionMatrix with_first_year_persistence(const TransitionMatrix& p, double persistence);

std::string format_double(double v);  // shortest round-trip representation

}  // namespace sygr
