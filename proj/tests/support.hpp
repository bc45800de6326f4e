#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sygr/ingest.hpp"
#include "sygr/rng.hpp"
#include "sygr/states.hpp"
#include "sygr/synth.hpp"

namespace sygr::testing {

inline StudentRecord rec(std::string id, int cohort, Outcome outcome, int outcome_year,
                         std::optional<int> la_year = std::nullopt) {
  StudentRecord r;
  r.student_id = std::move(id);
  r.cohort_year = cohort;
  r.college = "SCI";
  r.outcome = outcome;
  r.outcome_year = outcome_year;
  r.la_year = la_year;
  return r;
}

// n copies of one trajectory with ids prefix0, prefix1, ...
inline void add_students(std::vector<StudentRecord>& out, const std::string& prefix, int n,
                         int cohort, Outcome outcome, int outcome_year,
                         std::optional<int> la_year = std::nullopt) {
  for (int i = 0; i < n; ++i) {
    out.push_back(rec(prefix + std::to_string(i), cohort, outcome, outcome_year, la_year));
  }
}

// Each transient row split between (next, D, G), some cells zero at random.
inline TransitionMatrix random_matrix(Stream& rng) {
  using S = AcademicState;
  TransitionMatrix p = TransitionMatrix::absorbing_skeleton();
  for (int k = 1; k <= kMaxYear; ++k) {
    const S from = year_state(k);
    double w[3];
    for (double& x : w) x = rng.bernoulli(0.15) ? 0.0 : rng.uniform() + 1e-3;
    if (k == kMaxYear) w[0] = 0.0;
    if (w[0] + w[1] + w[2] == 0.0) w[1] = 1.0;
    const double total = w[0] + w[1] + w[2];
    if (k < kMaxYear) p(from, year_state(k + 1)) = w[0] / total;
    p(from, S::DropOut) = w[1] / total;
    p(from, S::Graduated) = w[2] / total;
  }
  return p;
}

// Rows given as {next, D, G} for Y1..Y5 and {D, G} for Y6.
inline TransitionMatrix chain(const std::vector<std::vector<double>>& rows) {
  TransitionMatrix p = TransitionMatrix::absorbing_skeleton();
  for (int k = 1; k <= kMaxYear; ++k) {
    const auto& r = rows.at(static_cast<std::size_t>(k - 1));
    const AcademicState from = year_state(k);
    if (k < kMaxYear) {
      p(from, year_state(k + 1)) = r.at(0);
      p(from, AcademicState::DropOut) = r.at(1);
      p(from, AcademicState::Graduated) = r.at(2);
    } else {
      p(from, AcademicState::DropOut) = r.at(0);
      p(from, AcademicState::Graduated) = r.at(1);
    }
  }
  return p;
}

// The matrix used throughout the Monte Carlo checks: SYGR about 0.665.
inline TransitionMatrix reference_matrix() {
  return chain({{0.88, 0.12, 0.0},
                {0.91, 0.09, 0.0},
                {0.93, 0.07, 0.0},
                {0.35, 0.03, 0.62},
                {0.30, 0.10, 0.60},
                {0.40, 0.60}});
}

// Everyone graduates at the end of year 4.
inline TransitionMatrix grad_in_four() {
  return chain({{1, 0, 0}, {1, 0, 0}, {1, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0}});
}

// Cohorts first, first+1, ... observed at horizon first+6: the first is
// complete, the rest partial.
inline GeneratorSpec panel_spec(const TransitionMatrix& p, std::size_t per_cohort,
                                std::uint64_t seed, int first = 2013, int cohorts = 6) {
  GeneratorSpec spec;
  spec.true_matrix = p;
  for (int c = 0; c < cohorts; ++c) spec.cohort_sizes[first + c] = per_cohort;
  spec.horizon_year = first + 6;
  spec.seed = seed;
  return spec;
}

}  // namespace sygr::testing
