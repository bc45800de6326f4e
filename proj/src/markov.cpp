#include "sygr/markov.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sygr/error.hpp"

namespace sygr {

namespace {

std::array<bool, kMaxYear> reachable_years(const TransitionCounts& counts) {
  std::array<bool, kMaxYear> reachable{};
  reachable[0] = true;
  for (int year = 2; year <= kMaxYear; ++year) {
    reachable[year - 1] =
        reachable[year - 2] && counts.at(year_state(year - 1), year_state(year)) > 0;
  }
  return reachable;
}

ProbabilityGrid identity_grid() {
  ProbabilityGrid g{};
  for (std::size_t i = 0; i < kStateCount; ++i) g[i][i] = 1.0;
  return g;
}

ProbabilityGrid multiply(const ProbabilityGrid& a, const ProbabilityGrid& b) {
  ProbabilityGrid out{};
  for (std::size_t i = 0; i < kStateCount; ++i) {
    for (std::size_t k = 0; k < kStateCount; ++k) {
      const double aik = a[i][k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < kStateCount; ++j) out[i][j] += aik * b[k][j];
    }
  }
  return out;
}

std::string cell_name(AcademicState from, AcademicState to) {
  return "P(" + std::string(state_name(from)) + "," + std::string(state_name(to)) + ")";
}

}  // namespace

TransitionMatrix build_matrix(const TransitionCounts& counts, EmptyRows policy) {
  TransitionMatrix p = TransitionMatrix::absorbing_skeleton();
  const auto reachable = reachable_years(counts);

  for (int year = 1; year <= kMaxYear; ++year) {
    const AcademicState from = year_state(year);
    const auto total = counts.row_total(from);
    if (total == 0) {
      if (policy == EmptyRows::kReject || reachable[year - 1]) throw InsufficientData(from);
      p(from, AcademicState::DropOut) = 1.0;
      continue;
    }
    const double denom = static_cast<double>(total);
    for (auto to : kAllStates) {
      const auto c = counts.at(from, to);
      if (c != 0) p(from, to) = static_cast<double>(c) / denom;
    }
  }
  return p;
}

TransitionCounts pool_counts(std::span<const TransitionCounts> parts) {
  if (parts.empty()) throw std::invalid_argument("pool_counts: empty list");
  TransitionCounts pooled;
  for (const auto& part : parts) pooled += part;
  return pooled;
}

ProbabilityGrid matrix_power(const TransitionMatrix& p, int n) {
  if (n < 0) throw std::invalid_argument("matrix_power: negative exponent");
  ProbabilityGrid result = identity_grid();
  for (int i = 0; i < n; ++i) result = multiply(result, p.grid());
  return result;
}

double sygr_markov(const TransitionMatrix& p) {
  return matrix_power(p, kMaxYear)[index_of(AcademicState::Y1)]
                                  [index_of(AcademicState::Graduated)];
}

std::vector<StructureViolation> validate_structure(const TransitionMatrix& p) {
  using Kind = StructureViolation::Kind;
  std::vector<StructureViolation> out;

  for (auto from : kAllStates) {
    double row_sum = 0.0;
    for (auto to : kAllStates) {
      const double v = p(from, to);
      row_sum += v;
      if (!(v >= 0.0 && v <= 1.0)) {
        out.push_back({Kind::ProbabilityOutOfRange, from, to,
                       cell_name(from, to) + " = " + std::to_string(v) + " outside [0,1]"});
        continue;
      }
      const bool allowed = is_transient(from) ? is_allowed_transition(from, to) : from == to;
      if (!allowed && v != 0.0) {
        out.push_back({Kind::ForbiddenTransition, from, to,
                       cell_name(from, to) + " must be zero"});
      }
    }
    if (!(std::abs(row_sum - 1.0) <= kRowSumTolerance)) {
      out.push_back({Kind::RowSumViolation, from, std::nullopt,
                     "row " + std::string(state_name(from)) + " sums to " +
                         std::to_string(row_sum)});
    }
  }
  return out;
}

}  // namespace sygr
