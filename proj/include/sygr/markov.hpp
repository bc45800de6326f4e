#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sygr/states.hpp"

namespace sygr {

// How build_matrix treats a transient row with no observations.
enum class EmptyRows {
  kReject,             // always InsufficientData
  kAbsorbUnreachable,  // InsufficientData only if the state is reachable from Y1
                       // through observed transitions; otherwise the row is set
                       // to P(k, DropOut) = 1
};

// Row-normalizes counts: p[i][j] = counts[i][j] / N_i. Absorbing rows become
// identity rows.
TransitionMatrix build_matrix(const TransitionCounts& counts,
                              EmptyRows policy = EmptyRows::kReject);

// Element-wise sum. Throws std::invalid_argument on an empty list.
TransitionCounts pool_counts(std::span<const TransitionCounts> parts);

ProbabilityGrid matrix_power(const TransitionMatrix& p, int n);

// Six-step absorption probability from Y1 into Graduated.
double sygr_markov(const TransitionMatrix& p);

struct StructureViolation {
  enum class Kind { ForbiddenTransition, RowSumViolation, ProbabilityOutOfRange };
  Kind kind;
  AcademicState from;
  std::optional<AcademicState> to;  // empty for row-level violations
  std::string message;

  bool operator==(const StructureViolation& o) const {
    return kind == o.kind && from == o.from && to == o.to;
  }
};

inline constexpr double kRowSumTolerance = 1e-12;

// Empty iff the matrix is row-stochastic and matches the allowed sparsity
// pattern (absorbing rows included).
std::vector<StructureViolation> validate_structure(const TransitionMatrix& p);

}  // namespace sygr
