#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace sygr {

// Chain states in matrix order. Y1..Y6 are years since matriculation.
enum class AcademicState : std::uint8_t { Y1, Y2, Y3, Y4, Y5, Y6, DropOut, Graduated };

inline constexpr std::size_t kStateCount = 8;
inline constexpr int kMaxYear = 6;

inline constexpr std::array<AcademicState, kStateCount> kAllStates = {
    AcademicState::Y1, AcademicState::Y2, AcademicState::Y3,      AcademicState::Y4,
    AcademicState::Y5, AcademicState::Y6, AcademicState::DropOut, AcademicState::Graduated};

constexpr std::size_t index_of(AcademicState s) noexcept { return static_cast<std::size_t>(s); }

constexpr bool is_transient(AcademicState s) noexcept {
  return s != AcademicState::DropOut && s != AcademicState::Graduated;
}
constexpr bool is_absorbing(AcademicState s) noexcept { return !is_transient(s); }

// Year 1..6 -> Y1..Y6. Callers guarantee the range.
constexpr AcademicState year_state(int year) noexcept {
  return static_cast<AcademicState>(year - 1);
}

constexpr std::optional<int> year_of(AcademicState s) noexcept {
  if (!is_transient(s)) return std::nullopt;
  return static_cast<int>(index_of(s)) + 1;
}

// "Y1".."Y6", "D", "G".
std::string_view state_name(AcademicState s) noexcept;
std::optional<AcademicState> parse_state(std::string_view name) noexcept;

// The only moves the chain allows out of a transient state: next year, DropOut,
// Graduated (no next year from Y6). Absorbing states move nowhere in counts.
constexpr bool is_allowed_transition(AcademicState from, AcademicState to) noexcept {
  if (!is_transient(from)) return false;
  if (is_absorbing(to)) return true;
  return from != AcademicState::Y6 && index_of(to) == index_of(from) + 1;
}

using ProbabilityGrid = std::array<std::array<double, kStateCount>, kStateCount>;

// Observed year-to-year transitions, indexed (from, to). Only allowed cells
// can be non-zero; add() enforces it.
class TransitionCounts {
 public:
  using Count = std::int64_t;

  TransitionCounts() = default;

  // Throws std::invalid_argument for a cell outside the allowed pattern or a
  // negative increment.
  void add(AcademicState from, AcademicState to, Count n = 1);

  Count at(AcademicState from, AcademicState to) const noexcept {
    return cells_[index_of(from)][index_of(to)];
  }
  Count row_total(AcademicState from) const noexcept;
  Count total() const noexcept;

  TransitionCounts& operator+=(const TransitionCounts& other) noexcept;
  friend TransitionCounts operator+(TransitionCounts a, const TransitionCounts& b) noexcept {
    a += b;
    return a;
  }
  bool operator==(const TransitionCounts&) const = default;

 private:
  std::array<std::array<Count, kStateCount>, kStateCount> cells_{};
};

// An 8x8 probability grid. Construction does not validate, so that
// validate_structure() can diagnose arbitrary input; build_matrix() and
// TransitionMatrix::checked() always yield valid matrices.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(const ProbabilityGrid& grid) : grid_(grid) {}

  // Throws std::invalid_argument listing every structural violation.
  static TransitionMatrix checked(const ProbabilityGrid& grid);

  // Absorbing rows set to the identity, every transient row zero.
  static TransitionMatrix absorbing_skeleton() noexcept;

  double operator()(AcademicState from, AcademicState to) const noexcept {
    return grid_[index_of(from)][index_of(to)];
  }
  double& operator()(AcademicState from, AcademicState to) noexcept {
    return grid_[index_of(from)][index_of(to)];
  }
  const ProbabilityGrid& grid() const noexcept { return grid_; }

  bool operator==(const TransitionMatrix&) const = default;

 private:
  ProbabilityGrid grid_{};
};

}  // namespace sygr
