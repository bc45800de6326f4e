#include "sygr/states.hpp"

#include <stdexcept>
#include <string>

#include "sygr/markov.hpp"

namespace sygr {

namespace {
constexpr std::array<std::string_view, kStateCount> kNames = {"Y1", "Y2", "Y3", "Y4",
                                                              "Y5", "Y6", "D",  "G"};
}

std::string_view state_name(AcademicState s) noexcept { return kNames[index_of(s)]; }

std::optional<AcademicState> parse_state(std::string_view name) noexcept {
  for (auto s : kAllStates) {
    if (kNames[index_of(s)] == name) return s;
  }
  return std::nullopt;
}

void TransitionCounts::add(AcademicState from, AcademicState to, Count n) {
  if (!is_allowed_transition(from, to)) {
    throw std::invalid_argument("transition " + std::string(state_name(from)) + "->" +
                                std::string(state_name(to)) + " is not allowed");
  }
  if (n < 0) throw std::invalid_argument("negative transition count");
  cells_[index_of(from)][index_of(to)] += n;
}

TransitionCounts::Count TransitionCounts::row_total(AcademicState from) const noexcept {
  Count sum = 0;
  for (Count c : cells_[index_of(from)]) sum += c;
  return sum;
}

TransitionCounts::Count TransitionCounts::total() const noexcept {
  Count sum = 0;
  for (auto s : kAllStates) sum += row_total(s);
  return sum;
}

TransitionCounts& TransitionCounts::operator+=(const TransitionCounts& other) noexcept {
  for (std::size_t i = 0; i < kStateCount; ++i) {
    for (std::size_t j = 0; j < kStateCount; ++j) cells_[i][j] += other.cells_[i][j];
  }
  return *this;
}

TransitionMatrix TransitionMatrix::checked(const ProbabilityGrid& grid) {
  TransitionMatrix m(grid);
  auto violations = validate_structure(m);
  if (!violations.empty()) {
    std::string what = "invalid transition matrix:";
    for (const auto& v : violations) what += " " + v.message + ";";
    throw std::invalid_argument(what);
  }
  return m;
}

TransitionMatrix TransitionMatrix::absorbing_skeleton() noexcept {
  TransitionMatrix m;
  m(AcademicState::DropOut, AcademicState::DropOut) = 1.0;
  m(AcademicState::Graduated, AcademicState::Graduated) = 1.0;
  return m;
}

}  // namespace sygr
