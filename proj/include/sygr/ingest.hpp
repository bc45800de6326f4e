#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sygr/states.hpp"

namespace sygr {

enum class Outcome { Graduated, DroppedOut, Enrolled };

char outcome_code(Outcome o) noexcept;  // 'G', 'D', 'E'

// One student, one row of the input file.
//
// outcome_year is the year of study in which the student was absorbed
// (Graduated / DroppedOut), or the last fully completed year of study
// (Enrolled). la_year is the year of study of the first LA-supported course.
struct StudentRecord {
  std::string student_id;
  int cohort_year = 0;
  bool aalana = false;
  bool first_gen = false;
  std::string college;
  std::optional<int> la_year;
  Outcome outcome = Outcome::Enrolled;
  int outcome_year = 1;
  std::size_t source_row = 0;  // 1-based data row, 0 when not parsed from a file

  bool operator==(const StudentRecord& o) const {
    return student_id == o.student_id && cohort_year == o.cohort_year && aalana == o.aalana &&
           first_gen == o.first_gen && college == o.college && la_year == o.la_year &&
           outcome == o.outcome && outcome_year == o.outcome_year;
  }
};

inline constexpr std::string_view kRecordHeader =
    "student_id,cohort_year,aalana,first_gen,college,la_year,outcome,outcome_year";

// Parses the CSV schema above. Header must match exactly; LF line endings;
// trailing newline optional. Throws ParseError / DuplicateId /
// InvariantViolation.
std::vector<StudentRecord> parse_records(std::istream& in);
std::vector<StudentRecord> parse_records(std::string_view text);

// Checks invariants on a single record (row number used in the message).
void check_record(const StudentRecord& r);

// Throws DuplicateId if any student_id repeats.
void check_unique_ids(std::span<const StudentRecord> records);

void write_records(std::ostream& out, std::span<const StudentRecord> records);

// One observed year-to-year move.
struct Transition {
  std::string student_id;
  AcademicState from = AcademicState::Y1;
  AcademicState to = AcademicState::Y2;
  int year_index = 1;  // the year of study being completed; from == Y<year_index>

  bool operator==(const Transition&) const = default;
};

// Compact form of a student's observable transitions: the chain
// Y<first> -> ... -> Y<last>, followed by last -> absorbed when present.
// Empty when first == last and nothing is absorbed. Every derived transition
// list has this shape.
struct ObservedPath {
  int first = 1;
  int last = 1;
  std::optional<AcademicState> absorbed;

  bool empty() const noexcept { return first == last && !absorbed; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(last - first) + (absorbed ? 1 : 0);
  }
  void add_to(TransitionCounts& counts, TransitionCounts::Count weight = 1) const;
  bool operator==(const ObservedPath&) const = default;
};

// Completed transitions of one student as of the fall of horizon_year.
// Partial cohorts contribute only resolved years; students not graduated
// within six years leave Y6 for DropOut.
ObservedPath derive_path(const StudentRecord& r, int horizon_year) noexcept;
std::vector<Transition> derive_transitions(const StudentRecord& r, int horizon_year);

// Keeps only moves made in or after the first LA-supported year.
// Throws MissingExposure without an la_year.
ObservedPath la_truncate(const StudentRecord& r, ObservedPath path);
std::vector<Transition> la_truncate(const StudentRecord& r, std::vector<Transition> transitions);

enum class LaGroup { All, Exposed, Unexposed };

struct SubgroupSpec {
  bool aalana_only = false;
  bool first_gen_only = false;
  std::optional<std::string> college;
  LaGroup la_group = LaGroup::All;

  bool matches(const StudentRecord& r) const noexcept;
};

std::vector<StudentRecord> filter_subgroup(std::span<const StudentRecord> records,
                                           const SubgroupSpec& spec);

std::vector<StudentRecord> cohort_slice(std::span<const StudentRecord> records, int cohort_year);

}  // namespace sygr
