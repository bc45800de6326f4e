#include "sygr/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>
#include <unordered_set>

#include "sygr/error.hpp"

namespace sygr {

namespace {

constexpr std::array<std::string_view, 8> kColumns = {
    "student_id", "cohort_year", "aalana",  "first_gen",
    "college",    "la_year",     "outcome", "outcome_year"};

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

int parse_int(std::string_view text, std::size_t row, std::size_t column) {
  int value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ParseError(row, std::string(kColumns[column]),
                     "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view text, std::size_t row, std::size_t column) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ParseError(row, std::string(kColumns[column]),
                   "expected true or false, got '" + std::string(text) + "'");
}

StudentRecord parse_row(std::string_view line, std::size_t row) {
  const auto fields = split_fields(line);
  if (fields.size() != kColumns.size()) {
    throw ParseError(row, fields.size() > kColumns.size() ? "(extra)" : "(missing)",
                     "expected 8 fields, got " + std::to_string(fields.size()));
  }
  StudentRecord r;
  r.source_row = row;
  if (fields[0].empty()) throw ParseError(row, "student_id", "empty id");
  r.student_id = std::string(fields[0]);
  r.cohort_year = parse_int(fields[1], row, 1);
  r.aalana = parse_bool(fields[2], row, 2);
  r.first_gen = parse_bool(fields[3], row, 3);
  r.college = std::string(fields[4]);
  if (!fields[5].empty()) {
    const int la = parse_int(fields[5], row, 5);
    if (la < 1 || la > kMaxYear) throw ParseError(row, "la_year", "must be empty or 1-6");
    r.la_year = la;
  }
  if (fields[6] == "G") {
    r.outcome = Outcome::Graduated;
  } else if (fields[6] == "D") {
    r.outcome = Outcome::DroppedOut;
  } else if (fields[6] == "E") {
    r.outcome = Outcome::Enrolled;
  } else {
    throw ParseError(row, "outcome", "expected G, D or E, got '" + std::string(fields[6]) + "'");
  }
  r.outcome_year = parse_int(fields[7], row, 7);
  check_record(r);
  return r;
}

}  // namespace

char outcome_code(Outcome o) noexcept {
  switch (o) {
    case Outcome::Graduated: return 'G';
    case Outcome::DroppedOut: return 'D';
    case Outcome::Enrolled: return 'E';
  }
  return '?';
}

void check_record(const StudentRecord& r) {
  if (r.outcome_year < 1) throw InvariantViolation(r.source_row, "outcome_year must be >= 1");
  if (r.la_year) {
    if (*r.la_year < 1 || *r.la_year > kMaxYear) {
      throw InvariantViolation(r.source_row, "la_year must be in 1..6");
    }
    const int limit = r.outcome == Outcome::Enrolled ? r.outcome_year + 1 : r.outcome_year;
    if (*r.la_year > limit) {
      throw InvariantViolation(r.source_row, "la_year " + std::to_string(*r.la_year) +
                                                 " is after the last observed year " +
                                                 std::to_string(limit));
    }
  }
}

void check_unique_ids(std::span<const StudentRecord> records) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(records.size());
  for (const auto& r : records) {
    if (!seen.insert(r.student_id).second) throw DuplicateId(r.student_id);
  }
}

std::vector<StudentRecord> parse_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(0, "(header)", "empty input");
  if (line != kRecordHeader) {
    throw ParseError(0, "(header)", "expected header '" + std::string(kRecordHeader) + "'");
  }
  std::vector<StudentRecord> records;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) {
      // A blank line is only tolerated as the very end of the file.
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw ParseError(row, "(row)", "blank line");
    }
    records.push_back(parse_row(line, row));
  }
  check_unique_ids(records);
  return records;
}

std::vector<StudentRecord> parse_records(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_records(in);
}

void write_records(std::ostream& out, std::span<const StudentRecord> records) {
  out << kRecordHeader << '\n';
  for (const auto& r : records) {
    out << r.student_id << ',' << r.cohort_year << ',' << (r.aalana ? "true" : "false") << ','
        << (r.first_gen ? "true" : "false") << ',' << r.college << ',';
    if (r.la_year) out << *r.la_year;
    out << ',' << outcome_code(r.outcome) << ',' << r.outcome_year << '\n';
  }
}

void ObservedPath::add_to(TransitionCounts& counts, TransitionCounts::Count weight) const {
  for (int k = first; k < last; ++k) counts.add(year_state(k), year_state(k + 1), weight);
  if (absorbed) counts.add(year_state(last), *absorbed, weight);
}

ObservedPath derive_path(const StudentRecord& r, int horizon_year) noexcept {
  const int observed_years = horizon_year - r.cohort_year;
  if (observed_years < 1) return {};
  const int window = std::min(kMaxYear, observed_years);
  const int c = std::min(r.outcome_year, window);

  if (r.outcome != Outcome::Enrolled && r.outcome_year <= window) {
    return {1, c,
            r.outcome == Outcome::Graduated ? AcademicState::Graduated : AcademicState::DropOut};
  }
  // Six full years observed without graduating: settled as a non-completer.
  if (c == kMaxYear) return {1, kMaxYear, AcademicState::DropOut};
  // Start of year c+1 observed.
  if (c < observed_years) return {1, c + 1, std::nullopt};
  return {1, c, std::nullopt};
}

std::vector<Transition> derive_transitions(const StudentRecord& r, int horizon_year) {
  const ObservedPath path = derive_path(r, horizon_year);
  std::vector<Transition> out;
  out.reserve(path.size());
  for (int k = path.first; k < path.last; ++k) {
    out.push_back({r.student_id, year_state(k), year_state(k + 1), k});
  }
  if (path.absorbed) out.push_back({r.student_id, year_state(path.last), *path.absorbed, path.last});
  return out;
}

ObservedPath la_truncate(const StudentRecord& r, ObservedPath path) {
  if (!r.la_year) throw MissingExposure(r.student_id);
  const int start = *r.la_year;
  if (start <= path.first) return path;
  if (start > path.last) return {path.last, path.last, std::nullopt};
  path.first = start;
  return path;
}

std::vector<Transition> la_truncate(const StudentRecord& r, std::vector<Transition> transitions) {
  if (!r.la_year) throw MissingExposure(r.student_id);
  const int start = *r.la_year;
  std::erase_if(transitions, [start](const Transition& t) { return t.year_index < start; });
  return transitions;
}

bool SubgroupSpec::matches(const StudentRecord& r) const noexcept {
  if (aalana_only && !r.aalana) return false;
  if (first_gen_only && !r.first_gen) return false;
  if (college && r.college != *college) return false;
  switch (la_group) {
    case LaGroup::All: return true;
    case LaGroup::Exposed: return r.la_year.has_value();
    case LaGroup::Unexposed: return !r.la_year.has_value();
  }
  return true;
}

std::vector<StudentRecord> filter_subgroup(std::span<const StudentRecord> records,
                                           const SubgroupSpec& spec) {
  std::vector<StudentRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&spec](const StudentRecord& r) { return spec.matches(r); });
  return out;
}

std::vector<StudentRecord> cohort_slice(std::span<const StudentRecord> records, int cohort_year) {
  std::vector<StudentRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [cohort_year](const StudentRecord& r) { return r.cohort_year == cohort_year; });
  return out;
}

}  // namespace sygr
