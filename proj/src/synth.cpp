#include "sygr/synth.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "sygr/error.hpp"
#include "sygr/estimate.hpp"
#include "sygr/markov.hpp"
#include "sygr/rng.hpp"

namespace sygr {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ' ' || ch == '\t' || ch == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double to_double(const std::string& s, std::size_t line) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw SpecError(line, "expected a number, got '" + s + "'");
  }
  return v;
}

template <typename Int>
Int to_int(const std::string& s, std::size_t line) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw SpecError(line, "expected an integer, got '" + s + "'");
  }
  return v;
}

std::pair<std::string, std::string> split_pair(const std::string& tok, std::size_t line) {
  const auto colon = tok.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size()) {
    throw SpecError(line, "expected name:value, got '" + tok + "'");
  }
  return {tok.substr(0, colon), tok.substr(colon + 1)};
}

void check_rate(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw SpecError(0, std::string(name) + " must lie in [0,1]");
}

std::size_t pick_weighted(Stream& rng, std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  // Rounding fell through; take the last positive weight.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return 0;
}

AcademicState step(Stream& rng, const TransitionMatrix& p, AcademicState from) {
  const double u = rng.uniform();
  double acc = 0.0;
  AcademicState last_positive = AcademicState::DropOut;
  for (auto to : kAllStates) {
    const double q = p(from, to);
    if (q <= 0.0) continue;
    acc += q;
    last_positive = to;
    if (u < acc) return to;
  }
  return last_positive;
}

void format_matrix(std::ostream& out, const char* key, const TransitionMatrix& m) {
  out << key << " =\n";
  for (auto from : kAllStates) {
    for (auto to : kAllStates) out << (to == AcademicState::Y1 ? "  " : " ") << format_double(m(from, to));
    out << '\n';
  }
}

double enumerate_paths(const TransitionMatrix& p, AcademicState at, int steps_left) {
  if (steps_left == 0) return at == AcademicState::Graduated ? 1.0 : 0.0;
  double sum = 0.0;
  for (auto next : kAllStates) {
    const double q = p(at, next);
    if (q == 0.0) continue;
    sum += q * enumerate_paths(p, next, steps_left - 1);
  }
  return sum;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void GeneratorSpec::validate() const {
  auto violations = validate_structure(true_matrix);
  if (!violations.empty()) throw SpecError(0, "true_matrix: " + violations.front().message);
  if (effect_matrix) {
    violations = validate_structure(*effect_matrix);
    if (!violations.empty()) throw SpecError(0, "effect_matrix: " + violations.front().message);
  }
  if (cohort_sizes.empty()) throw SpecError(0, "at least one cohort is required");
  for (const auto& [year, size] : cohort_sizes) {
    if (size == 0) throw SpecError(0, "cohort " + std::to_string(year) + " has no students");
  }
  if (horizon_year < cohort_sizes.rbegin()->first + 1) {
    throw SpecError(0, "horizon_year must be at least one year after the last cohort");
  }
  check_rate(aalana_rate, "aalana_rate");
  check_rate(first_gen_rate, "first_gen_rate");
  check_rate(la_rate, "la_rate");
  check_rate(slow_finisher_rate, "slow_finisher_rate");
  double la_total = 0.0;
  for (double w : la_year_weights) {
    if (!(w >= 0.0)) throw SpecError(0, "la_year_weights must be non-negative");
    la_total += w;
  }
  if (!(la_total > 0.0)) throw SpecError(0, "la_year_weights must not all be zero");
  if (colleges.empty()) throw SpecError(0, "at least one college is required");
  double college_total = 0.0;
  for (const auto& [code, w] : colleges) {
    if (code.empty() || code.find(',') != std::string::npos) {
      throw SpecError(0, "invalid college code '" + code + "'");
    }
    if (!(w >= 0.0)) throw SpecError(0, "college weights must be non-negative");
    college_total += w;
  }
  if (!(college_total > 0.0)) throw SpecError(0, "college weights must not all be zero");
}

GeneratorSpec parse_generator_spec(std::istream& in) {
  GeneratorSpec spec;
  bool have_matrix = false;
  bool have_cohorts = false;
  bool have_horizon = false;
  std::vector<std::string> seen;

  std::string raw;
  std::size_t line_no = 0;
  const auto next_content_line = [&](std::string& out) {
    while (std::getline(in, raw)) {
      ++line_no;
      const auto hash = raw.find('#');
      out = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (!out.empty()) return true;
    }
    return false;
  };
  const auto read_matrix = [&](std::size_t key_line) {
    ProbabilityGrid g{};
    std::string row_text;
    for (std::size_t i = 0; i < kStateCount; ++i) {
      if (!next_content_line(row_text)) throw SpecError(key_line, "matrix needs 8 rows");
      const auto cells = tokens(row_text);
      if (cells.size() != kStateCount) {
        throw SpecError(line_no, "matrix row needs 8 values, got " + std::to_string(cells.size()));
      }
      for (std::size_t j = 0; j < kStateCount; ++j) g[i][j] = to_double(cells[j], line_no);
    }
    TransitionMatrix m(g);
    const auto violations = validate_structure(m);
    if (!violations.empty()) throw SpecError(key_line, violations.front().message);
    return m;
  };

  std::string line;
  while (next_content_line(line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw SpecError(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::size_t key_line = line_no;
    for (const auto& k : seen) {
      if (k == key) throw SpecError(key_line, "duplicate key '" + key + "'");
    }
    seen.push_back(key);

    if (key == "true_matrix" || key == "effect_matrix") {
      if (!value.empty()) throw SpecError(key_line, key + " rows go on the following lines");
      auto m = read_matrix(key_line);
      if (key == "true_matrix") {
        spec.true_matrix = m;
        have_matrix = true;
      } else {
        spec.effect_matrix = m;
      }
    } else if (key == "seed") {
      spec.seed = to_int<std::uint64_t>(value, key_line);
    } else if (key == "horizon_year") {
      spec.horizon_year = to_int<int>(value, key_line);
      have_horizon = true;
    } else if (key == "cohorts") {
      for (const auto& tok : tokens(value)) {
        const auto [year, size] = split_pair(tok, key_line);
        const int y = to_int<int>(year, key_line);
        if (spec.cohort_sizes.count(y)) throw SpecError(key_line, "cohort " + year + " repeated");
        spec.cohort_sizes[y] = to_int<std::size_t>(size, key_line);
      }
      have_cohorts = true;
    } else if (key == "aalana_rate") {
      spec.aalana_rate = to_double(value, key_line);
    } else if (key == "first_gen_rate") {
      spec.first_gen_rate = to_double(value, key_line);
    } else if (key == "la_rate") {
      spec.la_rate = to_double(value, key_line);
    } else if (key == "slow_finisher_rate") {
      spec.slow_finisher_rate = to_double(value, key_line);
    } else if (key == "la_year_weights") {
      const auto ws = tokens(value);
      if (ws.size() != kMaxYear) throw SpecError(key_line, "la_year_weights needs 6 values");
      for (std::size_t i = 0; i < kMaxYear; ++i) spec.la_year_weights[i] = to_double(ws[i], key_line);
    } else if (key == "colleges") {
      spec.colleges.clear();
      for (const auto& tok : tokens(value)) {
        const auto [code, weight] = split_pair(tok, key_line);
        spec.colleges.emplace_back(code, to_double(weight, key_line));
      }
    } else {
      throw SpecError(key_line, "unknown key '" + key + "'");
    }
  }
  if (!have_matrix) throw SpecError(0, "missing true_matrix");
  if (!have_cohorts) throw SpecError(0, "missing cohorts");
  if (!have_horizon) throw SpecError(0, "missing horizon_year");
  spec.validate();
  return spec;
}

GeneratorSpec parse_generator_spec(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_generator_spec(in);
}

std::string format_generator_spec(const GeneratorSpec& spec) {
  std::ostringstream out;
  out << "seed = " << spec.seed << '\n';
  out << "horizon_year = " << spec.horizon_year << '\n';
  out << "cohorts =";
  for (const auto& [year, size] : spec.cohort_sizes) out << ' ' << year << ':' << size;
  out << '\n';
  out << "aalana_rate = " << format_double(spec.aalana_rate) << '\n';
  out << "first_gen_rate = " << format_double(spec.first_gen_rate) << '\n';
  out << "la_rate = " << format_double(spec.la_rate) << '\n';
  out << "la_year_weights =";
  for (double w : spec.la_year_weights) out << ' ' << format_double(w);
  out << '\n';
  out << "colleges =";
  for (const auto& [code, w] : spec.colleges) out << ' ' << code << ':' << format_double(w);
  out << '\n';
  out << "slow_finisher_rate = " << format_double(spec.slow_finisher_rate) << '\n';
  format_matrix(out, "true_matrix", spec.true_matrix);
  if (spec.effect_matrix) format_matrix(out, "effect_matrix", *spec.effect_matrix);
  return out.str();
}

GeneratedPanel generate_panel(const GeneratorSpec& spec, bool keep_walk_log) {
  spec.validate();

  struct Slot {
    int cohort;
  };
  std::vector<Slot> slots;
  for (const auto& [year, size] : spec.cohort_sizes) slots.insert(slots.end(), size, Slot{year});

  std::vector<double> college_weights;
  for (const auto& [code, w] : spec.colleges) college_weights.push_back(w);

  GeneratedPanel panel;
  panel.records.resize(slots.size());
  if (keep_walk_log) panel.walk_log.resize(slots.size());

  const auto n = static_cast<std::int64_t>(slots.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t idx = 0; idx < n; ++idx) {
    const auto i = static_cast<std::size_t>(idx);
    Stream rng(spec.seed, i);
    StudentRecord& r = panel.records[i];
    r.student_id = "s" + std::to_string(i + 1);
    r.cohort_year = slots[i].cohort;
    r.aalana = rng.bernoulli(spec.aalana_rate);
    r.first_gen = rng.bernoulli(spec.first_gen_rate);
    r.college = spec.colleges[pick_weighted(rng, college_weights)].first;
    std::optional<int> intended_la;
    if (rng.bernoulli(spec.la_rate)) {
      intended_la = static_cast<int>(pick_weighted(rng, spec.la_year_weights)) + 1;
    }

    // Full walk from Y1 until absorption (at most six steps).
    std::vector<std::pair<AcademicState, AcademicState>> walk;
    AcademicState at = AcademicState::Y1;
    for (int year = 1; year <= kMaxYear && is_transient(at); ++year) {
      const bool treated = spec.effect_matrix && intended_la && year >= *intended_la;
      const AcademicState next = step(rng, treated ? *spec.effect_matrix : spec.true_matrix, at);
      walk.emplace_back(at, next);
      at = next;
    }
    const bool slow = rng.bernoulli(spec.slow_finisher_rate);

    // Step k (the outcome of year k) is visible iff k < T, or T >= 6.
    const int observed = spec.horizon_year - r.cohort_year;
    const int visible = observed >= kMaxYear ? kMaxYear : observed - 1;
    const int steps = static_cast<int>(walk.size());
    int last_year_seen = 0;
    if (steps <= visible) {
      const AcademicState end = walk.back().second;
      r.outcome = end == AcademicState::Graduated ? Outcome::Graduated : Outcome::DroppedOut;
      r.outcome_year = steps;
      if (steps == kMaxYear && end == AcademicState::DropOut && slow) {
        r.outcome = Outcome::Enrolled;
        r.outcome_year = observed;
      }
      last_year_seen = steps;
    } else {
      r.outcome = Outcome::Enrolled;
      r.outcome_year = observed;
      last_year_seen = observed;
    }
    if (intended_la && *intended_la <= last_year_seen) r.la_year = intended_la;

    if (keep_walk_log) {
      auto& log = panel.walk_log[i];
      for (int k = 0; k < std::min(steps, visible); ++k) {
        log.push_back({r.student_id, walk[k].first, walk[k].second, k + 1});
      }
    }
  }
  return panel;
}

double brute_force_sygr(const TransitionMatrix& p) {
  return enumerate_paths(p, AcademicState::Y1, kMaxYear);
}

TransitionCounts round_trip_counts(std::span<const StudentRecord> records, int horizon_year) {
  return accumulate_counts(records, horizon_year);
}

TransitionMatrix with_first_year_persistence(const TransitionMatrix& p, double persistence) {
  TransitionMatrix out = p;
  const double rest = 1.0 - p(AcademicState::Y1, AcademicState::Y2);
  const double scale = rest > 0.0 ? (1.0 - persistence) / rest : 0.0;
  out(AcademicState::Y1, AcademicState::Y2) = persistence;
  out(AcademicState::Y1, AcademicState::DropOut) = p(AcademicState::Y1, AcademicState::DropOut) * scale;
  out(AcademicState::Y1, AcademicState::Graduated) =
      p(AcademicState::Y1, AcademicState::Graduated) * scale;
  return out;
}

}  // namespace sygr
