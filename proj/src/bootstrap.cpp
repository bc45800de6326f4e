#include "sygr/bootstrap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "sygr/error.hpp"
#include "sygr/rng.hpp"

namespace sygr {

namespace {

// Every record reduces to a small code whose contribution to the estimator is
// fixed, so a replicate only needs a histogram of drawn codes.
//   Markov:      code 0 = no transitions, else 1 + ((first-1)*6 + (last-1))*3 + tail
//                with tail 0 = none, 1 = DropOut, 2 = Graduated
//   Traditional: code = in_target_cohort * 2 + graduated_within_six
constexpr std::size_t kMarkovCodes = 1 + kMaxYear * kMaxYear * 3;

std::size_t path_code(const ObservedPath& path) {
  if (path.empty()) return 0;
  std::size_t tail = 0;
  if (path.absorbed) tail = *path.absorbed == AcademicState::DropOut ? 1 : 2;
  return 1 + (static_cast<std::size_t>(path.first - 1) * kMaxYear +
              static_cast<std::size_t>(path.last - 1)) *
                 3 +
         tail;
}

ObservedPath path_of_code(std::size_t code) {
  const std::size_t packed = code - 1;
  const std::size_t tail = packed % 3;
  const int last = static_cast<int>((packed / 3) % kMaxYear) + 1;
  const int first = static_cast<int>((packed / 3) / kMaxYear) + 1;
  ObservedPath path{first, last, std::nullopt};
  if (tail == 1) path.absorbed = AcademicState::DropOut;
  if (tail == 2) path.absorbed = AcademicState::Graduated;
  return path;
}

class CompiledEstimator {
 public:
  CompiledEstimator(std::span<const StudentRecord> records, const EstimatorSpec& spec)
      : kind_(spec.kind) {
    codes_.reserve(records.size());
    const auto targeted = [&spec](const StudentRecord& r) {
      return std::find(spec.cohorts.begin(), spec.cohorts.end(), r.cohort_year) !=
             spec.cohorts.end();
    };
    for (const auto& r : records) {
      if (kind_ == EstimatorKind::Traditional) {
        const bool grad = r.outcome == Outcome::Graduated && r.outcome_year <= kMaxYear;
        codes_.push_back(static_cast<std::uint16_t>((targeted(r) ? 2 : 0) + (grad ? 1 : 0)));
        continue;
      }
      if (kind_ == EstimatorKind::MarkovReduced && !targeted(r)) {
        codes_.push_back(0);
        continue;
      }
      ObservedPath path = derive_path(r, spec.horizon_year);
      if (spec.la_truncate) path = la_truncate(r, path);
      codes_.push_back(static_cast<std::uint16_t>(path_code(path)));
    }
  }

  std::size_t code_count() const {
    return kind_ == EstimatorKind::Traditional ? 4 : kMarkovCodes;
  }
  std::size_t size() const { return codes_.size(); }
  std::uint16_t code(std::size_t i) const { return codes_[i]; }

  // nullopt exactly where estimate() on the materialized resample throws.
  std::optional<double> evaluate(std::span<const std::uint32_t> histogram) const {
    if (kind_ == EstimatorKind::Traditional) {
      const std::int64_t started = histogram[2] + histogram[3];
      if (started == 0) return std::nullopt;
      return static_cast<double>(histogram[3]) / static_cast<double>(started);
    }
    TransitionCounts counts;
    for (std::size_t c = 1; c < histogram.size(); ++c) {
      if (histogram[c] != 0) path_of_code(c).add_to(counts, histogram[c]);
    }
    if (kind_ == EstimatorKind::MarkovReduced && counts.total() == 0) return std::nullopt;
    try {
      return sygr_markov(build_matrix(counts, EmptyRows::kAbsorbUnreachable));
    } catch (const InsufficientData&) {
      return std::nullopt;
    }
  }

 private:
  EstimatorKind kind_;
  std::vector<std::uint16_t> codes_;
};

void check_inputs(std::span<const StudentRecord> records, const EstimatorSpec& spec,
                  const BootstrapConfig& cfg) {
  cfg.validate();
  spec.validate();
  if (records.empty()) throw NoRecords();
}

EstimateSummary run(std::span<const StudentRecord> records, const EstimatorSpec& spec,
                    const BootstrapConfig& cfg, bool reference) {
  check_inputs(records, spec, cfg);
  try {
    (void)estimate(records, spec);
  } catch (const Error& e) {
    throw EstimatorFailedOnOriginal(e.what());
  }
  const auto slots = reference ? bootstrap_replicates_reference(records, spec, cfg)
                               : bootstrap_replicates(records, spec, cfg);
  return summarize(slots, cfg.ci_level);
}

}  // namespace

void BootstrapConfig::validate() const {
  if (replicates < 2) throw std::invalid_argument("bootstrap needs at least 2 replicates");
  if (!(ci_level > 0.0 && ci_level < 1.0)) {
    throw std::invalid_argument("ci_level must lie strictly between 0 and 1");
  }
}

double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw EnsembleTooSmall();
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const double lower = std::floor(h);
  const auto i = static_cast<std::size_t>(lower);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + (h - lower) * (sorted[i + 1] - sorted[i]);
}

PercentileInterval percentile_ci(std::span<const double> ensemble, double level) {
  if (ensemble.size() < 2) throw EnsembleTooSmall();
  std::vector<double> sorted(ensemble.begin(), ensemble.end());
  std::sort(sorted.begin(), sorted.end());
  return {percentile_sorted(sorted, (1.0 - level) / 2.0), percentile_sorted(sorted, 0.5),
          percentile_sorted(sorted, (1.0 + level) / 2.0)};
}

EstimateSummary summarize(std::span<const std::optional<double>> replicates, double level) {
  EstimateSummary s;
  for (std::size_t b = 0; b < replicates.size(); ++b) {
    if (!replicates[b]) {
      ++s.failed;
      continue;
    }
    s.ensemble.push_back(*replicates[b]);
    s.replicate_index.push_back(b);
  }
  if (s.failed * 10 > replicates.size()) {
    throw TooManyFailedReplicates(s.failed, replicates.size());
  }
  const auto ci = percentile_ci(s.ensemble, level);
  s.lo = ci.lo;
  s.median = ci.median;
  s.hi = ci.hi;
  s.width = ci.hi - ci.lo;
  return s;
}

std::vector<std::optional<double>> bootstrap_replicates(std::span<const StudentRecord> records,
                                                        const EstimatorSpec& spec,
                                                        const BootstrapConfig& cfg) {
  check_inputs(records, spec, cfg);
  const CompiledEstimator compiled(records, spec);
  const auto n = static_cast<std::uint64_t>(compiled.size());
  const auto replicates = static_cast<std::int64_t>(cfg.replicates);
  std::vector<std::optional<double>> out(cfg.replicates);

#pragma omp parallel
  {
    std::vector<std::uint32_t> histogram(compiled.code_count());
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t b = 0; b < replicates; ++b) {
      std::fill(histogram.begin(), histogram.end(), 0U);
      Stream rng(cfg.seed, static_cast<std::uint64_t>(b));
      for (std::uint64_t i = 0; i < n; ++i) ++histogram[compiled.code(rng.below(n))];
      out[static_cast<std::size_t>(b)] = compiled.evaluate(histogram);
    }
  }
  return out;
}

std::vector<std::optional<double>> bootstrap_replicates_reference(
    std::span<const StudentRecord> records, const EstimatorSpec& spec,
    const BootstrapConfig& cfg) {
  check_inputs(records, spec, cfg);
  const auto n = static_cast<std::uint64_t>(records.size());
  std::vector<std::optional<double>> out(cfg.replicates);
  std::vector<StudentRecord> resample;
  resample.reserve(records.size());
  for (std::size_t b = 0; b < cfg.replicates; ++b) {
    Stream rng(cfg.seed, b);
    resample.clear();
    for (std::uint64_t i = 0; i < n; ++i) resample.push_back(records[rng.below(n)]);
    try {
      out[b] = estimate(resample, spec);
    } catch (const Error&) {
      out[b] = std::nullopt;
    }
  }
  return out;
}

EstimateSummary bootstrap(std::span<const StudentRecord> records, const EstimatorSpec& spec,
                          const BootstrapConfig& cfg) {
  return run(records, spec, cfg, false);
}

EstimateSummary bootstrap_reference(std::span<const StudentRecord> records,
                                    const EstimatorSpec& spec, const BootstrapConfig& cfg) {
  return run(records, spec, cfg, true);
}

}  // namespace sygr
