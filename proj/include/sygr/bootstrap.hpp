#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sygr/estimate.hpp"

namespace sygr {

struct BootstrapConfig {
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  double ci_level = 0.95;

  void validate() const;  // replicates >= 2, 0 < ci_level < 1
};

struct PercentileInterval {
  double lo = 0.0;
  double median = 0.0;
  double hi = 0.0;
};

// Linear interpolation between closest ranks on ascending data:
// h = (n-1) q, x[floor h] + (h - floor h) (x[floor h + 1] - x[floor h]).
double percentile_sorted(std::span<const double> sorted, double q);

// lo at (1-level)/2, hi at (1+level)/2. Throws EnsembleTooSmall below two values.
PercentileInterval percentile_ci(std::span<const double> ensemble, double level);

struct EstimateSummary {
  std::vector<double> ensemble;              // surviving replicates, in replicate order
  std::vector<std::size_t> replicate_index;  // 0-based slot of each ensemble value
  std::size_t failed = 0;
  double lo = 0.0;
  double median = 0.0;
  double hi = 0.0;
  double width = 0.0;
};

// Drops failed slots, enforces the 10% failure ceiling
// (TooManyFailedReplicates) and fills the percentile summary.
EstimateSummary summarize(std::span<const std::optional<double>> replicates, double level);

// One estimate per replicate slot, nullopt where the estimator failed on that
// resample. Replicate b draws |records| indices uniformly with replacement
// from Stream(seed, b).
//
// The default route compiles each record to its contribution once and runs
// replicates in parallel (OpenMP). The reference route materializes every
// resample and calls estimate() on it, one replicate at a time; both produce
// bit-identical results.
std::vector<std::optional<double>> bootstrap_replicates(std::span<const StudentRecord> records,
                                                        const EstimatorSpec& spec,
                                                        const BootstrapConfig& cfg);
std::vector<std::optional<double>> bootstrap_replicates_reference(
    std::span<const StudentRecord> records, const EstimatorSpec& spec,
    const BootstrapConfig& cfg);

// Validates inputs, checks the estimator on the original data
// (EstimatorFailedOnOriginal) and summarizes.
EstimateSummary bootstrap(std::span<const StudentRecord> records, const EstimatorSpec& spec,
                          const BootstrapConfig& cfg);
EstimateSummary bootstrap_reference(std::span<const StudentRecord> records,
                                    const EstimatorSpec& spec, const BootstrapConfig& cfg);

}  // namespace sygr
