#include "sygr/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "sygr/bootstrap.hpp"
#include "sygr/error.hpp"

namespace sygr {

namespace {

struct Grid {
  double lo;
  double step;
  double bandwidth;
};

Grid make_grid(std::span<const double> values, std::optional<double> bandwidth) {
  if (values.size() < 2) throw EnsembleTooSmall();
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  if (*min_it == *max_it) throw DegenerateEnsemble(*min_it);
  double h = bandwidth ? *bandwidth : silverman_bandwidth(values);
  if (!(h > 0.0)) throw std::invalid_argument("kde bandwidth must be positive");
  const double lo = std::max(0.0, *min_it - 3.0 * h);
  const double hi = std::min(1.0, *max_it + 3.0 * h);
  return {lo, (hi - lo) / static_cast<double>(kKdeGridPoints - 1), h};
}

double density_at(std::span<const double> values, double x, double h) {
  const double norm = 1.0 / (static_cast<double>(values.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  double sum = 0.0;
  for (double v : values) {
    const double u = (x - v) / h;
    sum += std::exp(-0.5 * u * u);
  }
  return sum * norm;
}

}  // namespace

double silverman_bandwidth(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw EnsembleTooSmall();
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) throw DegenerateEnsemble(values.front());

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = percentile_sorted(sorted, 0.75) - percentile_sorted(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

std::vector<KdePoint> kde(std::span<const double> values, std::optional<double> bandwidth) {
  const Grid g = make_grid(values, bandwidth);
  std::vector<KdePoint> out(kKdeGridPoints);
  const auto points = static_cast<std::int64_t>(kKdeGridPoints);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < points; ++i) {
    const double x = g.lo + g.step * static_cast<double>(i);
    out[static_cast<std::size_t>(i)] = {x, density_at(values, x, g.bandwidth)};
  }
  return out;
}

std::vector<KdePoint> kde_serial(std::span<const double> values, std::optional<double> bandwidth) {
  const Grid g = make_grid(values, bandwidth);
  std::vector<KdePoint> out;
  out.reserve(kKdeGridPoints);
  for (std::size_t i = 0; i < kKdeGridPoints; ++i) {
    const double x = g.lo + g.step * static_cast<double>(i);
    out.push_back({x, density_at(values, x, g.bandwidth)});
  }
  return out;
}

}  // namespace sygr
