#pragma once

#include <optional>
#include <span>
#include <vector>

namespace sygr {

struct KdePoint {
  double x = 0.0;
  double density = 0.0;
};

inline constexpr std::size_t kKdeGridPoints = 256;

// Silverman's rule of thumb, 0.9 min(sd, IQR/1.34) n^(-1/5). Falls back to sd
// when the IQR is zero. Throws DegenerateEnsemble when all values are equal.
double silverman_bandwidth(std::span<const double> values);

// Gaussian KDE on 256 evenly spaced points over [min - 3h, max + 3h] clipped to
// [0, 1]. Presentation only.
std::vector<KdePoint> kde(std::span<const double> values,
                          std::optional<double> bandwidth = std::nullopt);

// Reference evaluation, one grid point at a time without threading.
std::vector<KdePoint> kde_serial(std::span<const double> values,
                                 std::optional<double> bandwidth = std::nullopt);

}  // namespace sygr
