#pragma once
// Gaussian kernel density estimates on a fixed grid, for plotting the
// distribution of simulated log Bayes factors.

#include <optional>
#include <span>
#include <vector>

namespace bicbf {

inline constexpr int kDensityGridPoints = 512;

struct DensityGrid {
    double bandwidth = 0.0;
    std::vector<double> x;
    std::vector<double> density;
};

/// Silverman's rule of thumb: 0.9 * min(sd, IQR/1.34) * n^(-1/5), falling
/// back to sd when the IQR is zero. Throws if the sample is constant.
double silverman_bandwidth(std::span<const double> sample);

/// Evaluates the density on kDensityGridPoints evenly spaced points over
/// [min - 3h, max + 3h]. Throws std::domain_error for fewer than two
/// distinct values.
DensityGrid gaussian_kde(std::span<const double> sample, std::optional<double> bandwidth = std::nullopt);

/// Type-7 (linear interpolation) quantile of an ascending-sorted sample.
double quantile_sorted(std::span<const double> sorted, double prob);

}  // namespace bicbf
