#include "bicbf/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace bicbf {

double quantile_sorted(std::span<const double> sorted, double prob) {
    if (sorted.empty()) throw std::domain_error("quantile of an empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw std::domain_error("quantile probability outside [0, 1]");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double silverman_bandwidth(std::span<const double> sample) {
    const auto n = static_cast<double>(sample.size());
    if (sample.size() < 2) throw std::domain_error("bandwidth needs at least two values");
    const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : sample) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (!(sd > 0.0)) throw std::domain_error("bandwidth of a constant sample");

    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    return 0.9 * spread * std::pow(n, -0.2);
}

DensityGrid gaussian_kde(std::span<const double> sample, std::optional<double> bandwidth) {
    if (sample.size() < 2) throw std::domain_error("density needs at least two values");
    const auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (!(hi > lo)) throw std::domain_error("density of a constant sample");

    DensityGrid out;
    if (bandwidth) {
        if (!(*bandwidth > 0.0) || !std::isfinite(*bandwidth)) throw std::domain_error("bandwidth must be positive");
        out.bandwidth = *bandwidth;
    } else {
        out.bandwidth = silverman_bandwidth(sample);
    }
    const double h = out.bandwidth;
    const double start = lo - 3.0 * h;
    const double step = (hi - lo + 6.0 * h) / (kDensityGridPoints - 1);
    const double norm = 1.0 / (static_cast<double>(sample.size()) * h * std::sqrt(2.0 * std::numbers::pi));

    out.x.resize(kDensityGridPoints);
    out.density.resize(kDensityGridPoints);
    for (int p = 0; p < kDensityGridPoints; ++p) {
        const double x = p == kDensityGridPoints - 1 ? hi + 3.0 * h : start + p * step;
        double s = 0.0;
        for (double v : sample) {
            const double z = (x - v) / h;
            s += std::exp(-0.5 * z * z);
        }
        out.x[p] = x;
        out.density[p] = s * norm;
    }
    return out;
}

}  // namespace bicbf
