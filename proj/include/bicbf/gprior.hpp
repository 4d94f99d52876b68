#pragma once
// Default g-prior Bayes factors for balanced fixed-effects ANOVA, computed
// from the raw observations. This is the reference the BIC approximation is
// compared against in the simulation study.
//
// Model: y = mu 1 + sum_e X_e beta_e + eps, eps ~ N(0, sigma^2 I),
// beta_e ~ N(0, g_e sigma^2 I), g_e ~ Inverse-Gamma(1/2, r^2/2), with flat
// priors on mu and log sigma. X_e codes effect e through an orthonormal basis
// of the sum-to-zero contrasts for its levels, so every column of X_e sums to
// zero over the observations.
//
// Given g, mu and sigma integrate out analytically and the Bayes factor
// against the intercept-only model is
//
//   B(g) = det(I + X G X')^(-1/2) * [ y'y / y'(I + X G X')^(-1) y ]^((N-1)/2)
//
// with y centered. The remaining integral over g is done by plain Monte Carlo
// over prior draws.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bicbf/anova.hpp"
#include "bicbf/summary_bf.hpp"

namespace bicbf {

/// `levels` x (`levels`-1) matrix with orthonormal columns, each orthogonal to
/// the all-ones vector (normalised Helmert contrasts).
Eigen::MatrixXd orthonormal_contrasts(int levels);

/// Centered observations plus the stacked design blocks of the included
/// effects. Cross products X'X, X'y and y'y are cached at construction so
/// each evaluation of B(g) costs one Cholesky of size total_columns().
class EffectDesign {
public:
    EffectDesign(const FactorialDataset& data, std::span<const Effect> effects);
    /// General form: `blocks` are column counts of consecutive blocks of `x`.
    /// `y` and the columns of `x` are centered here.
    EffectDesign(Eigen::VectorXd y, Eigen::MatrixXd x, std::vector<int> blocks);

    int observations() const { return static_cast<int>(y_.size()); }
    int total_columns() const { return static_cast<int>(x_.cols()); }
    std::span<const int> block_sizes() const { return blocks_; }
    std::span<const Effect> effects() const { return effects_; }

    const Eigen::VectorXd& y() const { return y_; }
    const Eigen::MatrixXd& x() const { return x_; }
    const Eigen::MatrixXd& gram() const { return gram_; }
    const Eigen::VectorXd& xty() const { return xty_; }
    double yty() const { return yty_; }

private:
    void finish();

    Eigen::VectorXd y_;
    Eigen::MatrixXd x_;
    std::vector<int> blocks_;
    std::vector<Effect> effects_;
    Eigen::MatrixXd gram_;
    Eigen::VectorXd xty_;
    double yty_ = 0.0;
};

/// log B(g); `g` holds one positive value per design block.
double conditional_log_bf10(const EffectDesign& design, std::span<const double> g);
double conditional_bf10(const EffectDesign& design, std::span<const double> g);

struct GPriorSpec {
    /// sqrt(2)/2, the "wide" fixed-effect scale.
    static constexpr double kWide = 0.70710678118654752440;

    double scale = kWide;
    int mc_samples = 10000;
    std::uint64_t seed = 0;
};

struct DefaultBfEstimate {
    BayesFactor bf;       // direction 10
    double log_se = 0.0;  // delta-method standard error of bf.log_bf
};

/// Monte Carlo default Bayes factor for one effect.
///
/// Main effects compare {e} with the intercept-only model. The interaction
/// compares {A, B, AB} with {A, B}; both marginal likelihoods are estimated
/// from the same g draws and their ratio is returned.
///
/// Draws come from RandomStream(spec.seed, "oracle/<effect>", stream_index),
/// so results are a pure function of (data, effect, spec, stream_index).
DefaultBfEstimate default_bf10(const FactorialDataset& data, Effect effect, const GPriorSpec& spec,
                               std::uint64_t stream_index = 0);

}  // namespace bicbf
