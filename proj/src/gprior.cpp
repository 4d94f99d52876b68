#include "bicbf/gprior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bicbf/rng.hpp"

namespace bicbf {

namespace {

// Stack-allocated storage for the usual small designs (2x3 has 5 columns).
constexpr int kSmallColumns = 16;
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kSmallColumns, kSmallColumns>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kSmallColumns, 1>;

template <class Matrix, class Vector>
double log_bf_kernel(const EffectDesign& design, std::span<const double> g) {
    const int p = design.total_columns();
    const auto blocks = design.block_sizes();

    Vector root_g(p);
    int col = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const double s = std::sqrt(g[b]);
        for (int c = 0; c < blocks[b]; ++c) root_g(col++) = s;
    }

    // I + D X'X D with D = G^(1/2); its determinant equals det(I + X G X').
    Matrix m = root_g.asDiagonal() * design.gram() * root_g.asDiagonal();
    m.diagonal().array() += 1.0;
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) throw std::runtime_error("g-prior system is not positive definite");

    const auto& l = llt.matrixL();
    double log_det = 0.0;
    for (int i = 0; i < p; ++i) log_det += std::log(llt.matrixLLT()(i, i));
    log_det *= 2.0;

    // Woodbury: y'(I + XGX')^-1 y = y'y - u'(I + DX'XD)^-1 u, u = D X'y.
    Vector u = root_g.cwiseProduct(design.xty());
    l.solveInPlace(u);
    const double explained = u.squaredNorm() / design.yty();
    if (!(explained < 1.0)) throw std::runtime_error("g-prior quadratic form is not positive");

    const double n_minus_1 = design.observations() - 1.0;
    return -0.5 * log_det - 0.5 * n_minus_1 * std::log1p(-explained);
}

double log_mean_exp(std::span<const double> v, double& max_out) {
    const double mx = *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    max_out = mx;
    return mx + std::log(s / static_cast<double>(v.size()));
}

}  // namespace

Eigen::MatrixXd orthonormal_contrasts(int levels) {
    if (levels < 2) throw std::invalid_argument("contrasts need at least 2 levels");
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(levels, levels - 1);
    for (int c = 0; c < levels - 1; ++c) {
        const double m = c + 1;
        const double norm = std::sqrt(m * (m + 1.0));
        for (int r = 0; r <= c; ++r) q(r, c) = 1.0 / norm;
        q(c + 1, c) = -m / norm;
    }
    return q;
}

EffectDesign::EffectDesign(const FactorialDataset& data, std::span<const Effect> effects)
    : effects_(effects.begin(), effects.end()) {
    const int na = data.a_levels();
    const int nb = data.b_levels();
    const int nc = data.cell_n();
    const Eigen::MatrixXd qa = orthonormal_contrasts(na);
    const Eigen::MatrixXd qb = orthonormal_contrasts(nb);

    int p = 0;
    for (Effect e : effects_) {
        const int width = e == Effect::A ? na - 1 : e == Effect::B ? nb - 1 : (na - 1) * (nb - 1);
        blocks_.push_back(width);
        p += width;
    }

    const auto n = static_cast<Eigen::Index>(data.size());
    y_ = Eigen::Map<const Eigen::VectorXd>(data.values().data(), n);
    x_.resize(n, p);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            for (int k = 0; k < nc; ++k) {
                const auto row = static_cast<Eigen::Index>(data.index(i, j, k));
                int col = 0;
                for (Effect e : effects_) {
                    switch (e) {
                        case Effect::A:
                            x_.row(row).segment(col, na - 1) = qa.row(i);
                            col += na - 1;
                            break;
                        case Effect::B:
                            x_.row(row).segment(col, nb - 1) = qb.row(j);
                            col += nb - 1;
                            break;
                        case Effect::AB:
                            for (int ca = 0; ca < na - 1; ++ca)
                                for (int cb = 0; cb < nb - 1; ++cb) x_(row, col++) = qa(i, ca) * qb(j, cb);
                            break;
                    }
                }
            }
    finish();
}

EffectDesign::EffectDesign(Eigen::VectorXd y, Eigen::MatrixXd x, std::vector<int> blocks)
    : y_(std::move(y)), x_(std::move(x)), blocks_(std::move(blocks)) {
    if (x_.rows() != y_.size()) throw std::invalid_argument("design rows do not match observations");
    if (std::accumulate(blocks_.begin(), blocks_.end(), 0) != x_.cols())
        throw std::invalid_argument("block sizes do not add up to the design columns");
    x_.rowwise() -= x_.colwise().mean();
    finish();
}

void EffectDesign::finish() {
    y_.array() -= y_.mean();
    if (y_.size() <= x_.cols() + 1) throw std::invalid_argument("need more observations than design columns + 1");
    gram_ = x_.transpose() * x_;
    xty_ = x_.transpose() * y_;
    yty_ = y_.squaredNorm();
    if (!(yty_ > 0.0)) throw std::domain_error("observations have zero variance");
}

double conditional_log_bf10(const EffectDesign& design, std::span<const double> g) {
    if (g.size() != design.block_sizes().size()) throw std::invalid_argument("need one g per design block");
    for (double v : g)
        if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error("g must be positive and finite");
    if (design.total_columns() == 0) return 0.0;
    if (design.total_columns() <= kSmallColumns) return log_bf_kernel<SmallMatrix, SmallVector>(design, g);
    return log_bf_kernel<Eigen::MatrixXd, Eigen::VectorXd>(design, g);
}

double conditional_bf10(const EffectDesign& design, std::span<const double> g) {
    return std::exp(conditional_log_bf10(design, g));
}

DefaultBfEstimate default_bf10(const FactorialDataset& data, Effect effect, const GPriorSpec& spec,
                               std::uint64_t stream_index) {
    if (!(spec.scale > 0.0) || !std::isfinite(spec.scale)) throw std::domain_error("prior scale must be positive");
    if (spec.mc_samples < 1000) throw std::domain_error("mc_samples must be >= 1000");
    if (fit_two_way(data).degenerate) throw std::domain_error("data are degenerate (zero error sum of squares)");

    std::vector<Effect> with_effects;
    std::vector<Effect> without_effects;
    if (effect == Effect::AB) {
        without_effects = {Effect::A, Effect::B};
        with_effects = {Effect::A, Effect::B, Effect::AB};
    } else {
        with_effects = {effect};
    }
    const EffectDesign with(data, with_effects);
    const EffectDesign without(data, without_effects);

    RandomStream rng(spec.seed, "oracle/" + std::string(to_string(effect)), stream_index);
    const double ig_scale = 0.5 * spec.scale * spec.scale;
    const auto m = static_cast<std::size_t>(spec.mc_samples);

    std::vector<double> log_with(m), log_without(m, 0.0);
    std::vector<double> g(with_effects.size());
    const std::span<const double> g_without(g.data(), without_effects.size());
    for (std::size_t s = 0; s < m; ++s) {
        for (double& v : g) v = rng.inverse_gamma(0.5, ig_scale);
        log_with[s] = conditional_log_bf10(with, g);
        if (!without_effects.empty()) log_without[s] = conditional_log_bf10(without, g_without);
    }

    double max_w = 0.0, max_v = 0.0;
    const double lw = log_mean_exp(log_with, max_w);
    const double lv = log_mean_exp(log_without, max_v);

    // Delta-method variance of log(mean w / mean v) on rescaled values.
    const double mean_w = std::exp(lw - max_w);
    const double mean_v = std::exp(lv - max_v);
    double var_w = 0.0, var_v = 0.0, cov = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
        const double dw = std::exp(log_with[s] - max_w) / mean_w - 1.0;
        const double dv = std::exp(log_without[s] - max_v) / mean_v - 1.0;
        var_w += dw * dw;
        var_v += dv * dv;
        cov += dw * dv;
    }
    const double denom = static_cast<double>(m) * static_cast<double>(m - 1);
    const double log_var = std::max(0.0, (var_w + var_v - 2.0 * cov) / denom);

    return {{lw - lv, Direction::BF10}, std::sqrt(log_var)};
}

}  // namespace bicbf
