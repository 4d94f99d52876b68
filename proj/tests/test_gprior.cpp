#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include <boost/math/distributions/inverse_gamma.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>

#include "bicbf/gprior.hpp"
#include "oracles.hpp"

using namespace bicbf;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// log of the integral of B(g) * InvGamma(g; 1/2, r^2/2) over g > 0, for a
// one-block design.
double quadrature_log_bf10(const EffectDesign& design, double r) {
    const boost::math::inverse_gamma_distribution<double> prior(0.5, 0.5 * r * r);
    // Scale by the integrand's peak so large Bayes factors stay finite.
    double peak = -INFINITY;
    for (double lg = -12.0; lg <= 12.0; lg += 0.05) {
        const double g = std::exp(lg);
        peak = std::max(peak, conditional_log_bf10(design, std::span<const double>(&g, 1)));
    }
    const auto f = [&](double g) {
        if (g <= 0.0) return 0.0;
        const double pdf = boost::math::pdf(prior, g);
        if (pdf == 0.0) return 0.0;
        return std::exp(conditional_log_bf10(design, std::span<const double>(&g, 1)) - peak) * pdf;
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    return peak + std::log(integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity()));
}

}  // namespace

TEST_CASE("orthonormal contrasts", "[gprior]") {
    for (int levels = 2; levels <= 7; ++levels) {
        const Eigen::MatrixXd q = orthonormal_contrasts(levels);
        REQUIRE(q.rows() == levels);
        REQUIRE(q.cols() == levels - 1);
        CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(levels - 1, levels - 1)).norm() < 1e-14);
        CHECK(q.colwise().sum().norm() < 1e-14);
    }
}

TEST_CASE("effect design blocks sum to zero and are mutually orthogonal", "[gprior]") {
    std::mt19937_64 rng(1);
    for (auto [a, b] : {std::pair{2, 3}, std::pair{3, 4}, std::pair{2, 2}}) {
        const auto d = oracle::random_dataset(rng, a, b, 4);
        const std::vector<Effect> all{Effect::A, Effect::B, Effect::AB};
        const EffectDesign design(d, all);
        REQUIRE(design.total_columns() == a * b - 1);
        CHECK(design.x().colwise().sum().cwiseAbs().maxCoeff() < 1e-10);

        const Eigen::MatrixXd gram = design.x().transpose() * design.x();
        int start = 0;
        const auto blocks = design.block_sizes();
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            int other = 0;
            for (std::size_t j = 0; j < blocks.size(); ++j) {
                if (i != j) CHECK(gram.block(start, other, blocks[i], blocks[j]).cwiseAbs().maxCoeff() < 1e-10);
                other += blocks[j];
            }
            start += blocks[i];
        }
        CHECK(std::fabs(design.y().sum()) < 1e-10);
    }
}

TEST_CASE("conditional_bf10 tends to 1 as g -> 0", "[gprior]") {
    std::mt19937_64 rng(2);
    const auto d = oracle::random_dataset(rng, 2, 3, 5);
    const std::vector<Effect> all{Effect::A, Effect::B, Effect::AB};
    const EffectDesign design(d, all);
    const std::vector<double> tiny(3, 1e-12);
    CHECK_THAT(conditional_bf10(design, tiny), WithinAbs(1.0, 1e-8));
}

TEST_CASE("conditional_bf10 with no explained variance is the pure complexity penalty", "[gprior]") {
    // Same values in every cell: X'y = 0.
    FactorialDataset d(2, 3, 4);
    const double within[4] = {-1.5, -0.5, 0.25, 1.75};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 4; ++k) d.at(i, j, k) = within[k];
    const std::vector<Effect> all{Effect::A, Effect::B, Effect::AB};
    const EffectDesign design(d, all);
    CHECK(design.xty().cwiseAbs().maxCoeff() < 1e-12);

    const std::vector<double> g{0.3, 1.7, 0.05};
    // X_e'X_e = (N / levels_e) I with N = 24: A -> 12, B -> 8, AB -> 4.
    const double expected = -0.5 * (1 * std::log1p(0.3 * 12.0) + 2 * std::log1p(1.7 * 8.0) + 2 * std::log1p(0.05 * 4.0));
    CHECK_THAT(conditional_log_bf10(design, g), WithinAbs(expected, 1e-12));
    CHECK(conditional_bf10(design, g) < 1.0);
}

TEST_CASE("conditional_bf10 matches the dense N x N formula on a 6-point design", "[gprior][oracle]") {
    Eigen::VectorXd y(6);
    y << 1.2, 0.7, 2.1, -0.4, -1.0, 0.3;
    Eigen::MatrixXd x(6, 1);
    x << 1, 1, 1, -1, -1, -1;
    const EffectDesign design(y, x, {1});

    Eigen::VectorXd yc = y.array() - y.mean();
    for (double g : {0.01, 0.5, 1.0, 4.0, 100.0}) {
        const Eigen::VectorXd gv = Eigen::VectorXd::Constant(1, g);
        INFO("g = " << g);
        CHECK_THAT(conditional_log_bf10(design, std::span<const double>(&g, 1)),
                   WithinAbs(oracle::dense_log_bf10(yc, x, gv), 1e-10));
    }
}

TEST_CASE("conditional_bf10 matches the dense formula on random factorial designs", "[gprior][oracle]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> gd(0.01, 5.0);
    for (int rep = 0; rep < 30; ++rep) {
        const auto d = oracle::random_dataset(rng, 2, 3, 3, 0.8);
        const std::vector<Effect> all{Effect::A, Effect::B, Effect::AB};
        const EffectDesign design(d, all);
        const std::vector<double> g{gd(rng), gd(rng), gd(rng)};
        Eigen::VectorXd per_col(5);
        per_col << g[0], g[1], g[1], g[2], g[2];
        REQUIRE_THAT(conditional_log_bf10(design, g),
                     WithinAbs(oracle::dense_log_bf10(design.y(), design.x(), per_col), 1e-9));
    }
}

TEST_CASE("conditional_bf10 scale invariance", "[gprior][property]") {
    std::mt19937_64 rng(4);
    const std::vector<Effect> all{Effect::A, Effect::B, Effect::AB};
    for (int rep = 0; rep < 100; ++rep) {
        const auto d = oracle::random_dataset(rng, 2, 3, 5, 0.5);
        const std::vector<double> g{0.2 + rep * 0.01, 1.3, 0.7};
        const double base = conditional_log_bf10(EffectDesign(d, all), g);
        // Powers of two scale every intermediate exactly.
        for (double c : {2.0, 0.25, -8.0}) {
            FactorialDataset scaled = d;
            for (double& v : scaled.values()) v *= c;
            REQUIRE(conditional_log_bf10(EffectDesign(scaled, all), g) == base);
        }
        FactorialDataset scaled = d;
        for (double& v : scaled.values()) v *= 3.7;
        REQUIRE_THAT(conditional_log_bf10(EffectDesign(scaled, all), g), WithinAbs(base, 1e-12));
    }
}

TEST_CASE("conditional_bf10 increases with the explained-variance share", "[gprior][property]") {
    // y = s * x + fixed noise orthogonal to x: the share grows with s.
    Eigen::MatrixXd x(8, 1);
    x << 1, 1, 1, 1, -1, -1, -1, -1;
    Eigen::VectorXd noise(8);
    noise << 0.5, -0.5, 1.0, -1.0, 0.3, -0.3, 0.8, -0.8;
    for (double g : {0.1, 1.0, 10.0}) {
        double previous = -INFINITY;
        for (double s = 0.0; s <= 3.0; s += 0.1) {
            const EffectDesign design(s * x.col(0) + noise, x, {1});
            const double v = conditional_log_bf10(design, std::span<const double>(&g, 1));
            REQUIRE(v > previous);
            previous = v;
        }
    }
}

TEST_CASE("conditional_bf10 argument checks", "[gprior]") {
    std::mt19937_64 rng(5);
    const auto d = oracle::random_dataset(rng, 2, 3, 3);
    const std::vector<Effect> a{Effect::A};
    const EffectDesign design(d, a);
    const std::vector<double> two{1.0, 1.0};
    const std::vector<double> zero{0.0};
    CHECK_THROWS_AS(conditional_log_bf10(design, two), std::invalid_argument);
    CHECK_THROWS_AS(conditional_log_bf10(design, zero), std::domain_error);
}

TEST_CASE("default_bf10 favours H0 when every cell sits at the grand mean", "[gprior]") {
    FactorialDataset d(2, 3, 6);
    const double within[6] = {-1.0, 0.4, -0.2, 0.9, -0.6, 0.5};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 6; ++k) d.at(i, j, k) = 10.0 + within[k];
    for (Effect e : kEffects) {
        const auto est = default_bf10(d, e, {GPriorSpec::kWide, 4000, 9});
        INFO(to_string(e));
        CHECK(est.bf.direction == Direction::BF10);
        CHECK(est.bf.log_bf < 0.0);
    }
}

TEST_CASE("default_bf10 is deterministic and depends on the stream index", "[gprior]") {
    std::mt19937_64 rng(6);
    const auto d = oracle::random_dataset(rng, 2, 3, 10, 0.3);
    const GPriorSpec spec{GPriorSpec::kWide, 2000, 42};
    for (Effect e : kEffects) {
        const auto a = default_bf10(d, e, spec, 3);
        const auto b = default_bf10(d, e, spec, 3);
        REQUIRE(a.bf.log_bf == b.bf.log_bf);
        REQUIRE(a.log_se == b.log_se);
        CHECK(default_bf10(d, e, spec, 4).bf.log_bf != a.bf.log_bf);
    }
}

TEST_CASE("default_bf10 is invariant to rescaling the data", "[gprior][property]") {
    std::mt19937_64 rng(7);
    const auto d = oracle::random_dataset(rng, 2, 3, 10, 0.5);
    const GPriorSpec spec{GPriorSpec::kWide, 2000, 1};
    FactorialDataset scaled = d;
    for (double& v : scaled.values()) v *= 4.0;
    FactorialDataset odd = d;
    for (double& v : odd.values()) v *= 0.37;
    for (Effect e : kEffects) {
        REQUIRE(default_bf10(scaled, e, spec).bf.log_bf == default_bf10(d, e, spec).bf.log_bf);
        REQUIRE_THAT(default_bf10(odd, e, spec).bf.log_bf, WithinAbs(default_bf10(d, e, spec).bf.log_bf, 1e-10));
    }
}

TEST_CASE("default_bf10 agrees with one-dimensional quadrature for a single df-1 effect", "[gprior][oracle]") {
    std::mt19937_64 rng(8);
    const std::vector<Effect> a_only{Effect::A};
    for (int rep = 0; rep < 5; ++rep) {
        const auto d = oracle::random_dataset(rng, 2, 3, 8, 0.4);
        const EffectDesign design(d, a_only);
        const double reference = quadrature_log_bf10(design, GPriorSpec::kWide);
        const auto mc = default_bf10(d, Effect::A, {GPriorSpec::kWide, 100000, 100u + rep});
        INFO("rep " << rep << " quadrature " << reference << " mc " << mc.bf.log_bf);
        CHECK(std::fabs(std::expm1(mc.bf.log_bf - reference)) < 0.02);
    }
}

TEST_CASE("Monte Carlo standard error shrinks at the sqrt(M) rate", "[gprior][property]") {
    std::mt19937_64 rng(9);
    const auto d = oracle::random_dataset(rng, 2, 3, 10, 0.25);
    const auto spread = [&](int m) {
        std::vector<double> v;
        for (std::uint64_t s = 0; s < 300; ++s) v.push_back(default_bf10(d, Effect::B, {GPriorSpec::kWide, m, s}).bf.log_bf);
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0));
    };
    const double ratio = spread(1000) / spread(2000);
    INFO("sd(M=1000) / sd(M=2000) = " << ratio);
    CHECK(std::fabs(ratio / std::sqrt(2.0) - 1.0) < 0.2);
}

TEST_CASE("reported standard error tracks the spread across seeds", "[gprior]") {
    std::mt19937_64 rng(10);
    const auto d = oracle::random_dataset(rng, 2, 3, 10, 0.25);
    std::vector<double> v;
    double se_sum = 0.0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto est = default_bf10(d, Effect::AB, {GPriorSpec::kWide, 2000, s});
        v.push_back(est.bf.log_bf);
        se_sum += est.log_se;
    }
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= 200.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / 199.0);
    const double se = se_sum / 200.0;
    INFO("empirical sd " << sd << ", mean reported se " << se);
    CHECK(se / sd > 0.7);
    CHECK(se / sd < 1.3);
}

TEST_CASE("default_bf10 argument checks", "[gprior]") {
    std::mt19937_64 rng(11);
    const auto d = oracle::random_dataset(rng, 2, 3, 4);
    CHECK_THROWS_AS(default_bf10(d, Effect::A, {0.0, 2000, 1}), std::domain_error);
    CHECK_THROWS_AS(default_bf10(d, Effect::A, {GPriorSpec::kWide, 10, 1}), std::domain_error);
    FactorialDataset flat(2, 3, 4);
    for (double& v : flat.values()) v = 1.0;
    CHECK_THROWS_AS(default_bf10(flat, Effect::A, {}), std::domain_error);
}
