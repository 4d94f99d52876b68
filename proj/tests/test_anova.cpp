#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "bicbf/anova.hpp"
#include "oracles.hpp"

using namespace bicbf;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("constant data is degenerate", "[anova]") {
    FactorialDataset d(2, 3, 4);
    for (double& v : d.values()) v = 7.5;
    const AnovaTable t = fit_two_way(d);
    CHECK(t.degenerate);
    for (Effect e : kEffects) {
        CHECK(t[e].ss == 0.0);
        CHECK(std::isnan(t[e].f));
    }
    CHECK(t.ss_error == 0.0);
    CHECK_THROWS_AS(bic_bf_for_effect(t, Effect::A), std::domain_error);
}

TEST_CASE("8-point 2x2 crossover matches the regression oracle", "[anova]") {
    // Cell means (1,-1 / -1,1), residuals +-1 in each cell.
    FactorialDataset d(2, 2, 2);
    const double means[2][2] = {{1.0, -1.0}, {-1.0, 1.0}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            d.at(i, j, 0) = means[i][j] + 1.0;
            d.at(i, j, 1) = means[i][j] - 1.0;
        }
    const auto ss = oracle::nested_model_ss(d);
    // Pure interaction: main effects vanish, SS_AB = 8 * 1^2, SS_error = 8 * 1^2.
    REQUIRE_THAT(ss.a, WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(ss.b, WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(ss.ab, WithinRel(8.0, 1e-12));
    REQUIRE_THAT(ss.error, WithinRel(8.0, 1e-12));

    const AnovaTable t = fit_two_way(d);
    CHECK_THAT(t[Effect::A].ss, WithinAbs(ss.a, 1e-12));
    CHECK_THAT(t[Effect::B].ss, WithinAbs(ss.b, 1e-12));
    CHECK_THAT(t[Effect::AB].ss, WithinRel(ss.ab, 1e-12));
    CHECK_THAT(t.ss_error, WithinRel(ss.error, 1e-12));
    CHECK(t.df_error == 4);
    CHECK(t[Effect::AB].df == 1);
    // F_AB = (8/1) / (8/4) = 4.
    CHECK_THAT(t[Effect::AB].f, WithinRel(4.0, 1e-12));
    CHECK_FALSE(t.degenerate);
}

TEST_CASE("degrees of freedom and orthogonal partition", "[anova][property]") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> lv(2, 5), cn(2, 8);
    for (int rep = 0; rep < 1000; ++rep) {
        const int a = lv(rng), b = lv(rng), n = cn(rng);
        const auto d = oracle::random_dataset(rng, a, b, n, 1.0);
        const AnovaTable t = fit_two_way(d);
        REQUIRE(t[Effect::A].df == a - 1);
        REQUIRE(t[Effect::B].df == b - 1);
        REQUIRE(t[Effect::AB].df == (a - 1) * (b - 1));
        REQUIRE(t.df_error == a * b * (n - 1));
        const double sum = t[Effect::A].ss + t[Effect::B].ss + t[Effect::AB].ss + t.ss_error;
        REQUIRE_THAT(sum, WithinRel(t.ss_total, 1e-8));
    }
}

TEST_CASE("sums of squares agree with nested model comparison", "[anova][oracle]") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> lv(2, 3), cn(2, 4);
    for (int rep = 0; rep < 150; ++rep) {
        const auto d = oracle::random_dataset(rng, lv(rng), lv(rng), cn(rng), 0.7);
        const AnovaTable t = fit_two_way(d);
        const auto o = oracle::nested_model_ss(d);
        REQUIRE_THAT(t[Effect::A].ss, WithinRel(o.a, 1e-8));
        REQUIRE_THAT(t[Effect::B].ss, WithinRel(o.b, 1e-8));
        REQUIRE_THAT(t[Effect::AB].ss, WithinRel(o.ab, 1e-8));
        REQUIRE_THAT(t.ss_error, WithinRel(o.error, 1e-8));
        REQUIRE_THAT(t.ss_total, WithinRel(o.total, 1e-8));
    }
}

TEST_CASE("shift and scale invariance of F and the BIC Bayes factor", "[anova][property]") {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> shift(-100.0, 100.0), scale(0.1, 10.0);
    for (int rep = 0; rep < 1000; ++rep) {
        const auto d = oracle::random_dataset(rng, 2, 3, 5, 0.8);
        const AnovaTable base = fit_two_way(d);

        FactorialDataset shifted = d, scaled = d;
        const double c = shift(rng);
        const double s = (rep % 2 ? 1.0 : -1.0) * scale(rng);
        for (double& v : shifted.values()) v += c;
        for (double& v : scaled.values()) v *= s;
        const AnovaTable ts = fit_two_way(shifted);
        const AnovaTable tc = fit_two_way(scaled);

        for (Effect e : kEffects) {
            REQUIRE_THAT(ts[e].f, WithinRel(base[e].f, 1e-8));
            REQUIRE_THAT(tc[e].f, WithinRel(base[e].f, 1e-10));
            REQUIRE_THAT(tc[e].ss, WithinRel(base[e].ss * s * s, 1e-10));
            REQUIRE_THAT(bic_bf_for_effect(tc, e).log_bf, WithinAbs(bic_bf_for_effect(base, e).log_bf, 1e-10));
            REQUIRE_THAT(bic_bf_for_effect(ts, e).log_bf, WithinAbs(bic_bf_for_effect(base, e).log_bf, 1e-8));
        }
    }
}

TEST_CASE("shift by a constant leaves sums of squares unchanged", "[anova]") {
    std::mt19937_64 rng(45);
    const auto d = oracle::random_dataset(rng, 2, 3, 10, 1.0);
    FactorialDataset shifted = d;
    for (double& v : shifted.values()) v += 3.25;
    const AnovaTable a = fit_two_way(d), b = fit_two_way(shifted);
    for (Effect e : kEffects) {
        CHECK_THAT(b[e].ss, WithinRel(a[e].ss, 1e-10));
        CHECK_THAT(b[e].f, WithinRel(a[e].f, 1e-10));
    }
}

TEST_CASE("bic_bf_for_effect uses the total observation count", "[anova]") {
    // F = 0 for a df-1 effect with N = 300 gives the floor -ln(300)/2.
    AnovaTable t;
    t[Effect::A] = {0.0, 1, 0.0};
    t[Effect::B] = {0.0, 2, 0.0};
    t[Effect::AB] = {0.0, 2, 0.0};
    t.ss_error = 294.0;
    t.df_error = 294;
    t.n_total = 300;
    CHECK_THAT(bic_bf_for_effect(t, Effect::A).in(Direction::BF10).log_bf, WithinAbs(-2.852, 5e-4));
    CHECK_THAT(bic_bf_for_effect(t, Effect::A).in(Direction::BF10).log_bf,
               WithinRel(-0.5 * std::log(300.0), 1e-14));
    CHECK_THAT(bic_bf_for_effect(t, Effect::B).in(Direction::BF10).log_bf, WithinAbs(-5.704, 5e-4));
}

TEST_CASE("bic_bf_for_effect equals the SSE route on random data", "[anova][property]") {
    std::mt19937_64 rng(46);
    for (int rep = 0; rep < 200; ++rep) {
        const auto d = oracle::random_dataset(rng, 2, 3, 6, 0.4);
        const AnovaTable t = fit_two_way(d);
        const int n = static_cast<int>(d.size());
        for (Effect e : kEffects) {
            const BayesFactor via_sse =
                bf01_from_delta_bic(delta_bic_10(t.ss_error, t[e].ss + t.ss_error, n, t[e].df));
            REQUIRE_THAT(bic_bf_for_effect(t, e).value(), WithinRel(via_sse.value(), 1e-10));
        }
    }
}

TEST_CASE("dataset construction and file format", "[anova]") {
    std::istringstream ok("a,b,y\n1,1,0.5\n1,1,1.5\n1,2,2\n1,2,3\n2,1,-1\n2,1,0\n2,2,4\n2,2,5\n");
    const FactorialDataset d = read_dataset(ok);
    CHECK(d.a_levels() == 2);
    CHECK(d.b_levels() == 2);
    CHECK(d.cell_n() == 2);
    CHECK(d.at(0, 1, 1) == 3.0);
    CHECK(d.at(1, 0, 0) == -1.0);

    std::istringstream unbalanced("a,b,y\n1,1,0\n1,1,1\n1,2,2\n2,1,3\n2,2,4\n");
    CHECK_THROWS_WITH(read_dataset(unbalanced), Catch::Matchers::ContainsSubstring("unbalanced"));

    std::istringstream bad_header("x,y,z\n1,1,0\n");
    CHECK_THROWS_AS(read_dataset(bad_header), std::runtime_error);

    std::istringstream bad_row("a,b,y\n1,1,0\n1,x,1\n");
    CHECK_THROWS_WITH(read_dataset(bad_row), Catch::Matchers::ContainsSubstring("line 3"));

    CHECK_THROWS_AS(FactorialDataset(1, 3, 4), std::invalid_argument);
    CHECK_THROWS_AS(FactorialDataset(2, 3, 1), std::invalid_argument);
}
