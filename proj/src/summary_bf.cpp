#include "bicbf/summary_bf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bicbf {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

void check_n(int n) { require(n >= 2, "n must be an integer >= 2"); }

}  // namespace

std::string_view to_string(Direction d) { return d == Direction::BF01 ? "01" : "10"; }

std::string_view to_string(Hypothesis h) { return h == Hypothesis::H0 ? "H0" : "H1"; }

std::string_view to_string(EvidenceCategory c) {
    switch (c) {
        case EvidenceCategory::Weak: return "weak";
        case EvidenceCategory::Positive: return "positive";
        case EvidenceCategory::Strong: return "strong";
        case EvidenceCategory::VeryStrong: return "very strong";
    }
    return "?";
}

double BayesFactor::value() const { return std::exp(log_bf); }

BayesFactor BayesFactor::in(Direction d) const { return d == direction ? *this : invert(*this); }

BayesFactor invert(const BayesFactor& bf) {
    return {-bf.log_bf, bf.direction == Direction::BF01 ? Direction::BF10 : Direction::BF01};
}

EvidenceClass classify(const BayesFactor& bf) {
    require(std::isfinite(bf.log_bf), "log Bayes factor must be finite");
    const BayesFactor b01 = bf.in(Direction::BF01);

    EvidenceClass out;
    // log_bf == 0 falls on the H0 side.
    const bool favors_h0 = b01.log_bf >= 0.0;
    out.favored = favors_h0 ? Hypothesis::H0 : Hypothesis::H1;
    const double log_folded = favors_h0 ? b01.log_bf : -b01.log_bf;
    out.bf_in_favored_direction = std::exp(log_folded);

    // Compare on the log scale so that a BF of exactly 3 (etc.) lands in the
    // lower bin regardless of exp/log round-off in how it was constructed.
    const double x = out.bf_in_favored_direction;
    if (x <= 3.0 || log_folded <= std::log(3.0))
        out.category = EvidenceCategory::Weak;
    else if (x <= 20.0 || log_folded <= std::log(20.0))
        out.category = EvidenceCategory::Positive;
    else if (x <= 150.0 || log_folded <= std::log(150.0))
        out.category = EvidenceCategory::Strong;
    else
        out.category = EvidenceCategory::VeryStrong;
    return out;
}

SummaryStat SummaryStat::as_f_test() const {
    if (kind == TestKind::F) return *this;
    SummaryStat f = *this;
    f.kind = TestKind::F;
    f.statistic = statistic * statistic;
    f.statistic_text.clear();
    f.df1 = 1;
    return f;
}

BayesFactor bf01_from_f(double f, int df1, int df2, int n) {
    require(std::isfinite(f), "F must be finite");
    require(f >= 0.0, "F must be nonnegative");
    require(df1 >= 1, "df1 must be >= 1");
    require(df2 >= 1, "df2 must be >= 1");
    check_n(n);
    const double nd = n;
    const double log_bf =
        0.5 * df1 * std::log(nd) - 0.5 * nd * std::log1p(f * df1 / static_cast<double>(df2));
    return {log_bf, Direction::BF01};
}

BayesFactor bf01_from_t(double t, int df2, int n) {
    require(std::isfinite(t), "t must be finite");
    return bf01_from_f(t * t, 1, df2, n);
}

BayesFactor bf01_from_stat(const SummaryStat& stat) {
    if (!stat.n) throw std::domain_error("sample size n is required to compute a Bayes factor");
    if (stat.kind == TestKind::T) return bf01_from_t(stat.statistic, stat.df2, *stat.n);
    if (!stat.df1) throw std::domain_error("df1 is required for an F statistic");
    return bf01_from_f(stat.statistic, *stat.df1, stat.df2, *stat.n);
}

double delta_bic_10(double sse1, double sse0, int n, int dk) {
    require(std::isfinite(sse1) && std::isfinite(sse0), "sums of squares must be finite");
    require(sse1 > 0.0, "sse1 must be positive");
    require(sse0 >= sse1, "sse0 must be >= sse1");
    require(dk >= 1, "dk must be >= 1");
    check_n(n);
    const double nd = n;
    return nd * std::log(sse1 / sse0) + dk * std::log(nd);
}

BayesFactor bf01_from_delta_bic(double delta_bic_10) {
    require(std::isfinite(delta_bic_10), "delta BIC must be finite");
    return {0.5 * delta_bic_10, Direction::BF01};
}

BayesFactor bf01_from_partial_eta_sq(double eta_p2, int n, int df1) {
    require(std::isfinite(eta_p2), "partial eta squared must be finite");
    require(eta_p2 >= 0.0 && eta_p2 < 1.0, "partial eta squared must lie in [0, 1)");
    require(df1 >= 1, "df1 must be >= 1");
    check_n(n);
    const double nd = n;
    return {0.5 * (nd * std::log1p(-eta_p2) + df1 * std::log(nd)), Direction::BF01};
}

double partial_eta_sq_from_f(double f, int df1, int df2) {
    require(std::isfinite(f) && f >= 0.0, "F must be finite and nonnegative");
    require(df1 >= 1 && df2 >= 1, "degrees of freedom must be >= 1");
    const double num = f * df1;
    return num / (num + df2);
}

}  // namespace bicbf
