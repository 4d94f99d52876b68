#pragma once
// Closed-form Bayes factor approximations from reported ANOVA / t-test
// statistics, plus Raftery's four-way evidence classification.
//
// Everything is evaluated in natural-log space. The radical form
// sqrt(n^df1 * (1 + F*df1/df2)^-n) overflows long before the Bayes factor
// itself does (n = 300, df1 = 2 is already 9e4 inside the root), so it is
// never formed.

#include <optional>
#include <string>
#include <string_view>

namespace bicbf {

enum class Direction { BF01, BF10 };

enum class Hypothesis { H0, H1 };

enum class EvidenceCategory { Weak, Positive, Strong, VeryStrong };

enum class TestKind { F, T };

std::string_view to_string(Direction d);
std::string_view to_string(Hypothesis h);
std::string_view to_string(EvidenceCategory c);

/// A Bayes factor carried as its natural logarithm together with the
/// direction it was computed in (01 = evidence for H0 over H1).
struct BayesFactor {
    double log_bf = 0.0;
    Direction direction = Direction::BF01;

    double value() const;
    /// Re-expresses the same evidence in direction `d`.
    BayesFactor in(Direction d) const;

    friend bool operator==(const BayesFactor&, const BayesFactor&) = default;
};

BayesFactor invert(const BayesFactor& bf);

struct EvidenceClass {
    Hypothesis favored = Hypothesis::H0;
    EvidenceCategory category = EvidenceCategory::Weak;
    double bf_in_favored_direction = 1.0;  // always >= 1
};

/// Folds `bf` so that it is >= 1 in the favored direction and applies the
/// boundaries (1,3] weak, (3,20] positive, (20,150] strong, (150,inf) very
/// strong. A Bayes factor of exactly 1 is reported as weak evidence for H0.
EvidenceClass classify(const BayesFactor& bf);

/// Reported p-value, kept verbatim. Never used in any computation.
struct ReportedP {
    char comparator = '=';  // one of '=', '<', '>'
    std::string value;      // decimal text as written

    friend bool operator==(const ReportedP&, const ReportedP&) = default;
};

/// A reported test statistic such as F(1,17)=2.584 or t(71)=2.0.
///
/// `statistic_text` keeps the decimal exactly as it was written so that
/// rendering never re-rounds; `statistic` is its parsed value.
struct SummaryStat {
    TestKind kind = TestKind::F;
    double statistic = 0.0;
    std::string statistic_text;
    std::optional<int> df1;  // absent for t
    int df2 = 1;
    std::optional<int> n;
    std::optional<ReportedP> p;

    /// t(df2)=t becomes F(1,df2)=t^2; F stays as is.
    SummaryStat as_f_test() const;

    friend bool operator==(const SummaryStat&, const SummaryStat&) = default;
};

/// BF01 ~ sqrt(n^df1 * (1 + f*df1/df2)^-n), returned with direction 01.
/// Throws std::domain_error naming the offending argument.
BayesFactor bf01_from_f(double f, int df1, int df2, int n);

/// Independent-samples t: identical to bf01_from_f(t*t, 1, df2, n).
BayesFactor bf01_from_t(double t, int df2, int n);

/// Evaluates a SummaryStat through the F route; throws if n is missing.
BayesFactor bf01_from_stat(const SummaryStat& stat);

/// Delta BIC_10 = n ln(sse1/sse0) + dk ln(n).
double delta_bic_10(double sse1, double sse0, int n, int dk);

/// BF01 ~ exp(delta_bic_10 / 2).
BayesFactor bf01_from_delta_bic(double delta_bic_10);

/// Uses SSE1/SSE0 = 1 - partial eta squared.
BayesFactor bf01_from_partial_eta_sq(double eta_p2, int n, int df1);

/// eta_p^2 = F df1 / (F df1 + df2).
double partial_eta_sq_from_f(double f, int df1, int df2);

}  // namespace bicbf
