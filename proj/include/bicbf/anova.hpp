#pragma once
// Balanced two-way fixed-effects ANOVA with interaction.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "bicbf/summary_bf.hpp"

namespace bicbf {

enum class Effect { A, B, AB };

inline constexpr std::array<Effect, 3> kEffects{Effect::A, Effect::B, Effect::AB};

std::string_view to_string(Effect e);
Effect effect_from_string(std::string_view s);

/// Balanced a x b layout with cell_n observations per cell. Observations are
/// stored cell-major: y[(i*b + j)*cell_n + k] with 0-based i, j, k.
class FactorialDataset {
public:
    FactorialDataset(int a_levels, int b_levels, int cell_n);
    FactorialDataset(int a_levels, int b_levels, int cell_n, std::vector<double> y);

    /// Builds from (a, b, y) rows with 1-based levels; throws if any cell
    /// count differs from the others or a level is missing.
    static FactorialDataset from_rows(std::span<const int> a, std::span<const int> b, std::span<const double> y);

    int a_levels() const { return a_; }
    int b_levels() const { return b_; }
    int cell_n() const { return n_; }
    std::size_t size() const { return y_.size(); }

    double& at(int i, int j, int k) { return y_[index(i, j, k)]; }
    double at(int i, int j, int k) const { return y_[index(i, j, k)]; }

    std::span<const double> values() const { return y_; }
    std::span<double> values() { return y_; }

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * b_ + j) * n_ + k;
    }

private:
    int a_;
    int b_;
    int n_;
    std::vector<double> y_;
};

/// Reads the `a,b,y` delimited dataset format (header required, 1-based levels).
FactorialDataset read_dataset(std::istream& in);

struct EffectRow {
    double ss = 0.0;
    int df = 0;
    double f = 0.0;  // NaN when the table is degenerate
};

struct AnovaTable {
    std::array<EffectRow, 3> effects{};  // indexed by Effect
    double ss_error = 0.0;
    int df_error = 0;
    double ss_total = 0.0;
    int n_total = 0;
    /// Set when the error sum of squares is zero, so no F ratio exists.
    bool degenerate = false;

    const EffectRow& operator[](Effect e) const { return effects[static_cast<std::size_t>(e)]; }
    EffectRow& operator[](Effect e) { return effects[static_cast<std::size_t>(e)]; }
};

AnovaTable fit_two_way(const FactorialDataset& data);

/// Which count plays the role of n in the BIC penalty. Factorial designs use
/// the total number of observations N = a*b*cell_n.
enum class NConvention { TotalObservations };

/// BIC-approximate Bayes factor for one effect from its F ratio. Returns
/// direction 01; throws on a degenerate table.
BayesFactor bic_bf_for_effect(const AnovaTable& table, Effect effect,
                              NConvention convention = NConvention::TotalObservations);

}  // namespace bicbf
