#pragma once
// Simulation study: BIC-approximate vs default g-prior Bayes factors on
// randomly generated balanced a x b factorial data.
//
// Each trial draws y_ijk = alpha_i + tau_j + gamma_ij + eps_ijk with every
// effect i.i.d. N(0, g) and eps ~ N(0, 1), fits the two-way ANOVA and records
// log BF10 for A, B and AB under both methods. A method selects H1 when its
// log BF10 is positive.
//
// Randomness per trial comes from three labelled substreams of the
// configured seed ("effects", "noise", and the oracle's "oracle/<effect>"),
// so a trial's records depend only on (config, trial index). The effect
// draws are standard normals scaled by sqrt(g), which couples datasets
// across g for a fixed seed.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bicbf/anova.hpp"
#include "bicbf/gprior.hpp"
#include "bicbf/rng.hpp"
#include "bicbf/summary_bf.hpp"

namespace bicbf {

struct SimulationConfig {
    int a_levels = 2;
    int b_levels = 3;
    int cell_n = 50;
    double g = 0.0;
    int trials = 1000;
    std::uint64_t seed = 1;
    GPriorSpec oracle{};

    /// Throws std::invalid_argument on the first invalid field.
    void validate() const;
};

struct SimulationRecord {
    int trial = 0;
    Effect effect = Effect::A;
    double log_bf10_bic = 0.0;
    double log_bf10_default = 0.0;
    Hypothesis decision_bic = Hypothesis::H0;
    Hypothesis decision_default = Hypothesis::H0;

    friend bool operator==(const SimulationRecord&, const SimulationRecord&) = default;
};

/// H1 iff log BF10 > 0.
Hypothesis decide(double log_bf10);

struct EffectDraws {
    std::vector<double> alpha;  // a_levels
    std::vector<double> tau;    // b_levels
    std::vector<double> gamma;  // a_levels * b_levels, row-major in (i, j)
};

/// alpha, tau, gamma in that order, each sqrt(g) * N(0, 1).
EffectDraws draw_effects(const SimulationConfig& config, RandomStream& effect_rng);

FactorialDataset generate_dataset(const SimulationConfig& config, RandomStream& effect_rng, RandomStream& noise_rng);
/// Uses the trial's own "effects" and "noise" substreams.
FactorialDataset generate_dataset(const SimulationConfig& config, int trial);

/// The three records (A, B, AB) of one trial.
std::array<SimulationRecord, 3> simulate_trial(const SimulationConfig& config, int trial);

struct RunOptions {
    /// OpenMP thread count; 0 leaves the runtime default.
    int threads = 0;
    /// Called with (completed, total) after each trial, serialised.
    std::function<void(int, int)> progress;
};

/// Records ordered by (trial, effect). Trials run concurrently under OpenMP;
/// the output is identical to run_simulation_serial for any thread count.
std::vector<SimulationRecord> run_simulation(const SimulationConfig& config, const RunOptions& options = {});

/// Single-threaded reference implementation of run_simulation.
std::vector<SimulationRecord> run_simulation_serial(const SimulationConfig& config);

struct FiveNumberSummary {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Quartiles by linear interpolation between order statistics (type 7).
FiveNumberSummary five_number_summary(std::span<const double> values);

struct EffectSummary {
    Effect effect = Effect::A;
    int trials = 0;
    FiveNumberSummary bic;
    FiveNumberSummary default_bf;
    double consistency = 0.0;  // share of trials where both methods decide alike
};

/// One summary per effect present, in A, B, AB order. Throws on empty input.
std::vector<EffectSummary> summarize(std::span<const SimulationRecord> records);

}  // namespace bicbf
