#include "bicbf/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "bicbf/density.hpp"

namespace bicbf {

void SimulationConfig::validate() const {
    if (a_levels < 2) throw std::invalid_argument("a_levels must be >= 2");
    if (b_levels < 2) throw std::invalid_argument("b_levels must be >= 2");
    if (cell_n < 2) throw std::invalid_argument("cell_n must be >= 2");
    if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("g must be finite and >= 0");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(oracle.scale > 0.0) || !std::isfinite(oracle.scale))
        throw std::invalid_argument("oracle.scale must be positive");
    if (oracle.mc_samples < 1000) throw std::invalid_argument("oracle.mc_samples must be >= 1000");
}

Hypothesis decide(double log_bf10) { return log_bf10 > 0.0 ? Hypothesis::H1 : Hypothesis::H0; }

EffectDraws draw_effects(const SimulationConfig& config, RandomStream& effect_rng) {
    const double sd = std::sqrt(config.g);
    EffectDraws d;
    d.alpha.resize(config.a_levels);
    d.tau.resize(config.b_levels);
    d.gamma.resize(static_cast<std::size_t>(config.a_levels) * config.b_levels);
    // Standard normals are drawn even when g = 0 so g only rescales them.
    for (double& v : d.alpha) v = sd * effect_rng.normal();
    for (double& v : d.tau) v = sd * effect_rng.normal();
    for (double& v : d.gamma) v = sd * effect_rng.normal();
    return d;
}

FactorialDataset generate_dataset(const SimulationConfig& config, RandomStream& effect_rng, RandomStream& noise_rng) {
    const int na = config.a_levels;
    const int nb = config.b_levels;
    const auto [alpha, tau, gamma] = draw_effects(config, effect_rng);

    FactorialDataset data(na, nb, config.cell_n);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            const double mu = alpha[i] + tau[j] + gamma[static_cast<std::size_t>(i) * nb + j];
            for (int k = 0; k < config.cell_n; ++k) data.at(i, j, k) = mu + noise_rng.normal();
        }
    return data;
}

FactorialDataset generate_dataset(const SimulationConfig& config, int trial) {
    RandomStream effects(config.seed, "effects", static_cast<std::uint64_t>(trial));
    RandomStream noise(config.seed, "noise", static_cast<std::uint64_t>(trial));
    return generate_dataset(config, effects, noise);
}

std::array<SimulationRecord, 3> simulate_trial(const SimulationConfig& config, int trial) {
    try {
        const FactorialDataset data = generate_dataset(config, trial);
        const AnovaTable table = fit_two_way(data);
        std::array<SimulationRecord, 3> out;
        for (std::size_t e = 0; e < kEffects.size(); ++e) {
            const Effect effect = kEffects[e];
            SimulationRecord& r = out[e];
            r.trial = trial;
            r.effect = effect;
            r.log_bf10_bic = bic_bf_for_effect(table, effect).in(Direction::BF10).log_bf;
            r.log_bf10_default =
                default_bf10(data, effect, config.oracle, static_cast<std::uint64_t>(trial)).bf.log_bf;
            r.decision_bic = decide(r.log_bf10_bic);
            r.decision_default = decide(r.log_bf10_default);
        }
        return out;
    } catch (const std::exception& ex) {
        throw std::runtime_error("trial " + std::to_string(trial) + ": " + ex.what());
    }
}

std::vector<SimulationRecord> run_simulation_serial(const SimulationConfig& config) {
    config.validate();
    std::vector<SimulationRecord> records;
    records.reserve(static_cast<std::size_t>(config.trials) * 3);
    for (int t = 0; t < config.trials; ++t) {
        const auto trial = simulate_trial(config, t);
        records.insert(records.end(), trial.begin(), trial.end());
    }
    return records;
}

std::vector<SimulationRecord> run_simulation(const SimulationConfig& config, const RunOptions& options) {
    config.validate();
    const int trials = config.trials;
    std::vector<SimulationRecord> records(static_cast<std::size_t>(trials) * 3);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(trials));
    int completed = 0;
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
    for (int t = 0; t < trials; ++t) {
        try {
            const auto trial = simulate_trial(config, t);
            std::copy(trial.begin(), trial.end(), records.begin() + static_cast<std::ptrdiff_t>(t) * 3);
        } catch (...) {
            errors[t] = std::current_exception();
        }
        if (options.progress) {
#pragma omp critical(bicbf_progress)
            options.progress(++completed, trials);
        }
    }

    // Report the lowest failing trial, as the serial loop would.
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
    return records;
}

FiveNumberSummary five_number_summary(std::span<const double> values) {
    if (values.empty()) throw std::domain_error("five-number summary of an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return {sorted.front(), quantile_sorted(sorted, 0.25), quantile_sorted(sorted, 0.5), quantile_sorted(sorted, 0.75),
            sorted.back()};
}

std::vector<EffectSummary> summarize(std::span<const SimulationRecord> records) {
    if (records.empty()) throw std::domain_error("no simulation records to summarize");
    std::vector<EffectSummary> out;
    for (Effect effect : kEffects) {
        std::vector<double> bic, def;
        int agree = 0;
        for (const auto& r : records) {
            if (r.effect != effect) continue;
            bic.push_back(r.log_bf10_bic);
            def.push_back(r.log_bf10_default);
            if (r.decision_bic == r.decision_default) ++agree;
        }
        if (bic.empty()) continue;
        EffectSummary s;
        s.effect = effect;
        s.trials = static_cast<int>(bic.size());
        s.bic = five_number_summary(bic);
        s.default_bf = five_number_summary(def);
        s.consistency = static_cast<double>(agree) / static_cast<double>(bic.size());
        out.push_back(s);
    }
    return out;
}

}  // namespace bicbf
