#pragma once
// Text formats of the simulation study.
//
// Results file (CSV, one row per trial and effect, doubles with 17
// significant digits):
//   trial,effect,log_bf10_bic,log_bf10_default,decision_bic,decision_default
//
// Config file: one `key = value` per line, '#' starts a comment. Keys are
// the SimulationConfig field names: a_levels, b_levels, cell_n, g, trials,
// seed, oracle.scale, oracle.mc_samples, oracle.seed (defaults to seed).
//
// Density file (CSV):
//   series,effect,bf_type,bandwidth,x,density

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bicbf/density.hpp"
#include "bicbf/simulation.hpp"

namespace bicbf {

inline constexpr std::string_view kResultsHeader =
    "trial,effect,log_bf10_bic,log_bf10_default,decision_bic,decision_default";

class FormatError : public std::runtime_error {
public:
    FormatError(std::size_t line, const std::string& message);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// "%.17g"; round-trips every finite double.
std::string format_double(double v);

void write_results(std::ostream& out, std::span<const SimulationRecord> records);
/// Throws FormatError naming the first bad line (1-based, header is line 1).
std::vector<SimulationRecord> read_results(std::istream& in);

void write_config(std::ostream& out, const SimulationConfig& config);
SimulationConfig read_config(std::istream& in);

enum class BfType { Bic, Default };
std::string_view to_string(BfType t);

struct DensitySeries {
    std::string label;  // typically the g value of the run
    Effect effect = Effect::A;
    BfType bf_type = BfType::Bic;
    DensityGrid grid;
};

/// One kernel density series per (effect, BF type) in `records`, tagged with
/// `label`. Throws std::domain_error naming a constant group.
std::vector<DensitySeries> emit_density_data(std::span<const SimulationRecord> records, const std::string& label,
                                             std::optional<double> bandwidth = std::nullopt);

void write_density(std::ostream& out, std::span<const DensitySeries> series);

}  // namespace bicbf
