#include "bicbf/results_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace bicbf {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(trim(field));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

template <class T>
bool parse_number(const std::string& s, T& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && first != last;
}

bool parse_hypothesis(const std::string& s, Hypothesis& out) {
    if (s == "H0") {
        out = Hypothesis::H0;
        return true;
    }
    if (s == "H1") {
        out = Hypothesis::H1;
        return true;
    }
    return false;
}

}  // namespace

FormatError::FormatError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_results(std::ostream& out, std::span<const SimulationRecord> records) {
    out << kResultsHeader << '\n';
    for (const auto& r : records) {
        out << r.trial << ',' << to_string(r.effect) << ',' << format_double(r.log_bf10_bic) << ','
            << format_double(r.log_bf10_default) << ',' << to_string(r.decision_bic) << ','
            << to_string(r.decision_default) << '\n';
    }
}

std::vector<SimulationRecord> read_results(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError(1, "empty results file");
    if (trim(line) != kResultsHeader) throw FormatError(1, "expected header '" + std::string(kResultsHeader) + "'");

    std::vector<SimulationRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 6) throw FormatError(line_no, "expected 6 fields, got " + std::to_string(f.size()));
        SimulationRecord r;
        if (!parse_number(f[0], r.trial) || r.trial < 0) throw FormatError(line_no, "bad trial '" + f[0] + "'");
        try {
            r.effect = effect_from_string(f[1]);
        } catch (const std::exception&) {
            throw FormatError(line_no, "bad effect '" + f[1] + "'");
        }
        if (!parse_number(f[2], r.log_bf10_bic) || !std::isfinite(r.log_bf10_bic))
            throw FormatError(line_no, "bad log_bf10_bic '" + f[2] + "'");
        if (!parse_number(f[3], r.log_bf10_default) || !std::isfinite(r.log_bf10_default))
            throw FormatError(line_no, "bad log_bf10_default '" + f[3] + "'");
        if (!parse_hypothesis(f[4], r.decision_bic)) throw FormatError(line_no, "bad decision_bic '" + f[4] + "'");
        if (!parse_hypothesis(f[5], r.decision_default))
            throw FormatError(line_no, "bad decision_default '" + f[5] + "'");
        if (r.decision_bic != decide(r.log_bf10_bic) || r.decision_default != decide(r.log_bf10_default))
            throw FormatError(line_no, "decision does not match the sign of log BF10");
        records.push_back(r);
    }
    return records;
}

void write_config(std::ostream& out, const SimulationConfig& c) {
    out << "a_levels = " << c.a_levels << '\n'
        << "b_levels = " << c.b_levels << '\n'
        << "cell_n = " << c.cell_n << '\n'
        << "g = " << format_double(c.g) << '\n'
        << "trials = " << c.trials << '\n'
        << "seed = " << c.seed << '\n'
        << "oracle.scale = " << format_double(c.oracle.scale) << '\n'
        << "oracle.mc_samples = " << c.oracle.mc_samples << '\n'
        << "oracle.seed = " << c.oracle.seed << '\n';
}

SimulationConfig read_config(std::istream& in) {
    SimulationConfig c;
    bool oracle_seed_set = false;
    std::map<std::string, std::size_t> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError(line_no, "expected 'key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (seen.contains(key)) throw FormatError(line_no, "duplicate key '" + key + "'");
        seen[key] = line_no;

        bool ok = false;
        if (key == "a_levels")
            ok = parse_number(value, c.a_levels);
        else if (key == "b_levels")
            ok = parse_number(value, c.b_levels);
        else if (key == "cell_n")
            ok = parse_number(value, c.cell_n);
        else if (key == "g")
            ok = parse_number(value, c.g);
        else if (key == "trials")
            ok = parse_number(value, c.trials);
        else if (key == "seed")
            ok = parse_number(value, c.seed);
        else if (key == "oracle.scale")
            ok = parse_number(value, c.oracle.scale);
        else if (key == "oracle.mc_samples")
            ok = parse_number(value, c.oracle.mc_samples);
        else if (key == "oracle.seed")
            ok = oracle_seed_set = parse_number(value, c.oracle.seed);
        else
            throw FormatError(line_no, "unknown key '" + key + "'");
        if (!ok) throw FormatError(line_no, "bad value '" + value + "' for " + key);
    }
    if (!oracle_seed_set) c.oracle.seed = c.seed;
    return c;
}

std::string_view to_string(BfType t) { return t == BfType::Bic ? "BIC" : "default"; }

std::vector<DensitySeries> emit_density_data(std::span<const SimulationRecord> records, const std::string& label,
                                             std::optional<double> bandwidth) {
    std::vector<DensitySeries> out;
    for (Effect effect : kEffects) {
        std::vector<double> bic, def;
        for (const auto& r : records) {
            if (r.effect != effect) continue;
            bic.push_back(r.log_bf10_bic);
            def.push_back(r.log_bf10_default);
        }
        if (bic.empty()) continue;
        for (BfType type : {BfType::Bic, BfType::Default}) {
            const auto& values = type == BfType::Bic ? bic : def;
            try {
                out.push_back({label, effect, type, gaussian_kde(values, bandwidth)});
            } catch (const std::domain_error& ex) {
                throw std::domain_error("series " + label + "/" + std::string(to_string(effect)) + "/" +
                                        std::string(to_string(type)) + ": " + ex.what());
            }
        }
    }
    return out;
}

void write_density(std::ostream& out, std::span<const DensitySeries> series) {
    out << "series,effect,bf_type,bandwidth,x,density\n";
    for (const auto& s : series) {
        const std::string prefix = s.label + "," + std::string(to_string(s.effect)) + "," +
                                   std::string(to_string(s.bf_type)) + "," + format_double(s.grid.bandwidth) + ",";
        for (std::size_t i = 0; i < s.grid.x.size(); ++i)
            out << prefix << format_double(s.grid.x[i]) << ',' << format_double(s.grid.density[i]) << '\n';
    }
}

}  // namespace bicbf
