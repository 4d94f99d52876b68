// bicbf: Bayes factors from reported ANOVA / t statistics, and the
// simulation study comparing them with default g-prior Bayes factors.
//
// Exit codes: 0 success, 1 domain or runtime error, 2 usage error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bicbf/anova.hpp"
#include "bicbf/gprior.hpp"
#include "bicbf/results_io.hpp"
#include "bicbf/simulation.hpp"
#include "bicbf/stat_parser.hpp"
#include "bicbf/summary_bf.hpp"

namespace {

using namespace bicbf;
using nlohmann::json;

enum class OutputFormat { Plain, Csv, Json };

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

// Thrown for argument combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

OutputFormat default_format() {
    const char* env = std::getenv("BICBF_FORMAT");
    if (!env) return OutputFormat::Plain;
    const std::string v = env;
    if (v == "csv") return OutputFormat::Csv;
    if (v == "json") return OutputFormat::Json;
    return OutputFormat::Plain;
}

const std::map<std::string, OutputFormat> kFormatNames{
    {"plain", OutputFormat::Plain}, {"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}};

std::string sig4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string fixed(double v, int decimals) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

void print_bf(const BayesFactor& bf01, Direction direction, OutputFormat format,
              const std::optional<SummaryStat>& stat = std::nullopt) {
    const BayesFactor shown = bf01.in(direction);
    const EvidenceClass cls = classify(shown);
    const std::string name = "BF" + std::string(to_string(direction));
    switch (format) {
        case OutputFormat::Plain:
            if (stat) std::cout << "input: " << render_stat(*stat) << '\n';
            std::cout << name << " = " << sig4(shown.value()) << " — " << to_string(cls.category)
                      << " evidence for " << to_string(cls.favored) << '\n'
                      << "log(" << name << ") = " << sig4(shown.log_bf) << '\n';
            break;
        case OutputFormat::Csv:
            std::cout << "direction,bf,log_bf,favored,category,bf_favored\n"
                      << to_string(direction) << ',' << format_double(shown.value()) << ','
                      << format_double(shown.log_bf) << ',' << to_string(cls.favored) << ','
                      << to_string(cls.category) << ',' << format_double(cls.bf_in_favored_direction) << '\n';
            break;
        case OutputFormat::Json: {
            json j{{"direction", to_string(direction)},
                   {"bf", shown.value()},
                   {"log_bf", shown.log_bf},
                   {"favored", to_string(cls.favored)},
                   {"category", to_string(cls.category)},
                   {"bf_favored", cls.bf_in_favored_direction}};
            if (stat) j["input"] = render_stat(*stat);
            std::cout << j.dump(2) << '\n';
            break;
        }
    }
}

// ---- bf ---------------------------------------------------------------------

struct BfArgs {
    std::string statistic;
    std::optional<double> f, t, eta_p2;
    std::optional<int> df1, df2, n;
    std::string direction = "01";
    OutputFormat format = default_format();
};

int run_bf(const BfArgs& a) {
    const Direction dir = a.direction == "10" ? Direction::BF10 : Direction::BF01;
    const int routes = !a.statistic.empty() + a.f.has_value() + a.t.has_value() + a.eta_p2.has_value();
    if (routes != 1) throw UsageError("give exactly one of a statistic string, --f, --t or --eta-p2");

    if (!a.statistic.empty()) {
        const ParsedReport report = parse_stat(a.statistic, a.n);
        for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
        if (!report.has_n()) throw UsageError("statistic has no sample size; pass --n");
        print_bf(bf01_from_stat(report.stat), dir, a.format, report.stat);
        return kExitOk;
    }
    if (!a.n) throw UsageError("--n is required");
    if (!a.df2 && !a.eta_p2) throw UsageError("--df2 is required");
    if (a.f) {
        if (!a.df1) throw UsageError("--df1 is required with --f");
        print_bf(bf01_from_f(*a.f, *a.df1, *a.df2, *a.n), dir, a.format);
    } else if (a.t) {
        if (a.df1 && *a.df1 != 1) throw UsageError("a t statistic has df1 = 1");
        print_bf(bf01_from_t(*a.t, *a.df2, *a.n), dir, a.format);
    } else {
        print_bf(bf01_from_partial_eta_sq(*a.eta_p2, *a.n, a.df1.value_or(1)), dir, a.format);
    }
    return kExitOk;
}

// ---- parse ------------------------------------------------------------------

struct ParseArgs {
    std::string text;
    std::optional<int> n;
    OutputFormat format = default_format();
};

int run_parse(const ParseArgs& a) {
    const ParsedReport r = parse_stat(a.text, a.n);
    const SummaryStat& s = r.stat;
    const std::string kind = s.kind == TestKind::F ? "F" : "t";
    switch (a.format) {
        case OutputFormat::Plain:
            std::cout << "kind: " << kind << '\n';
            if (s.df1) std::cout << "df1: " << *s.df1 << '\n';
            std::cout << "df2: " << s.df2 << '\n' << "statistic: " << s.statistic_text << '\n';
            if (s.n) std::cout << "n: " << *s.n << '\n';
            if (s.p) std::cout << "p: " << s.p->comparator << s.p->value << '\n';
            std::cout << "canonical: " << render_stat(s) << '\n';
            for (const auto& w : r.warnings) std::cout << "warning: " << w << '\n';
            break;
        case OutputFormat::Csv:
            std::cout << "kind,df1,df2,statistic,n,p\n"
                      << kind << ',' << (s.df1 ? std::to_string(*s.df1) : "") << ',' << s.df2 << ','
                      << s.statistic_text << ',' << (s.n ? std::to_string(*s.n) : "") << ','
                      << (s.p ? s.p->comparator + s.p->value : "") << '\n';
            break;
        case OutputFormat::Json: {
            json j{{"kind", kind}, {"df2", s.df2}, {"statistic", s.statistic}, {"statistic_text", s.statistic_text},
                   {"canonical", render_stat(s)}, {"raw", r.raw}, {"warnings", r.warnings}};
            j["df1"] = s.df1 ? json(*s.df1) : json(nullptr);
            j["n"] = s.n ? json(*s.n) : json(nullptr);
            j["p"] = s.p ? json(s.p->comparator + s.p->value) : json(nullptr);
            std::cout << j.dump(2) << '\n';
            break;
        }
    }
    return kExitOk;
}

// ---- anova ------------------------------------------------------------------

struct AnovaArgs {
    std::string path;
    double prior_scale = GPriorSpec::kWide;
    int mc_samples = 10000;
    std::uint64_t seed = 1;
    bool with_default = true;
    OutputFormat format = default_format();
};

int run_anova(const AnovaArgs& a) {
    std::ifstream in(a.path);
    if (!in) throw std::runtime_error("cannot open " + a.path);
    const FactorialDataset data = read_dataset(in);
    const AnovaTable table = fit_two_way(data);
    if (table.degenerate) throw std::domain_error("zero error sum of squares: F ratios are undefined");
    const GPriorSpec spec{a.prior_scale, a.mc_samples, a.seed};

    json rows = json::array();
    std::ostringstream plain;
    plain << "effect      SS         df   F          logBF10(BIC)  logBF10(default)\n";
    for (Effect e : kEffects) {
        const EffectRow& row = table[e];
        const double bic = bic_bf_for_effect(table, e).in(Direction::BF10).log_bf;
        std::optional<double> def;
        if (a.with_default) def = default_bf10(data, e, spec).bf.log_bf;
        rows.push_back({{"effect", to_string(e)},
                        {"ss", row.ss},
                        {"df", row.df},
                        {"f", row.f},
                        {"log_bf10_bic", bic},
                        {"log_bf10_default", def ? json(*def) : json(nullptr)}});
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-10s  %-9.4g  %-3d  %-9.4g  %-12.4g  %s\n", std::string(to_string(e)).c_str(),
                      row.ss, row.df, row.f, bic, def ? sig4(*def).c_str() : "-");
        plain << buf;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-10s  %-9.4g  %-3d\n%-10s  %-9.4g  %-3d\n", "error", table.ss_error,
                  table.df_error, "total", table.ss_total, table.n_total - 1);
    plain << buf;

    switch (a.format) {
        case OutputFormat::Plain: std::cout << plain.str(); break;
        case OutputFormat::Csv:
            std::cout << "effect,ss,df,f,log_bf10_bic,log_bf10_default\n";
            for (const auto& r : rows)
                std::cout << r["effect"].get<std::string>() << ',' << format_double(r["ss"].get<double>()) << ','
                          << r["df"].get<int>() << ',' << format_double(r["f"].get<double>()) << ','
                          << format_double(r["log_bf10_bic"].get<double>()) << ','
                          << (r["log_bf10_default"].is_null() ? ""
                                                              : format_double(r["log_bf10_default"].get<double>()))
                          << '\n';
            std::cout << "error," << format_double(table.ss_error) << ',' << table.df_error << ",,,\n";
            break;
        case OutputFormat::Json:
            std::cout << json{{"effects", rows},
                              {"ss_error", table.ss_error},
                              {"df_error", table.df_error},
                              {"ss_total", table.ss_total},
                              {"n", table.n_total}}
                             .dump(2)
                      << '\n';
            break;
    }
    return kExitOk;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
    std::string config_path;
    std::optional<int> a_levels, b_levels, cell_n, trials, mc_samples;
    std::optional<double> g, prior_scale;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string out;
    bool quiet = false;
};

int run_simulate(const SimulateArgs& a) {
    SimulationConfig c;
    if (!a.config_path.empty()) {
        std::ifstream in(a.config_path);
        if (!in) throw std::runtime_error("cannot open config " + a.config_path);
        c = read_config(in);
    } else {
        c.oracle.seed = c.seed;
    }
    if (a.a_levels) c.a_levels = *a.a_levels;
    if (a.b_levels) c.b_levels = *a.b_levels;
    if (a.cell_n) c.cell_n = *a.cell_n;
    if (a.g) c.g = *a.g;
    if (a.trials) c.trials = *a.trials;
    if (a.seed) c.seed = c.oracle.seed = *a.seed;
    if (a.prior_scale) c.oracle.scale = *a.prior_scale;
    if (a.mc_samples) c.oracle.mc_samples = *a.mc_samples;
    try {
        c.validate();
    } catch (const std::invalid_argument& ex) {
        throw UsageError(ex.what());
    }

    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + a.out);

    RunOptions opts;
    opts.threads = a.threads;
    if (!a.quiet) {
        const int step = std::max(1, c.trials / 10);
        opts.progress = [step](int done, int total) {
            if (done % step == 0 || done == total) std::cerr << "simulate: " << done << "/" << total << " trials\n";
        };
    }
    const auto start = std::chrono::steady_clock::now();
    const auto records = run_simulation(c, opts);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    write_results(out, records);
    out.close();
    if (!out) throw std::runtime_error("error writing " + a.out);
    std::cerr << "simulate: wrote " << records.size() << " rows to " << a.out << " in " << fixed(seconds, 2)
              << " s\n";
    return kExitOk;
}

// ---- report -----------------------------------------------------------------

struct ReportArgs {
    std::vector<std::string> files;
    std::vector<std::string> labels;
    bool table = false;
    bool density = false;
    std::string out;
    std::optional<double> bandwidth;
    OutputFormat format = default_format();
};

void print_table(const std::string& label, const std::vector<EffectSummary>& summaries, OutputFormat format,
                 json& json_out, bool& csv_header) {
    for (const auto& s : summaries) {
        const auto row = [](const FiveNumberSummary& f) {
            return std::vector<double>{f.min, f.q1, f.median, f.q3, f.max};
        };
        switch (format) {
            case OutputFormat::Plain: {
                std::cout << "Effect " << to_string(s.effect) << " (" << s.trials << " trials)\n";
                std::printf("%-8s %-8s %8s %8s %8s %8s %8s %12s\n", "g", "BF type", "Min", "Q1", "Median", "Q3",
                            "Max", "Consistency");
                std::printf("%-8s %-8s", label.c_str(), "default");
                for (double v : row(s.default_bf)) std::printf(" %8.2f", v);
                std::printf("\n%-8s %-8s", "", "BIC");
                for (double v : row(s.bic)) std::printf(" %8.2f", v);
                std::printf(" %12.3f\n\n", s.consistency);
                break;
            }
            case OutputFormat::Csv:
                if (!csv_header) {
                    std::cout << "series,effect,bf_type,min,q1,median,q3,max,consistency,trials\n";
                    csv_header = true;
                }
                for (BfType t : {BfType::Default, BfType::Bic}) {
                    std::cout << label << ',' << to_string(s.effect) << ',' << to_string(t);
                    for (double v : row(t == BfType::Bic ? s.bic : s.default_bf)) std::cout << ',' << format_double(v);
                    std::cout << ',' << format_double(s.consistency) << ',' << s.trials << '\n';
                }
                break;
            case OutputFormat::Json: {
                const auto obj = [&](const FiveNumberSummary& f) {
                    return json{{"min", f.min}, {"q1", f.q1}, {"median", f.median}, {"q3", f.q3}, {"max", f.max}};
                };
                json_out.push_back({{"series", label},
                                    {"effect", to_string(s.effect)},
                                    {"trials", s.trials},
                                    {"bic", obj(s.bic)},
                                    {"default", obj(s.default_bf)},
                                    {"consistency", s.consistency}});
                break;
            }
        }
    }
}

int run_report(const ReportArgs& a) {
    if (!a.table && !a.density) throw UsageError("choose --table and/or --density");
    if (a.density && a.out.empty()) throw UsageError("--density needs --out <path>");
    if (!a.labels.empty() && a.labels.size() != a.files.size())
        throw UsageError("give one --label per results file");

    json json_out = json::array();
    bool csv_header = false;
    std::vector<DensitySeries> series;
    for (std::size_t i = 0; i < a.files.size(); ++i) {
        const std::string label = a.labels.empty() ? std::filesystem::path(a.files[i]).stem().string() : a.labels[i];
        std::ifstream in(a.files[i]);
        if (!in) throw std::runtime_error("cannot open " + a.files[i]);
        std::vector<SimulationRecord> records;
        try {
            records = read_results(in);
        } catch (const FormatError& ex) {
            throw std::runtime_error(a.files[i] + ": " + ex.what());
        }
        if (records.empty()) throw std::runtime_error(a.files[i] + ": no data rows");
        if (a.table) print_table(label, summarize(records), a.format, json_out, csv_header);
        if (a.density) {
            auto s = emit_density_data(records, label, a.bandwidth);
            series.insert(series.end(), s.begin(), s.end());
        }
    }
    if (a.table && a.format == OutputFormat::Json) std::cout << json_out.dump(2) << '\n';
    if (a.density) {
        std::ofstream out(a.out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + a.out);
        write_density(out, series);
        if (!out) throw std::runtime_error("error writing " + a.out);
        std::cerr << "report: wrote " << series.size() << " density series to " << a.out << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayes factors from ANOVA and t-test summary statistics"};
    app.require_subcommand(1);

    BfArgs bf;
    auto* bf_cmd = app.add_subcommand("bf", "Approximate Bayes factor from a reported statistic");
    bf_cmd->add_option("statistic", bf.statistic, "Statistic string, e.g. \"F(1,17)=2.584\"");
    auto* opt_f = bf_cmd->add_option("--f", bf.f, "F ratio")->check(CLI::NonNegativeNumber);
    auto* opt_t = bf_cmd->add_option("--t", bf.t, "t statistic");
    auto* opt_eta = bf_cmd->add_option("--eta-p2", bf.eta_p2, "Partial eta squared");
    opt_f->excludes(opt_t)->excludes(opt_eta);
    opt_t->excludes(opt_eta);
    bf_cmd->add_option("--df1", bf.df1, "Effect degrees of freedom")->check(CLI::PositiveNumber);
    bf_cmd->add_option("--df2", bf.df2, "Error degrees of freedom")->check(CLI::PositiveNumber);
    bf_cmd->add_option("--n", bf.n, "Number of observations")->check(CLI::Range(2, 1000000000));
    bf_cmd->add_option("--direction", bf.direction, "01 (evidence for H0) or 10")->check(CLI::IsMember({"01", "10"}));
    bf_cmd->add_option("--format", bf.format, "plain, csv or json")
        ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));

    ParseArgs parse;
    auto* parse_cmd = app.add_subcommand("parse", "Parse a reported statistic string");
    parse_cmd->add_option("text", parse.text, "Statistic string")->required();
    parse_cmd->add_option("--n", parse.n, "Number of observations (overrides n= in the text)")
        ->check(CLI::PositiveNumber);
    parse_cmd->add_option("--format", parse.format, "plain, csv or json")
        ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));

    AnovaArgs anova;
    auto* anova_cmd = app.add_subcommand("anova", "Two-way ANOVA and both Bayes factors for an a,b,y dataset");
    anova_cmd->add_option("dataset", anova.path, "CSV with header a,b,y")->required();
    anova_cmd->add_option("--prior-scale", anova.prior_scale, "g-prior scale r")->check(CLI::PositiveNumber);
    anova_cmd->add_option("--mc-samples", anova.mc_samples, "Monte Carlo draws")->check(CLI::Range(1000, 100000000));
    anova_cmd->add_option("--seed", anova.seed, "Oracle seed");
    anova_cmd->add_flag("!--no-default", anova.with_default, "Skip the g-prior Bayes factor");
    anova_cmd->add_option("--format", anova.format, "plain, csv or json")
        ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Run the BIC vs default Bayes factor simulation");
    sim_cmd->add_option("--config", sim.config_path, "key = value config file")->check(CLI::ExistingFile);
    sim_cmd->add_option("--a-levels", sim.a_levels, "Levels of factor A")->check(CLI::Range(2, 1000));
    sim_cmd->add_option("--b-levels", sim.b_levels, "Levels of factor B")->check(CLI::Range(2, 1000));
    sim_cmd->add_option("--cell-n", sim.cell_n, "Observations per cell")->check(CLI::Range(2, 10000000));
    sim_cmd->add_option("--g", sim.g, "Effect variance")->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--trials", sim.trials, "Number of datasets")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", sim.seed, "Master seed");
    sim_cmd->add_option("--prior-scale", sim.prior_scale, "g-prior scale r")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--mc-samples", sim.mc_samples, "Monte Carlo draws per Bayes factor")
        ->check(CLI::Range(1000, 100000000));
    sim_cmd->add_option("--threads", sim.threads, "OpenMP threads (0 = runtime default)")
        ->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--out", sim.out, "Results CSV path")->required();
    sim_cmd->add_flag("--quiet", sim.quiet, "No progress output");

    ReportArgs report;
    auto* report_cmd = app.add_subcommand("report", "Summaries and density data from results files");
    report_cmd->add_option("results", report.files, "Results CSV files")->required();
    report_cmd->add_option("--label", report.labels, "Series label per file (e.g. its g)");
    report_cmd->add_flag("--table", report.table, "Five-number summaries and consistency");
    report_cmd->add_flag("--density", report.density, "Write kernel density series");
    report_cmd->add_option("--out", report.out, "Density output path");
    report_cmd->add_option("--bandwidth", report.bandwidth, "Kernel bandwidth (default: Silverman)")
        ->check(CLI::PositiveNumber);
    report_cmd->add_option("--format", report.format, "plain, csv or json")
        ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*bf_cmd) return run_bf(bf);
        if (*parse_cmd) return run_parse(parse);
        if (*anova_cmd) return run_anova(anova);
        if (*sim_cmd) return run_simulate(sim);
        if (*report_cmd) return run_report(report);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitUsage;
}
