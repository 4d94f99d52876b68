#include "bicbf/anova.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bicbf {

std::string_view to_string(Effect e) {
    switch (e) {
        case Effect::A: return "A";
        case Effect::B: return "B";
        case Effect::AB: return "AB";
    }
    return "?";
}

Effect effect_from_string(std::string_view s) {
    if (s == "A") return Effect::A;
    if (s == "B") return Effect::B;
    if (s == "AB") return Effect::AB;
    throw std::invalid_argument("unknown effect '" + std::string(s) + "'");
}

FactorialDataset::FactorialDataset(int a_levels, int b_levels, int cell_n)
    : FactorialDataset(a_levels, b_levels, cell_n,
                       std::vector<double>(static_cast<std::size_t>(std::max(a_levels, 0)) * std::max(b_levels, 0) *
                                           std::max(cell_n, 0))) {}

FactorialDataset::FactorialDataset(int a_levels, int b_levels, int cell_n, std::vector<double> y)
    : a_(a_levels), b_(b_levels), n_(cell_n), y_(std::move(y)) {
    if (a_ < 2 || b_ < 2) throw std::invalid_argument("each factor needs at least 2 levels");
    if (n_ < 2) throw std::invalid_argument("cell size must be at least 2");
    if (y_.size() != static_cast<std::size_t>(a_) * b_ * n_)
        throw std::invalid_argument("observation count does not match a*b*cell_n");
}

FactorialDataset FactorialDataset::from_rows(std::span<const int> a, std::span<const int> b,
                                             std::span<const double> y) {
    if (a.size() != b.size() || a.size() != y.size()) throw std::invalid_argument("row columns differ in length");
    if (y.empty()) throw std::invalid_argument("dataset has no rows");
    const int a_levels = *std::max_element(a.begin(), a.end());
    const int b_levels = *std::max_element(b.begin(), b.end());
    if (*std::min_element(a.begin(), a.end()) < 1 || *std::min_element(b.begin(), b.end()) < 1)
        throw std::invalid_argument("factor levels are 1-based");
    if (a_levels < 2 || b_levels < 2) throw std::invalid_argument("each factor needs at least 2 levels");

    std::vector<std::vector<double>> cells(static_cast<std::size_t>(a_levels) * b_levels);
    for (std::size_t r = 0; r < y.size(); ++r)
        cells[static_cast<std::size_t>(a[r] - 1) * b_levels + (b[r] - 1)].push_back(y[r]);

    const std::size_t cell_n = cells.front().size();
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (cells[c].size() != cell_n) {
            std::ostringstream msg;
            msg << "unbalanced design: cell (" << c / b_levels + 1 << "," << c % b_levels + 1 << ") has "
                << cells[c].size() << " observations, cell (1,1) has " << cell_n;
            throw std::invalid_argument(msg.str());
        }
    }
    std::vector<double> flat;
    flat.reserve(y.size());
    for (const auto& cell : cells) flat.insert(flat.end(), cell.begin(), cell.end());
    return FactorialDataset(a_levels, b_levels, static_cast<int>(cell_n), std::move(flat));
}

FactorialDataset read_dataset(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("dataset: empty input");
    std::string header;
    for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) header += c;
    if (header != "a,b,y") throw std::runtime_error("dataset: expected header 'a,b,y', got '" + line + "'");

    std::vector<int> a, b;
    std::vector<double> y;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream row(line);
        std::string fa, fb, fy, extra;
        if (!std::getline(row, fa, ',') || !std::getline(row, fb, ',') || !std::getline(row, fy, ',') ||
            std::getline(row, extra, ','))
            throw std::runtime_error("dataset: line " + std::to_string(line_no) + ": expected 3 fields");
        try {
            std::size_t used = 0;
            const int ia = std::stoi(fa, &used);
            if (fa.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(fa);
            const int ib = std::stoi(fb, &used);
            if (fb.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(fb);
            const double v = std::stod(fy, &used);
            if (fy.find_first_not_of(" \t\r", used) != std::string::npos || !std::isfinite(v))
                throw std::invalid_argument(fy);
            a.push_back(ia);
            b.push_back(ib);
            y.push_back(v);
        } catch (const std::exception&) {
            throw std::runtime_error("dataset: line " + std::to_string(line_no) + ": malformed row '" + line + "'");
        }
    }
    return FactorialDataset::from_rows(a, b, y);
}

AnovaTable fit_two_way(const FactorialDataset& data) {
    const int na = data.a_levels();
    const int nb = data.b_levels();
    const int nc = data.cell_n();
    const auto y = data.values();

    std::vector<double> cell_mean(static_cast<std::size_t>(na) * nb, 0.0);
    std::vector<double> a_mean(na, 0.0), b_mean(nb, 0.0);
    double grand = 0.0;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            double s = 0.0;
            for (int k = 0; k < nc; ++k) s += data.at(i, j, k);
            cell_mean[i * nb + j] = s / nc;
        }
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j) a_mean[i] += cell_mean[i * nb + j];
        a_mean[i] /= nb;
    }
    for (int j = 0; j < nb; ++j) {
        for (int i = 0; i < na; ++i) b_mean[j] += cell_mean[i * nb + j];
        b_mean[j] /= na;
    }
    for (double m : a_mean) grand += m;
    grand /= na;

    AnovaTable t;
    t.n_total = static_cast<int>(y.size());
    double ss_a = 0.0, ss_b = 0.0, ss_ab = 0.0, ss_e = 0.0, ss_t = 0.0;
    for (int i = 0; i < na; ++i) ss_a += (a_mean[i] - grand) * (a_mean[i] - grand);
    for (int j = 0; j < nb; ++j) ss_b += (b_mean[j] - grand) * (b_mean[j] - grand);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            const double d = cell_mean[i * nb + j] - a_mean[i] - b_mean[j] + grand;
            ss_ab += d * d;
            for (int k = 0; k < nc; ++k) {
                const double r = data.at(i, j, k) - cell_mean[i * nb + j];
                ss_e += r * r;
                const double c = data.at(i, j, k) - grand;
                ss_t += c * c;
            }
        }

    t[Effect::A] = {ss_a * nb * nc, na - 1, 0.0};
    t[Effect::B] = {ss_b * na * nc, nb - 1, 0.0};
    t[Effect::AB] = {ss_ab * nc, (na - 1) * (nb - 1), 0.0};
    t.ss_error = ss_e;
    t.df_error = na * nb * (nc - 1);
    t.ss_total = ss_t;

    // Residuals that are zero up to accumulated rounding count as zero.
    double scale = 0.0;
    for (double v : y) scale += v * v;
    t.degenerate = !(ss_e > 64.0 * std::numeric_limits<double>::epsilon() * scale);

    const double ms_error = ss_e / t.df_error;
    for (auto& row : t.effects)
        row.f = t.degenerate ? std::numeric_limits<double>::quiet_NaN() : (row.ss / row.df) / ms_error;
    return t;
}

BayesFactor bic_bf_for_effect(const AnovaTable& table, Effect effect, NConvention convention) {
    if (table.degenerate) throw std::domain_error("ANOVA table is degenerate (zero error sum of squares)");
    const EffectRow& row = table[effect];
    int n = table.n_total;
    switch (convention) {
        case NConvention::TotalObservations: n = table.n_total; break;
    }
    return bf01_from_f(row.f, row.df, table.df_error, n);
}

}  // namespace bicbf
