#include "bicbf/stat_parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace bicbf {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}

namespace {

constexpr double kIntegralTolerance = 1e-9;

class Scanner {
public:
    explicit Scanner(std::string_view text) : text_(text) {}

    std::size_t pos() const { return pos_; }
    bool at_end() {
        skip_ws();
        return pos_ == text_.size();
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() &&
            std::tolower(static_cast<unsigned char>(text_[pos_])) == std::tolower(static_cast<unsigned char>(c))) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    /// Captures a decimal literal verbatim: [+-]? (digits [. digits?] | . digits) ([eE][+-]?digits)?
    std::string number() {
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
        const std::size_t int_digits = digits();
        std::size_t frac_digits = 0;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            frac_digits = digits();
        }
        if (int_digits + frac_digits == 0) {
            pos_ = start;
            fail("expected a number");
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) pos_ = save;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

private:
    std::size_t digits() {
        std::size_t count = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
            ++count;
        }
        return count;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

double to_double(const std::string& token, std::size_t position) {
    // from_chars rejects a leading '+'.
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (first != last && *first == '+') ++first;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value))
        throw ParseError("malformed number '" + token + "'", position);
    return value;
}

int to_integral(const std::string& token, std::size_t position, const char* what, int minimum) {
    const double value = to_double(token, position);
    const double rounded = std::round(value);
    if (std::fabs(value - rounded) > kIntegralTolerance)
        throw ParseError(std::string(what) + " must be an integer (corrected degrees of freedom are not supported), got '" +
                             token + "'",
                         position);
    if (rounded < minimum || rounded > 1e9)
        throw ParseError(std::string(what) + " must be an integer >= " + std::to_string(minimum) + ", got '" + token + "'",
                         position);
    return static_cast<int>(rounded);
}

}  // namespace

ParsedReport parse_stat(std::string_view text, std::optional<int> n) {
    Scanner s(text);
    ParsedReport report;
    report.raw = std::string(text);
    SummaryStat& stat = report.stat;

    if (s.at_end()) s.fail("empty statistic");

    if (s.accept('F')) {
        stat.kind = TestKind::F;
    } else if (s.accept('t')) {
        stat.kind = TestKind::T;
    } else {
        s.fail("expected 'F' or 't'");
    }

    s.expect('(');
    if (stat.kind == TestKind::F) {
        std::size_t at = (s.skip_ws(), s.pos());
        stat.df1 = to_integral(s.number(), at, "df1", 1);
        s.expect(',');
    }
    std::size_t at = (s.skip_ws(), s.pos());
    stat.df2 = to_integral(s.number(), at, "df2", 1);
    s.expect(')');
    s.expect('=');

    at = (s.skip_ws(), s.pos());
    stat.statistic_text = s.number();
    stat.statistic = to_double(stat.statistic_text, at);
    if (stat.kind == TestKind::F && stat.statistic < 0.0)
        throw std::domain_error("F must be nonnegative, got " + stat.statistic_text);

    std::optional<int> parsed_n;
    while (s.accept(',')) {
        if (s.accept('p')) {
            if (stat.p) s.fail("duplicate p clause");
            ReportedP p;
            const char c = s.peek();
            if (c != '=' && c != '<' && c != '>') s.fail("expected '=', '<' or '>' after p");
            s.accept(c);
            p.comparator = c;
            at = (s.skip_ws(), s.pos());
            p.value = s.number();
            to_double(p.value, at);
            stat.p = std::move(p);
        } else if (s.accept('n')) {
            if (parsed_n) s.fail("duplicate n clause");
            s.expect('=');
            at = (s.skip_ws(), s.pos());
            parsed_n = to_integral(s.number(), at, "n", 1);
        } else {
            s.fail("expected 'p' or 'n' clause");
        }
    }
    if (!s.at_end()) s.fail("unexpected trailing text");

    stat.n = n ? n : parsed_n;
    if (n && parsed_n && *n != *parsed_n)
        report.warnings.push_back("n=" + std::to_string(*parsed_n) + " in text overridden by n=" + std::to_string(*n));
    if (stat.p)
        report.warnings.push_back(std::string("reported p") + stat.p->comparator + stat.p->value +
                                  " is kept as metadata and not used");
    if (!stat.n) report.warnings.push_back("no sample size n given; supply n before computing a Bayes factor");
    return report;
}

std::string render_stat(const SummaryStat& stat) {
    std::string out;
    std::string value = stat.statistic_text;
    if (value.empty()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", stat.statistic);
        value = buf;
    }
    if (stat.kind == TestKind::F)
        out = "F(" + std::to_string(stat.df1.value_or(1)) + "," + std::to_string(stat.df2) + ")=" + value;
    else
        out = "t(" + std::to_string(stat.df2) + ")=" + value;
    if (stat.p) out += ", p" + std::string(1, stat.p->comparator) + stat.p->value;
    if (stat.n) out += ", n=" + std::to_string(*stat.n);
    return out;
}

}  // namespace bicbf
