#pragma once
// Parser for inline statistic reports as they appear in published results:
//
//   F(<df1>,<df2>)=<value>[, p<cmp><value>][, n=<value>]
//   t(<df2>)=<value>[, p<cmp><value>][, n=<value>]
//
// with <cmp> one of '=', '<', '>'. Matching is case-insensitive and
// tolerant of whitespace around every token.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bicbf/summary_bf.hpp"

namespace bicbf {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position);
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

struct ParsedReport {
    SummaryStat stat;
    std::string raw;
    std::vector<std::string> warnings;

    bool has_n() const { return stat.n.has_value(); }
};

/// `n`, when given, overrides any n= clause in the text. A report without
/// any n is returned with a warning; bf01_from_stat() will refuse it.
///
/// Throws ParseError (with a 0-based character offset) for malformed text
/// and std::domain_error for a negative F.
ParsedReport parse_stat(std::string_view text, std::optional<int> n = std::nullopt);

/// Canonical text form, e.g. "F(1,17)=2.584, p=0.126, n=18". Feeding the
/// result back through parse_stat() reproduces the same SummaryStat.
std::string render_stat(const SummaryStat& stat);

}  // namespace bicbf
