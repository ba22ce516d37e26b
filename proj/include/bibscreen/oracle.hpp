#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>

// Deliberately naive recomputation of the indicator table. Shares no code
// with the library: it parses canonical record lines itself, keeps its own
// fraction type and rescans the whole record list for every value.
namespace bibscreen::oracle {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct Options {
    long long hyperprolific_threshold = 36;
    bool hyperprolific_inclusive = true;
    long long external_min_pubs = 2;
};

/// Indicator table CSV for canonical record lines. Records whose doc_type is
/// neither article nor review are ignored.
std::string metrics_csv(std::istream& records, const Options& options = {});
std::string metrics_csv(std::string_view records, const Options& options = {});

}  // namespace bibscreen::oracle
