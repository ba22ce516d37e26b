#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bibscreen::csv {

struct Row {
    std::size_t line_number = 0;  // 1-based line where the row starts
    std::vector<std::string> fields;
    std::string raw;
};

/// RFC 4180 reader: comma separated, double-quote escaping, quoted fields may
/// span lines. A row with an unterminated quote is returned with `malformed`.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Next row, or nullopt at end of input. Blank lines are skipped.
    std::optional<Row> next();

    bool last_malformed() const noexcept { return malformed_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
    bool malformed_ = false;
};

/// Quote a field when it contains a separator, quote or newline.
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

}  // namespace bibscreen::csv
