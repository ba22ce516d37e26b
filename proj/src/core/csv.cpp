#include "bibscreen/csv.hpp"

namespace bibscreen::csv {

std::optional<Row> Reader::next() {
    std::string line;
    while (true) {
        if (!std::getline(in_, line)) return std::nullopt;
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) break;
    }

    Row row;
    row.line_number = line_;
    row.raw = line;
    malformed_ = false;

    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    while (true) {
        if (i == line.size()) {
            if (!quoted) break;
            // quoted field continues on the next physical line
            std::string more;
            if (!std::getline(in_, more)) {
                malformed_ = true;
                break;
            }
            ++line_;
            if (!more.empty() && more.back() == '\r') more.pop_back();
            field += '\n';
            row.raw += '\n';
            row.raw += more;
            line = std::move(more);
            i = 0;
            continue;
        }
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
        ++i;
    }
    row.fields.push_back(std::move(field));
    return row;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += escape(fields[i]);
    }
    return out;
}

}  // namespace bibscreen::csv
