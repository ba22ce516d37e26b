#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>
#include <variant>

#include <json.hpp>

#include "bibscreen/corpus.hpp"
#include "bibscreen/csv.hpp"
#include "bibscreen/error.hpp"
#include "bibscreen/io.hpp"

namespace bibscreen {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

struct RawAffiliation {
    std::optional<std::string> institution_id;
    std::optional<std::string> institution;
    std::optional<std::string> country;
};

struct RawAuthor {
    std::string author_id;
    std::vector<RawAffiliation> affiliations;
};

struct RawRecord {
    std::string record_id;
    int year = 0;
    std::string doc_type;
    std::vector<std::string> subject_categories;
    std::vector<RawAuthor> authors;
    std::vector<std::string> corresponding_author_ids;
};

std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

void sort_unique(std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Validates and resolves a raw record. Returns the reason on failure.
std::variant<PublicationRecord, std::string> finish(RawRecord raw,
                                                    const InstitutionRegistry& registry) {
    PublicationRecord rec;
    if (raw.record_id.empty()) return std::string("empty record_id");
    rec.record_id = std::move(raw.record_id);
    rec.year = raw.year;
    rec.doc_type = DocType::parse(raw.doc_type);
    if (rec.doc_type.kind == DocKind::other && rec.doc_type.other_name.empty())
        return std::string("empty doc_type");
    if (raw.authors.empty()) return std::string("record has no authors");

    std::unordered_set<std::string> author_ids;
    for (auto& ra : raw.authors) {
        if (ra.author_id.empty()) return std::string("author with empty author_id");
        if (!author_ids.insert(ra.author_id).second)
            return "author '" + ra.author_id + "' listed twice";
        if (ra.affiliations.empty()) return "author '" + ra.author_id + "' has no affiliations";
        AuthorEntry entry;
        entry.author_id = std::move(ra.author_id);
        std::set<std::string> insts;
        for (auto& raff : ra.affiliations) {
            AffiliationRef aff;
            if (raff.institution_id && !raff.institution_id->empty()) {
                if (registry.contains(*raff.institution_id))
                    aff.institution_id = *raff.institution_id;
                else
                    aff.raw = *raff.institution_id;
            } else if (raff.institution && !raff.institution->empty()) {
                if (auto id = registry.resolve(*raff.institution))
                    aff.institution_id = *id;
                else
                    aff.raw = *raff.institution;
            } else {
                return "author '" + entry.author_id +
                       "' has an affiliation without institution or institution_id";
            }
            if (raff.country && !raff.country->empty()) {
                aff.country = upper(*raff.country);
                if (!is_country_code(aff.country))
                    return "invalid country code '" + *raff.country + "'";
            } else if (aff.resolved()) {
                aff.country = registry.find(aff.institution_id)->country;
            } else {
                return "unresolved affiliation '" + aff.raw + "' without country";
            }
            if (aff.resolved() && !insts.insert(aff.institution_id).second)
                return "author '" + entry.author_id + "' lists institution '" +
                       aff.institution_id + "' twice";
            entry.affiliations.push_back(std::move(aff));
        }
        rec.authors.push_back(std::move(entry));
    }
    rec.subject_categories = std::move(raw.subject_categories);
    sort_unique(rec.subject_categories);
    rec.corresponding_author_ids = std::move(raw.corresponding_author_ids);
    sort_unique(rec.corresponding_author_ids);
    for (const auto& c : rec.corresponding_author_ids)
        if (!author_ids.count(c))
            return "corresponding author '" + c + "' is not among the authors";
    return rec;
}

std::vector<std::string> string_list(const json& j, const char* key) {
    std::vector<std::string> out;
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return out;
    if (!it->is_array()) throw DataError(std::string("field '") + key + "' must be an array");
    for (const auto& v : *it) {
        if (!v.is_string()) throw DataError(std::string("field '") + key + "' must hold strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::optional<std::string> opt_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw DataError(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

std::string req_string(const json& j, const char* key) {
    auto v = opt_string(j, key);
    if (!v) throw DataError(std::string("missing field '") + key + "'");
    return *v;
}

RawRecord raw_from_json(const json& j) {
    if (!j.is_object()) throw DataError("line is not an object");
    RawRecord r;
    r.record_id = req_string(j, "record_id");
    auto y = j.find("year");
    if (y == j.end() || !y->is_number_integer()) throw DataError("missing or non-integer 'year'");
    r.year = y->get<int>();
    r.doc_type = req_string(j, "doc_type");
    r.subject_categories = string_list(j, "subject_categories");
    r.corresponding_author_ids = string_list(j, "corresponding_author_ids");
    auto a = j.find("authors");
    if (a == j.end() || !a->is_array()) throw DataError("missing 'authors' array");
    for (const auto& ja : *a) {
        if (!ja.is_object()) throw DataError("author entry is not an object");
        RawAuthor ra;
        ra.author_id = req_string(ja, "author_id");
        auto af = ja.find("affiliations");
        if (af == ja.end() || !af->is_array())
            throw DataError("author '" + ra.author_id + "' lacks an 'affiliations' array");
        for (const auto& jf : *af) {
            if (!jf.is_object()) throw DataError("affiliation is not an object");
            RawAffiliation raff;
            raff.institution_id = opt_string(jf, "institution_id");
            raff.institution = opt_string(jf, "institution");
            raff.country = opt_string(jf, "country");
            ra.affiliations.push_back(std::move(raff));
        }
        r.authors.push_back(std::move(ra));
    }
    return r;
}

class Accumulator {
public:
    Accumulator(const InstitutionRegistry& registry, const IngestOptions& options)
        : registry_(registry), options_(options) {}

    void reject(std::size_t line, std::string reason, std::string raw) {
        ++report_.rejected;
        report_.rejects.push_back({line, std::move(reason), std::move(raw)});
    }

    void offer(RawRecord raw, std::size_t line, const std::string& text) {
        auto result = finish(std::move(raw), registry_);
        if (auto* reason = std::get_if<std::string>(&result)) {
            reject(line, *reason, text);
            return;
        }
        auto& rec = std::get<PublicationRecord>(result);
        if (!options_.doc_type_filter.count(rec.doc_type.name()) ||
            (options_.years && !options_.years->contains(rec.year))) {
            ++report_.filtered;
            return;
        }
        if (!ids_.insert(rec.record_id).second) {
            reject(line, "duplicate record_id '" + rec.record_id + "'", text);
            return;
        }
        for (const auto& a : rec.authors)
            for (const auto& f : a.affiliations)
                if (!f.resolved()) ++report_.unresolved_affiliations;
        ++report_.accepted;
        records_.push_back(std::move(rec));
    }

    IngestResult done() {
        return {Corpus(std::move(records_), registry_), std::move(report_)};
    }

private:
    const InstitutionRegistry& registry_;
    const IngestOptions& options_;
    IngestReport report_;
    std::vector<PublicationRecord> records_;
    std::unordered_set<std::string> ids_;
};

IngestResult ingest_jsonl(std::istream& in, const InstitutionRegistry& registry,
                          const IngestOptions& options) {
    Accumulator acc(registry, options);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        RawRecord raw;
        try {
            raw = raw_from_json(json::parse(line));
        } catch (const json::exception& e) {
            acc.reject(n, std::string("malformed JSON: ") + e.what(), line);
            continue;
        } catch (const DataError& e) {
            acc.reject(n, e.what(), line);
            continue;
        }
        acc.offer(std::move(raw), n, line);
    }
    return acc.done();
}

// ---------------------------------------------------------------------------
// CSV adapter: one row per (record, author, affiliation)

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find(';', start);
        if (end == std::string::npos) end = s.size();
        auto item = s.substr(start, end - start);
        auto b = item.find_first_not_of(' ');
        auto e = item.find_last_not_of(' ');
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
        start = end + 1;
    }
    return out;
}

int parse_int(const std::string& s, const char* what) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw DataError(std::string("non-integer ") + what + " '" + s + "'");
    return v;
}

struct CsvRecord {
    std::size_t first_line = 0;
    std::string raw_text;
    std::string record_id;
    int year = 0;
    std::string doc_type;
    std::string subjects;
    std::string corresponding;
    // author_pos -> (author_id, affil_pos -> affiliation)
    std::map<int, std::pair<std::string, std::map<int, RawAffiliation>>> authors;
    std::optional<std::string> error;
};

IngestResult ingest_csv(std::istream& in, const InstitutionRegistry& registry,
                        const IngestOptions& options) {
    Accumulator acc(registry, options);
    csv::Reader reader(in);
    auto header_row = reader.next();
    if (!header_row) return acc.done();

    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header_row->fields.size(); ++i) {
        std::string name = header_row->fields[i];
        if (!name.empty() && static_cast<unsigned char>(name[0]) == 0xEF && name.size() >= 3)
            name = name.substr(3);  // UTF-8 BOM
        col[normalize_name(name)] = i;
    }
    for (const char* required : {"record_id", "year", "doc_type", "author_id", "author_pos",
                                 "affil_pos"}) {
        if (!col.count(required))
            throw DataError(std::string("CSV header lacks required column '") + required + "'");
    }
    if (!col.count("institution") && !col.count("institution_id"))
        throw DataError("CSV header needs an 'institution' or 'institution_id' column");

    auto cell = [&](const csv::Row& row, const char* name) -> std::optional<std::string> {
        auto it = col.find(name);
        if (it == col.end() || it->second >= row.fields.size()) return std::nullopt;
        return row.fields[it->second];
    };

    std::vector<CsvRecord> order;
    std::unordered_map<std::string, std::size_t> where;
    while (auto row = reader.next()) {
        if (reader.last_malformed() || row->fields.size() != header_row->fields.size()) {
            // The record this row belongs to cannot be reassembled faithfully.
            auto id = cell(*row, "record_id");
            std::string reason = reader.last_malformed()
                                     ? "unterminated quoted field"
                                     : "expected " + std::to_string(header_row->fields.size()) +
                                           " columns, found " +
                                           std::to_string(row->fields.size());
            if (id && where.count(*id)) {
                auto& rec = order[where[*id]];
                if (!rec.error) rec.error = "line " + std::to_string(row->line_number) + ": " + reason;
            } else {
                acc.reject(row->line_number, reason, row->raw);
            }
            continue;
        }
        std::string id = *cell(*row, "record_id");
        auto [it, inserted] = where.emplace(id, order.size());
        if (inserted) {
            CsvRecord rec;
            rec.first_line = row->line_number;
            rec.record_id = id;
            rec.doc_type = *cell(*row, "doc_type");
            rec.subjects = cell(*row, "subject_categories").value_or("");
            rec.corresponding = cell(*row, "corresponding_author_ids").value_or("");
            try {
                rec.year = parse_int(*cell(*row, "year"), "year");
            } catch (const DataError& e) {
                rec.error = e.what();
            }
            order.push_back(std::move(rec));
        }
        auto& rec = order[it->second];
        if (!rec.raw_text.empty()) rec.raw_text += '\n';
        rec.raw_text += row->raw;
        if (rec.error) continue;
        try {
            if (*cell(*row, "doc_type") != rec.doc_type ||
                parse_int(*cell(*row, "year"), "year") != rec.year ||
                cell(*row, "subject_categories").value_or("") != rec.subjects ||
                cell(*row, "corresponding_author_ids").value_or("") != rec.corresponding)
                throw DataError("line " + std::to_string(row->line_number) +
                                ": record-level fields disagree across rows");
            int apos = parse_int(*cell(*row, "author_pos"), "author_pos");
            int fpos = parse_int(*cell(*row, "affil_pos"), "affil_pos");
            auto& author = rec.authors[apos];
            std::string author_id = *cell(*row, "author_id");
            if (!author.first.empty() && author.first != author_id)
                throw DataError("line " + std::to_string(row->line_number) + ": author_pos " +
                                std::to_string(apos) + " has two author ids");
            author.first = author_id;
            RawAffiliation aff;
            if (auto v = cell(*row, "institution_id"); v && !v->empty()) aff.institution_id = v;
            if (auto v = cell(*row, "institution"); v && !v->empty()) aff.institution = v;
            if (auto v = cell(*row, "country"); v && !v->empty()) aff.country = v;
            if (!author.second.emplace(fpos, std::move(aff)).second)
                throw DataError("line " + std::to_string(row->line_number) + ": duplicate affil_pos " +
                                std::to_string(fpos) + " for author_pos " + std::to_string(apos));
        } catch (const DataError& e) {
            rec.error = e.what();
        }
    }

    for (auto& rec : order) {
        if (!rec.error) {
            // positions must run 1..n without gaps
            int expect = 1;
            for (const auto& [apos, author] : rec.authors) {
                if (apos != expect++) {
                    rec.error = "author_pos values are not contiguous from 1";
                    break;
                }
                int fexpect = 1;
                for (const auto& [fpos, aff] : author.second) {
                    (void)aff;
                    if (fpos != fexpect++) {
                        rec.error = "affil_pos values are not contiguous from 1";
                        break;
                    }
                }
                if (rec.error) break;
            }
        }
        if (rec.error) {
            acc.reject(rec.first_line, *rec.error, rec.raw_text);
            continue;
        }
        RawRecord raw;
        raw.record_id = rec.record_id;
        raw.year = rec.year;
        raw.doc_type = rec.doc_type;
        raw.subject_categories = split_list(rec.subjects);
        raw.corresponding_author_ids = split_list(rec.corresponding);
        for (auto& [apos, author] : rec.authors) {
            RawAuthor ra;
            ra.author_id = author.first;
            for (auto& [fpos, aff] : author.second) ra.affiliations.push_back(std::move(aff));
            raw.authors.push_back(std::move(ra));
        }
        acc.offer(std::move(raw), rec.first_line, rec.raw_text);
    }
    return acc.done();
}

}  // namespace

IngestResult ingest(std::istream& in, const InstitutionRegistry& registry,
                    const IngestOptions& options) {
    if (options.format == InputFormat::csv) return ingest_csv(in, registry, options);
    return ingest_jsonl(in, registry, options);
}

IngestResult ingest_text(std::string_view text, const InstitutionRegistry& registry,
                         const IngestOptions& options) {
    std::istringstream in{std::string(text)};
    return ingest(in, registry, options);
}

IngestResult ingest_file(const std::filesystem::path& path, const InstitutionRegistry& registry,
                         const IngestOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open record file: " + path.string());
    IngestOptions opts = options;
    if (opts.format == InputFormat::automatic)
        opts.format = path.extension() == ".csv" ? InputFormat::csv : InputFormat::jsonl;
    return ingest(in, registry, opts);
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize_record(const PublicationRecord& r) {
    ojson j;
    j["record_id"] = r.record_id;
    j["year"] = r.year;
    j["doc_type"] = r.doc_type.name();
    j["subject_categories"] = r.subject_categories;
    ojson authors = ojson::array();
    for (const auto& a : r.authors) {
        ojson ja;
        ja["author_id"] = a.author_id;
        ojson affs = ojson::array();
        for (const auto& f : a.affiliations) {
            ojson jf;
            if (f.resolved())
                jf["institution_id"] = f.institution_id;
            else
                jf["institution"] = f.raw;
            jf["country"] = f.country;
            affs.push_back(std::move(jf));
        }
        ja["affiliations"] = std::move(affs);
        authors.push_back(std::move(ja));
    }
    j["authors"] = std::move(authors);
    j["corresponding_author_ids"] = r.corresponding_author_ids;
    return j.dump();
}

std::string serialize(const Corpus& corpus) {
    std::string out;
    for (const auto& r : corpus.records()) {
        out += serialize_record(r);
        out += '\n';
    }
    return out;
}

std::string IngestReport::to_json() const {
    ojson j;
    j["accepted"] = accepted;
    j["filtered"] = filtered;
    j["rejected"] = rejected;
    j["unresolved_affiliations"] = unresolved_affiliations;
    return j.dump();
}

std::string IngestReport::rejects_jsonl() const {
    std::string out;
    for (const auto& r : rejects) {
        ojson j;
        j["line_number"] = r.line_number;
        j["reason"] = r.reason;
        j["raw"] = r.raw;
        out += j.dump(-1, ' ', false, json::error_handler_t::replace);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Registry file

namespace {

Institution institution_from_json(const json& j) {
    if (!j.is_object()) throw DataError("registry entry is not an object");
    Institution inst;
    inst.id = req_string(j, "institution_id");
    inst.canonical_name = req_string(j, "canonical_name");
    inst.country = upper(req_string(j, "country"));
    inst.aliases = string_list(j, "aliases");
    return inst;
}

}  // namespace

InstitutionRegistry InstitutionRegistry::parse(std::string_view text) {
    std::vector<Institution> entries;
    auto first = text.find_first_not_of(" \t\r\n");
    try {
        if (first != std::string_view::npos && text[first] == '[') {
            auto j = json::parse(text);
            for (const auto& e : j) entries.push_back(institution_from_json(e));
        } else {
            std::istringstream in{std::string(text)};
            std::string line;
            std::size_t n = 0;
            while (std::getline(in, line)) {
                ++n;
                if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
                try {
                    entries.push_back(institution_from_json(json::parse(line)));
                } catch (const std::exception& e) {
                    throw DataError("registry line " + std::to_string(n) + ": " + e.what());
                }
            }
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed registry: ") + e.what());
    }
    return from_entries(std::move(entries));
}

InstitutionRegistry InstitutionRegistry::load_file(const std::filesystem::path& path) {
    return parse(io::read_file(path));
}

std::string InstitutionRegistry::to_json() const {
    ojson arr = ojson::array();
    for (const auto& e : entries_) {
        ojson j;
        j["institution_id"] = e.id;
        j["canonical_name"] = e.canonical_name;
        j["country"] = e.country;
        j["aliases"] = e.aliases;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

}  // namespace bibscreen
