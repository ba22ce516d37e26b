#include "bibscreen/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "bibscreen/error.hpp"

namespace bibscreen {

namespace {

std::string lower_trim(std::string_view raw) {
    std::size_t b = 0;
    std::size_t e = raw.size();
    while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
    std::string out;
    out.reserve(e - b);
    for (std::size_t i = b; i < e; ++i)
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(raw[i])));
    return out;
}

}  // namespace

DocType DocType::parse(std::string_view raw) {
    std::string norm = normalize_name(raw);
    if (norm == "article") return {DocKind::article, {}};
    if (norm == "review") return {DocKind::review, {}};
    return {DocKind::other, std::move(norm)};
}

std::string DocType::name() const {
    switch (kind) {
        case DocKind::article: return "article";
        case DocKind::review: return "review";
        case DocKind::other: return other_name;
    }
    return other_name;
}

bool AuthorEntry::lists(std::string_view institution) const noexcept {
    for (const auto& a : affiliations)
        if (a.institution_id == institution) return true;
    return false;
}

bool AuthorEntry::lists_as_secondary(std::string_view institution) const noexcept {
    for (std::size_t i = 1; i < affiliations.size(); ++i)
        if (affiliations[i].institution_id == institution) return true;
    return false;
}

bool PublicationRecord::involves(std::string_view institution) const noexcept {
    for (const auto& a : authors)
        if (a.lists(institution)) return true;
    return false;
}

bool PublicationRecord::has_category(std::string_view category) const noexcept {
    return std::binary_search(subject_categories.begin(), subject_categories.end(), category);
}

std::vector<std::string> PublicationRecord::institutions() const {
    std::vector<std::string> out;
    for (const auto& a : authors)
        for (const auto& f : a.affiliations)
            if (f.resolved()) out.push_back(f.institution_id);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::string> PublicationRecord::countries() const {
    std::vector<std::string> out;
    for (const auto& a : authors)
        for (const auto& f : a.affiliations) out.push_back(f.country);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string normalize_name(std::string_view raw) {
    std::string lowered = lower_trim(raw);
    std::string out;
    out.reserve(lowered.size());
    bool in_space = false;
    for (char c : lowered) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out += ' ';
        in_space = false;
        out += c;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Registry

InstitutionRegistry InstitutionRegistry::from_entries(std::vector<Institution> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Institution& a, const Institution& b) { return a.id < b.id; });
    InstitutionRegistry reg;
    std::vector<std::string> problems;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto& e = entries[i];
        if (e.id.empty()) problems.push_back("entry with empty institution_id");
        if (!reg.by_id_.emplace(e.id, i).second)
            problems.push_back("duplicate institution_id '" + e.id + "'");
        if (!is_country_code(e.country))
            problems.push_back("invalid country '" + e.country + "' for '" + e.id + "'");
        auto canon = normalize_name(e.canonical_name);
        if (canon.empty()) problems.push_back("empty canonical_name for '" + e.id + "'");
        if (!reg.by_canonical_.emplace(canon, i).second)
            problems.push_back("duplicate canonical_name '" + e.canonical_name + "'");
        std::sort(e.aliases.begin(), e.aliases.end());
        e.aliases.erase(std::unique(e.aliases.begin(), e.aliases.end()), e.aliases.end());
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        for (const auto& alias : entries[i].aliases) {
            auto norm = normalize_name(alias);
            auto [it, inserted] = reg.by_alias_.emplace(norm, i);
            if (!inserted && it->second != i)
                problems.push_back("alias '" + alias + "' shared by '" + entries[it->second].id +
                                   "' and '" + entries[i].id + "'");
            auto canon = reg.by_canonical_.find(norm);
            if (canon != reg.by_canonical_.end() && canon->second != i)
                problems.push_back("alias '" + alias + "' of '" + entries[i].id +
                                   "' equals the canonical name of '" +
                                   entries[canon->second].id + "'");
        }
    }
    if (!problems.empty()) {
        std::string msg = "malformed registry";
        for (const auto& p : problems) msg += "; " + p;
        throw DataError(msg);
    }
    reg.entries_ = std::move(entries);
    return reg;
}

const Institution* InstitutionRegistry::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &entries_[it->second];
}

std::optional<std::string> InstitutionRegistry::resolve(std::string_view raw) const {
    auto norm = normalize_name(raw);
    if (norm.empty()) return std::nullopt;
    if (auto it = by_canonical_.find(norm); it != by_canonical_.end())
        return entries_[it->second].id;
    if (auto it = by_alias_.find(norm); it != by_alias_.end()) return entries_[it->second].id;
    return std::nullopt;
}

std::optional<std::string> resolve_affiliation(std::string_view raw,
                                               const InstitutionRegistry& registry) {
    return registry.resolve(raw);
}

// ---------------------------------------------------------------------------
// Corpus

void build_indexes(const std::vector<PublicationRecord>& records, RecordIndex& by_institution,
                   RecordIndex& by_author) {
    by_institution.clear();
    by_author.clear();
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        for (const auto& inst : r.institutions()) by_institution[inst].push_back(i);
        for (const auto& a : r.authors) {
            auto& list = by_author[a.author_id];
            if (list.empty() || list.back() != i) list.push_back(i);
        }
    }
}

namespace {

std::optional<YearRange> compute_year_range(const std::vector<PublicationRecord>& records) {
    if (records.empty()) return std::nullopt;
    YearRange yr{records.front().year, records.front().year};
    for (const auto& r : records) {
        yr.first = std::min(yr.first, r.year);
        yr.last = std::max(yr.last, r.year);
    }
    return yr;
}

}  // namespace

Corpus::Corpus(std::vector<PublicationRecord> records, InstitutionRegistry registry)
    : records_(std::move(records)), registry_(std::move(registry)) {
    build_indexes(records_, by_institution_, by_author_);
    year_range_ = compute_year_range(records_);
}

Corpus Corpus::with_indexes(std::vector<PublicationRecord> records, InstitutionRegistry registry,
                            RecordIndex by_institution, RecordIndex by_author) {
    Corpus c;
    c.records_ = std::move(records);
    c.registry_ = std::move(registry);
    c.by_institution_ = std::move(by_institution);
    c.by_author_ = std::move(by_author);
    c.year_range_ = compute_year_range(c.records_);
    return c;
}

std::span<const std::size_t> Corpus::records_of_institution(std::string_view id) const {
    auto it = by_institution_.find(id);
    if (it == by_institution_.end()) return {};
    return it->second;
}

std::span<const std::size_t> Corpus::records_of_author(std::string_view id) const {
    auto it = by_author_.find(id);
    if (it == by_author_.end()) return {};
    return it->second;
}

std::vector<std::string> Corpus::record_ids_of_institution(std::string_view id) const {
    std::vector<std::string> out;
    for (auto i : records_of_institution(id)) out.push_back(records_[i].record_id);
    return out;
}

void Corpus::require_institution(std::string_view id) const {
    if (!registry_.contains(id)) throw UnknownIdError("institution", std::string(id));
}

bool Corpus::operator==(const Corpus& o) const {
    return records_ == o.records_ && registry_ == o.registry_ &&
           by_institution_ == o.by_institution_ && by_author_ == o.by_author_;
}

// ---------------------------------------------------------------------------
// Validation

std::string_view finding_kind_name(FindingKind kind) {
    switch (kind) {
        case FindingKind::duplicate_record_id: return "duplicate_record_id";
        case FindingKind::empty_authors: return "empty_authors";
        case FindingKind::empty_affiliations: return "empty_affiliations";
        case FindingKind::duplicate_affiliation: return "duplicate_affiliation";
        case FindingKind::duplicate_author: return "duplicate_author";
        case FindingKind::dangling_corresponding_author: return "dangling_corresponding_author";
        case FindingKind::unknown_institution: return "unknown_institution";
        case FindingKind::invalid_country: return "invalid_country";
        case FindingKind::dangling_index_entry: return "dangling_index_entry";
        case FindingKind::missing_index_entry: return "missing_index_entry";
    }
    return "unknown";
}

std::size_t ValidationReport::count(FindingKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        findings.begin(), findings.end(), [kind](const Finding& f) { return f.kind == kind; }));
}

ValidationReport validate(const Corpus& corpus) {
    ValidationReport report;
    auto add = [&](FindingKind k, std::string subject, std::string detail) {
        report.findings.push_back({k, std::move(subject), std::move(detail)});
    };

    std::map<std::string, std::size_t> seen_ids;
    for (const auto& r : corpus.records()) {
        if (++seen_ids[r.record_id] == 2)
            add(FindingKind::duplicate_record_id, r.record_id, "record_id appears more than once");
        if (r.authors.empty()) add(FindingKind::empty_authors, r.record_id, "no authors");

        std::set<std::string> author_ids;
        for (const auto& a : r.authors) {
            if (!author_ids.insert(a.author_id).second)
                add(FindingKind::duplicate_author, r.record_id,
                    "author '" + a.author_id + "' listed twice");
            if (a.affiliations.empty())
                add(FindingKind::empty_affiliations, r.record_id,
                    "author '" + a.author_id + "' has no affiliations");
            std::set<std::string> insts;
            for (const auto& f : a.affiliations) {
                if (f.resolved()) {
                    if (!insts.insert(f.institution_id).second)
                        add(FindingKind::duplicate_affiliation, r.record_id,
                            "author '" + a.author_id + "' lists '" + f.institution_id +
                                "' twice");
                    if (!corpus.registry().contains(f.institution_id))
                        add(FindingKind::unknown_institution, r.record_id,
                            "institution '" + f.institution_id + "' not in registry");
                }
                if (!is_country_code(f.country))
                    add(FindingKind::invalid_country, r.record_id,
                        "country '" + f.country + "' is not an ISO 3166-1 alpha-2 code");
            }
        }
        for (const auto& c : r.corresponding_author_ids)
            if (!author_ids.count(c))
                add(FindingKind::dangling_corresponding_author, r.record_id,
                    "corresponding author '" + c + "' is not among the authors");
    }

    RecordIndex expect_inst;
    RecordIndex expect_author;
    build_indexes(corpus.records(), expect_inst, expect_author);
    auto compare = [&](const RecordIndex& actual, const RecordIndex& expected,
                       const std::string& what) {
        for (const auto& [key, list] : actual) {
            auto it = expected.find(key);
            for (auto idx : list) {
                bool ok = it != expected.end() &&
                          std::binary_search(it->second.begin(), it->second.end(), idx);
                if (!ok)
                    add(FindingKind::dangling_index_entry, key,
                        what + " index points at record position " + std::to_string(idx));
            }
        }
        for (const auto& [key, list] : expected) {
            auto it = actual.find(key);
            for (auto idx : list) {
                bool ok = it != actual.end() &&
                          std::find(it->second.begin(), it->second.end(), idx) !=
                              it->second.end();
                if (!ok)
                    add(FindingKind::missing_index_entry, key,
                        what + " index lacks record position " + std::to_string(idx));
            }
        }
    };
    compare(corpus.by_institution(), expect_inst, "institution");
    compare(corpus.by_author(), expect_author, "author");
    return report;
}

}  // namespace bibscreen
