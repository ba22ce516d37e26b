#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bibscreen {

/// True for officially assigned ISO 3166-1 alpha-2 codes (upper case).
bool is_country_code(std::string_view code);

enum class DocKind { article, review, other };

struct DocType {
    DocKind kind = DocKind::article;
    std::string other_name;  // lower-cased raw type when kind == other

    /// Lower-cases and trims; unknown strings become other(raw).
    static DocType parse(std::string_view raw);
    std::string name() const;

    bool operator==(const DocType&) const = default;
};

struct AffiliationRef {
    std::string institution_id;  // empty when unresolved
    std::string raw;             // input string that did not resolve
    std::string country;         // ISO 3166-1 alpha-2

    bool resolved() const noexcept { return !institution_id.empty(); }
    bool operator==(const AffiliationRef&) const = default;
};

struct AuthorEntry {
    std::string author_id;
    std::vector<AffiliationRef> affiliations;  // front() is the primary affiliation

    bool lists(std::string_view institution) const noexcept;
    /// Listed at a position other than the first.
    bool lists_as_secondary(std::string_view institution) const noexcept;

    bool operator==(const AuthorEntry&) const = default;
};

struct PublicationRecord {
    std::string record_id;
    int year = 0;
    DocType doc_type;
    std::vector<AuthorEntry> authors;  // front() is the first author
    std::vector<std::string> subject_categories;        // sorted, unique
    std::vector<std::string> corresponding_author_ids;  // sorted, unique

    bool involves(std::string_view institution) const noexcept;
    bool has_category(std::string_view category) const noexcept;
    /// Resolved institutions over all authors and positions, sorted and unique.
    std::vector<std::string> institutions() const;
    /// Countries over all affiliations (resolved or not), sorted and unique.
    std::vector<std::string> countries() const;

    bool operator==(const PublicationRecord&) const = default;
};

struct Institution {
    std::string id;
    std::string canonical_name;
    std::string country;
    std::vector<std::string> aliases;

    bool operator==(const Institution&) const = default;
};

/// Lower-case ASCII, trim, and collapse inner whitespace runs to one space.
std::string normalize_name(std::string_view raw);

class InstitutionRegistry {
public:
    InstitutionRegistry() = default;

    /// Throws DataError when ids or canonical names repeat, when alias sets
    /// overlap, or when a country code is invalid.
    static InstitutionRegistry from_entries(std::vector<Institution> entries);
    /// Accepts a JSON array of objects or one object per line.
    static InstitutionRegistry parse(std::string_view text);
    static InstitutionRegistry load_file(const std::filesystem::path& path);

    const Institution* find(std::string_view id) const;
    bool contains(std::string_view id) const { return find(id) != nullptr; }

    /// Canonical names first, then aliases; both compared after normalize_name.
    std::optional<std::string> resolve(std::string_view raw) const;

    /// Entries sorted by id.
    const std::vector<Institution>& entries() const noexcept { return entries_; }

    std::string to_json() const;

    bool operator==(const InstitutionRegistry& o) const { return entries_ == o.entries_; }

private:
    std::vector<Institution> entries_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::unordered_map<std::string, std::size_t> by_canonical_;
    std::unordered_map<std::string, std::size_t> by_alias_;
};

/// Free-function form used by ingestion; nullopt means unresolved.
std::optional<std::string> resolve_affiliation(std::string_view raw,
                                               const InstitutionRegistry& registry);

struct YearRange {
    int first = 0;
    int last = 0;

    bool contains(int year) const noexcept { return year >= first && year <= last; }
    bool empty() const noexcept { return first > last; }
    bool operator==(const YearRange&) const = default;
};

using RecordIndex = std::map<std::string, std::vector<std::size_t>, std::less<>>;

/// Validated records plus the institution and author indexes derived from them.
/// Immutable once constructed; index values are positions into records(),
/// ascending.
class Corpus {
public:
    Corpus() = default;
    Corpus(std::vector<PublicationRecord> records, InstitutionRegistry registry);

    /// Adopts externally supplied indexes without rebuilding them. Used to
    /// load precomputed artifacts; validate() reports any inconsistency.
    static Corpus with_indexes(std::vector<PublicationRecord> records, InstitutionRegistry registry,
                               RecordIndex by_institution, RecordIndex by_author);

    const std::vector<PublicationRecord>& records() const noexcept { return records_; }
    const PublicationRecord& record(std::size_t i) const { return records_.at(i); }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    const InstitutionRegistry& registry() const noexcept { return registry_; }

    const RecordIndex& by_institution() const noexcept { return by_institution_; }
    const RecordIndex& by_author() const noexcept { return by_author_; }

    /// Empty span for institutions without records.
    std::span<const std::size_t> records_of_institution(std::string_view id) const;
    std::span<const std::size_t> records_of_author(std::string_view id) const;

    /// Ids of records that list the institution (index order).
    std::vector<std::string> record_ids_of_institution(std::string_view id) const;

    std::optional<YearRange> year_range() const noexcept { return year_range_; }

    /// Throws UnknownIdError when the id is not in the registry.
    void require_institution(std::string_view id) const;

    bool operator==(const Corpus& o) const;

private:
    std::vector<PublicationRecord> records_;
    InstitutionRegistry registry_;
    RecordIndex by_institution_;
    RecordIndex by_author_;
    std::optional<YearRange> year_range_;
};

/// Full-scan construction of both indexes for `records`.
void build_indexes(const std::vector<PublicationRecord>& records, RecordIndex& by_institution,
                   RecordIndex& by_author);

// ---------------------------------------------------------------------------
// Ingestion

enum class InputFormat { automatic, jsonl, csv };

struct IngestOptions {
    std::set<std::string> doc_type_filter{"article", "review"};  // DocType::name() values
    std::optional<YearRange> years;
    InputFormat format = InputFormat::automatic;
};

struct Reject {
    std::size_t line_number = 0;
    std::string reason;
    std::string raw;
};

struct IngestReport {
    std::size_t accepted = 0;
    std::size_t filtered = 0;
    std::size_t rejected = 0;
    std::size_t unresolved_affiliations = 0;
    std::vector<Reject> rejects;

    std::string to_json() const;
    /// One {line_number, reason, raw} object per line.
    std::string rejects_jsonl() const;
};

struct IngestResult {
    Corpus corpus;
    IngestReport report;
};

IngestResult ingest(std::istream& in, const InstitutionRegistry& registry,
                    const IngestOptions& options = {});
IngestResult ingest_text(std::string_view text, const InstitutionRegistry& registry,
                         const IngestOptions& options = {});
/// `.csv` files use the CSV adapter unless options.format says otherwise.
IngestResult ingest_file(const std::filesystem::path& path, const InstitutionRegistry& registry,
                         const IngestOptions& options = {});

/// Canonical line-delimited form; ingesting it again with the same registry
/// reproduces the corpus exactly.
std::string serialize(const Corpus& corpus);
std::string serialize_record(const PublicationRecord& record);

// ---------------------------------------------------------------------------
// Validation

enum class FindingKind {
    duplicate_record_id,
    empty_authors,
    empty_affiliations,
    duplicate_affiliation,
    duplicate_author,
    dangling_corresponding_author,
    unknown_institution,
    invalid_country,
    dangling_index_entry,
    missing_index_entry,
};

std::string_view finding_kind_name(FindingKind kind);

struct Finding {
    FindingKind kind;
    std::string subject;  // record id, institution id or author id
    std::string detail;
};

struct ValidationReport {
    std::vector<Finding> findings;
    bool clean() const noexcept { return findings.empty(); }
    std::size_t count(FindingKind kind) const;
};

ValidationReport validate(const Corpus& corpus);

}  // namespace bibscreen
