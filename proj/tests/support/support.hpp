#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bibscreen/corpus.hpp"
#include "bibscreen/synth.hpp"

namespace bibscreen::testing {

/// Hand-built corpora for unit tests. An affiliation token is an institution
/// id, or "@CC" for an unresolved affiliation in country CC.
class TinyCorpus {
public:
    TinyCorpus& inst(const std::string& id, const std::string& country);
    TinyCorpus& rec(const std::string& id, int year,
                    const std::vector<std::pair<std::string, std::vector<std::string>>>& authors,
                    const std::vector<std::string>& categories = {}, const std::string& doc_type = "article");

    InstitutionRegistry registry() const;
    std::vector<PublicationRecord> records() const { return records_; }
    Corpus build() const;

private:
    std::vector<Institution> insts_;
    std::vector<PublicationRecord> records_;
};

/// A small random universe (a few hundred records) with a random mix of
/// plants, for property batches.
synth::GeneratorSpec random_spec(std::uint64_t seed, int max_institutions = 8, std::int64_t max_base = 30);

/// A random spec whose generated corpus stays at or below `max_records`.
synth::GeneratorSpec bounded_spec(std::uint64_t seed, std::int64_t max_records);

struct Outcome {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::string first_failure;

    bool ok() const { return cases > 0 && failures == 0; }
};

/// Library table versus the full-scan oracle on one generated corpus.
/// Returns an empty string on equality, else the first differing line.
std::string oracle_mismatch(const synth::GeneratorSpec& spec, std::size_t* records = nullptr);

struct Recovery {
    bool funnel_exact = false;
    bool detectors_exact = false;
    std::string detail;
};

/// Planted-universe seed run: funnel flags versus planted surges, and each
/// detector's flagged authors versus the constructive plants.
Recovery planted_recovery(std::uint64_t seed);

/// The property batches, each run over `cases` generated inputs.
std::vector<Outcome> property_batches(int cases = 200);

}  // namespace bibscreen::testing
