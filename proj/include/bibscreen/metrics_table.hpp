#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bibscreen/authorship.hpp"
#include "bibscreen/corpus.hpp"

namespace bibscreen {

/// One cell of the exported indicator table.
struct IndicatorRow {
    std::string institution_id;
    std::string metric;  // "subject_output_count:<category>" for subject rows
    int year = 0;
    std::string value_raw;       // "p", "p/q" or "n/a"
    std::string value_reported;  // rounded for display
    std::optional<int> rank;

    bool operator==(const IndicatorRow&) const = default;
};

struct TableOptions {
    authorship::HyperprolificOptions hyperprolific;
    std::int64_t external_min_pubs = 2;
};

/// Every indicator for every institution with records, over the corpus year
/// range. Rows are ordered by institution, metric, category and year. Ranks
/// are competition ranks (descending) among institutions with data for the
/// same metric and year; hyperprolific and external-author counts carry no
/// rank. Growth rows start one year after the first corpus year and measure
/// change from that first year. Subject rows appear only for non-zero counts.
std::vector<IndicatorRow> indicator_table(const Corpus& corpus, const TableOptions& options = {});

std::string indicator_table_csv(const std::vector<IndicatorRow>& rows);
std::string indicator_table_jsonl(const std::vector<IndicatorRow>& rows);

}  // namespace bibscreen
