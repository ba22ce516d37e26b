#include "bibscreen/metrics_table.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include <json.hpp>

#include "bibscreen/csv.hpp"
#include "bibscreen/indicators.hpp"

namespace bibscreen {

namespace {

using indicators::Direction;

struct Keyed {
    std::tuple<std::string, int, std::string, int> key;
    IndicatorRow row;
};

enum Order {
    kOutput,
    kGrowth,
    kFirstAuthor,
    kAuthorsPerArticle,
    kIntlCollab,
    kMultiAffiliation,
    kHyperprolific,
    kExternal,
    kSubject,
};

using Reporter = std::string (*)(const std::optional<Rational>&);

std::string report_count(const std::optional<Rational>& v) {
    return v ? v->to_string() : "n/a";
}

void emit_ranked(std::vector<Keyed>& out, const std::vector<std::string>& ids,
                 const std::vector<std::optional<Rational>>& values, int order,
                 const std::string& metric, const std::string& category, int year,
                 Reporter report) {
    std::vector<std::pair<std::string, std::optional<Rational>>> pairs;
    for (std::size_t i = 0; i < ids.size(); ++i) pairs.emplace_back(ids[i], values[i]);
    auto ranking = indicators::competition_rank(std::move(pairs), Direction::descending);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        IndicatorRow row;
        row.institution_id = ids[i];
        row.metric = metric;
        row.year = year;
        row.value_raw = indicators::report_raw(values[i]);
        row.value_reported = report(values[i]);
        row.rank = ranking.rank_of(ids[i]);
        out.push_back({{ids[i], order, category, year}, std::move(row)});
    }
}

}  // namespace

std::vector<IndicatorRow> indicator_table(const Corpus& corpus, const TableOptions& options) {
    std::vector<IndicatorRow> rows;
    auto range = corpus.year_range();
    if (!range) return rows;

    std::vector<std::string> ids;
    for (const auto& [id, positions] : corpus.by_institution()) ids.push_back(id);
    std::set<std::string> categories;
    for (const auto& r : corpus.records())
        categories.insert(r.subject_categories.begin(), r.subject_categories.end());

    std::vector<Keyed> out;
    const std::size_t n = ids.size();
    std::vector<std::optional<Rational>> values(n);
    std::map<std::string, std::vector<std::int64_t>> outputs;  // id -> per-year counts
    for (const auto& id : ids)
        for (int y = range->first; y <= range->last; ++y)
            outputs[id].push_back(indicators::output_count(corpus, id, y));

    for (int y = range->first; y <= range->last; ++y) {
        const auto yi = static_cast<std::size_t>(y - range->first);
        for (std::size_t i = 0; i < n; ++i) values[i] = Rational(outputs[ids[i]][yi]);
        emit_ranked(out, ids, values, kOutput, "output_count", "", y, report_count);

        if (y > range->first) {
            for (std::size_t i = 0; i < n; ++i)
                values[i] = indicators::growth_pct(outputs[ids[i]][0], outputs[ids[i]][yi]);
            emit_ranked(out, ids, values, kGrowth, "growth_pct", "", y,
                        indicators::report_percent);
        }

        for (std::size_t i = 0; i < n; ++i)
            values[i] = indicators::first_author_pct(corpus, ids[i], y);
        emit_ranked(out, ids, values, kFirstAuthor, "first_author_pct", "", y,
                    indicators::report_percent);

        for (std::size_t i = 0; i < n; ++i)
            values[i] = indicators::authors_per_article(corpus, ids[i], y);
        emit_ranked(out, ids, values, kAuthorsPerArticle, "authors_per_article", "", y,
                    indicators::report_decimal);

        for (std::size_t i = 0; i < n; ++i)
            values[i] = indicators::intl_collab_pct(corpus, ids[i], y);
        emit_ranked(out, ids, values, kIntlCollab, "intl_collab_pct", "", y,
                    indicators::report_percent);

        for (std::size_t i = 0; i < n; ++i)
            values[i] = indicators::multi_affiliation_pct(corpus, ids[i], y);
        emit_ranked(out, ids, values, kMultiAffiliation, "multi_affiliation_pct", "", y,
                    indicators::report_percent);

        for (const auto& id : ids) {
            auto hp = static_cast<std::int64_t>(
                authorship::hyperprolific_authors(corpus, id, y, options.hyperprolific).size());
            auto ext = static_cast<std::int64_t>(
                authorship::external_authors(corpus, id, options.external_min_pubs, y).size());
            IndicatorRow a{id, "hyperprolific_count", y, std::to_string(hp), std::to_string(hp),
                           std::nullopt};
            IndicatorRow b{id, "external_author_count", y, std::to_string(ext),
                           std::to_string(ext), std::nullopt};
            out.push_back({{id, kHyperprolific, "", y}, std::move(a)});
            out.push_back({{id, kExternal, "", y}, std::move(b)});
        }

        for (const auto& cat : categories) {
            std::vector<std::string> present;
            std::vector<std::optional<Rational>> counts;
            for (const auto& id : ids) {
                auto c = indicators::subject_output_count(corpus, id, cat, y);
                if (c == 0) continue;
                present.push_back(id);
                counts.emplace_back(Rational(c));
            }
            emit_ranked(out, present, counts, kSubject, "subject_output_count:" + cat, cat, y,
                        report_count);
        }
    }

    std::sort(out.begin(), out.end(),
              [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
    rows.reserve(out.size());
    for (auto& k : out) rows.push_back(std::move(k.row));
    return rows;
}

std::string indicator_table_csv(const std::vector<IndicatorRow>& rows) {
    std::string out = "institution_id,metric,year,value_raw,value_reported,rank\n";
    for (const auto& r : rows) {
        out += csv::join_row({r.institution_id, r.metric, std::to_string(r.year), r.value_raw,
                              r.value_reported, r.rank ? std::to_string(*r.rank) : ""});
        out += '\n';
    }
    return out;
}

std::string indicator_table_jsonl(const std::vector<IndicatorRow>& rows) {
    std::string out;
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["institution_id"] = r.institution_id;
        j["metric"] = r.metric;
        j["year"] = r.year;
        j["value_raw"] = r.value_raw;
        j["value_reported"] = r.value_reported;
        if (r.rank)
            j["rank"] = *r.rank;
        else
            j["rank"] = nullptr;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace bibscreen
