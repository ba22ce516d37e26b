#include <json.hpp>

#include "bibscreen/error.hpp"
#include "bibscreen/synth.hpp"

namespace bibscreen::synth {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::nullopt_t kOver2000 = std::nullopt;

PaperFixtures build() {
    PaperFixtures f;
    // SciVal (June 2024). Ranks above 2000 are published as "2000+".
    f.output = {
        {"fue", "Future University in Egypt", "EG", true, 127, 1373, 981, kOver2000, 986},
        {"chandigarh", "Chandigarh University", "IN", true, 362, 2327, 543, kOver2000, 583},
        {"gla", "GLA University", "IN", true, 259, 1572, 507, kOver2000, 870},
        {"lpu", "Lovely Professional University", "IN", true, 838, 2302, 175, 1152, 593},
        {"upes", "University of Petroleum and Energy Studies", "IN", true, 308, 1569, 411, kOver2000, 871},
        {"al_mustaqbal", "Al-Mustaqbal University", "IQ", true, 91, 1432, 1474, kOver2000, 947},
        {"lau", "Lebanese American University", "LB", true, 315, 2637, 737, kOver2000, 500},
        {"imsiu", "Al-Imam Mohammad Ibn Saud Islamic University", "SA", true, 364, 1588, 336, kOver2000, 865},
        {"kku", "King Khalid University", "SA", true, 1327, 5158, 289, 778, 199},
        {"ksu", "King Saud University", "SA", true, 4490, 11962, 166, 175, 29},
        {"psau", "Prince Sattam Bin Abdulaziz University", "SA", true, 750, 4388, 485, 1254, 255},
        {"pnu", "Princess Nourah Bint Abdulrahman University", "SA", true, 471, 4468, 849, 1749, 250},
        {"taif_u", "Taif University", "SA", true, 513, 2377, 363, 1662, 567},
        {"uqu", "Umm Al-Qura University", "SA", true, 589, 3072, 422, 1508, 419},
        {"tabuk", "University of Tabuk", "SA", true, 414, 1389, 236, kOver2000, 969},
        {"uos", "University of Sharjah", "AE", true, 758, 2465, 225, 1238, 541},
        {"cityu", "City University of Hong Kong", "HK", false, 3450, 5481, 59, 275, 181},
        {"epfl", "Swiss Federal Institute of Technology Lausanne", "CH", false, 3495, 3472, -1, 269, 369},
        {"caltech", "California Institute of Technology", "US", false, 3634, 3719, 2, 258, 341},
        {"cmu", "Carnegie Mellon University", "US", false, 2266, 2299, 1, 465, 589},
        {"princeton", "Princeton University", "US", false, 3595, 3819, 6, 266, 325},
        {"rice", "Rice University", "US", false, 1765, 1851, 5, 605, 747},
        {"ucsb", "University of California, Santa Barbara", "US", false, 3263, 2999, -8, 299, 430},
    };
    // InCites (June 2024).
    f.first_author = {
        {"al_mustaqbal", 35, 11, 998, 999}, {"chandigarh", 60, 26, 308, 994},
        {"fue", 44, 10, 879, 1000},         {"gla", 72, 35, 77, 977},
        {"imsiu", 51, 34, 677, 984},        {"kku", 48, 18, 807, 997},
        {"ksu", 48, 29, 815, 990},          {"lau", 55, 17, 448, 998},
        {"lpu", 65, 50, 197, 495},          {"psau", 50, 28, 749, 992},
        {"pnu", 44, 27, 953, 993},          {"taif_u", 55, 24, 461, 996},
        {"uqu", 47, 33, 887, 986},          {"upes", 60, 32, 301, 987},
        {"uos", 49, 35, 770, 975},          {"tabuk", 52, 35, 604, 982},
        {"caltech", 43, 37, 972, 965},      {"cmu", 51, 47, 632, 634},
        {"cityu", 45, 39, 932, 939},        {"epfl", 55, 50, 452, 516},
        {"princeton", 52, 48, 599, 583},    {"rice", 51, 44, 650, 783},
        {"ucsb", 52, 50, 598, 512},
    };
    // SciVal (June 2024), 2019 through 2023.
    f.hyperprolific = {
        {"ksu", {9, 44, 53, 47, 89}},      {"kku", {7, 10, 31, 49, 26}},
        {"lau", {0, 0, 1, 2, 26}},         {"psau", {1, 4, 15, 40, 23}},
        {"pnu", {0, 1, 3, 10, 22}},        {"taif_u", {0, 1, 25, 37, 14}},
        {"uos", {0, 1, 8, 9, 11}},         {"uqu", {0, 0, 2, 9, 10}},
        {"gla", {0, 0, 0, 3, 8}},          {"upes", {0, 0, 0, 4, 7}},
        {"chandigarh", {0, 0, 0, 2, 6}},   {"fue", {0, 0, 0, 5, 6}},
        {"al_mustaqbal", {0, 0, 0, 5, 5}}, {"lpu", {0, 0, 1, 3, 5}},
        {"imsiu", {0, 0, 0, 0, 2}},        {"tabuk", {1, 2, 1, 3, 0}},
        {"cityu", {6, 9, 9, 10, 10}},      {"princeton", {2, 4, 3, 2, 2}},
        {"caltech", {2, 5, 3, 3, 1}},      {"epfl", {3, 3, 3, 1, 0}},
        {"ucsb", {2, 4, 1, 0, 1}},         {"cmu", {1, 1, 1, 1, 1}},
        {"rice", {1, 1, 1, 1, 1}},
    };
    // Scopus (June 2024); excludes records whose co-authors list the
    // institution as their sole affiliation.
    f.multi_affiliation = {
        {"lau", 15, 76, 61},      {"chandigarh", 9, 39, 31},   {"upes", 5, 34, 29},
        {"uos", 19, 27, 8},       {"psau", 29, 24, -5},        {"imsiu", 28, 21, -7},
        {"tabuk", 27, 13, -14},   {"kku", 21, 12, -9},         {"uqu", 31, 10, -21},
        {"lpu", 2, 10, 8},        {"taif_u", 43, 9, -34},      {"fue", 26, 7, -19},
        {"al_mustaqbal", 21, 5, -16}, {"pnu", 21, 4, -17},     {"gla", 4, 4, 0},
        {"ksu", 11, 3, -8},       {"cityu", 18, 22, 4},        {"princeton", 8, 8, 0},
        {"epfl", 8, 8, -1},       {"caltech", 7, 6, -1},       {"rice", 7, 5, -2},
        {"ucsb", 6, 5, -1},       {"cmu", 5, 4, -1},
    };
    // InCites (June 2024).
    f.intl_collab = {
        {"lau", 54, 95, 250, 1},          {"kku", 75, 89, 15, 3},
        {"pnu", 72, 89, 24, 4},           {"fue", 27, 87, 788, 5},
        {"uos", 78, 87, 5, 6},            {"psau", 74, 85, 17, 7},
        {"taif_u", 73, 82, 23, 11},       {"al_mustaqbal", 48, 79, 372, 18},
        {"tabuk", 76, 78, 13, 21},        {"ksu", 74, 78, 18, 22},
        {"imsiu", 61, 77, 109, 23},       {"uqu", 72, 77, 27, 28},
        {"chandigarh", 33, 66, 643, 118}, {"upes", 17, 64, 839, 141},
        {"gla", 14, 58, 991, 247},        {"lpu", 33, 52, 653, 333},
        {"epfl", 70, 74, 29, 40},         {"caltech", 59, 60, 140, 219},
        {"princeton", 49, 52, 345, 344},  {"ucsb", 46, 48, 397, 410},
        {"rice", 46, 47, 392, 426},       {"cmu", 42, 46, 454, 440},
        {"cityu", 40, 37, 488, 601},
    };
    // Essential Science Indicators via InCites (June 2024), Mathematics.
    f.mathematics = {
        {"ksu", true, 151, 470, 94, 2},      {"pnu", true, 18, 328, 1195, 7},
        {"psau", true, 46, 297, 578, 13},    {"kku", true, 51, 252, 504, 18},
        {"uqu", true, 18, 190, 1195, 46},    {"lau", true, 2, 149, 2825, 98},
        {"princeton", false, 214, 184, 30, 50},
    };
    return f;
}

ojson rank_cell(const std::optional<int>& r) {
    if (!r) return "2000+";
    return *r;
}

ojson with_source(const char* source, ojson rows) {
    ojson j;
    j["source"] = source;
    j["rows"] = std::move(rows);
    return j;
}

}  // namespace

const PaperFixtures& paper_fixtures() {
    static const PaperFixtures f = build();
    return f;
}

const OutputRow& PaperFixtures::output_of(std::string_view id) const {
    for (const auto& r : output)
        if (r.id == id) return r;
    throw UnknownIdError("institution", std::string(id));
}

std::vector<std::string> PaperFixtures::study_ids() const {
    std::vector<std::string> out;
    for (const auto& r : output)
        if (r.study) out.push_back(r.id);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> PaperFixtures::control_ids() const {
    std::vector<std::string> out;
    for (const auto& r : output)
        if (!r.study) out.push_back(r.id);
    std::sort(out.begin(), out.end());
    return out;
}

InstitutionRegistry fixture_registry() {
    std::vector<Institution> entries;
    for (const auto& r : paper_fixtures().output) entries.push_back({r.id, r.name, r.country, {}});
    return InstitutionRegistry::from_entries(std::move(entries));
}

std::map<std::string, std::string> fixture_files() {
    const auto& f = paper_fixtures();
    std::map<std::string, std::string> files;

    ojson rows = ojson::array();
    for (const auto& r : f.output)
        rows.push_back({{"id", r.id},
                        {"name", r.name},
                        {"country", r.country},
                        {"group", r.study ? "study" : "control"},
                        {"articles_2019", r.articles_2019},
                        {"articles_2023", r.articles_2023},
                        {"change_pct", r.change_pct},
                        {"world_rank_2019", rank_cell(r.rank_2019)},
                        {"world_rank_2023", rank_cell(r.rank_2023)}});
    files["output_counts.json"] = with_source("SciVal (June 2024)", std::move(rows)).dump(2) + "\n";

    rows = ojson::array();
    for (const auto& r : f.first_author)
        rows.push_back({{"id", r.id},
                        {"pct_2019", r.pct_2019},
                        {"pct_2023", r.pct_2023},
                        {"world_rank_2019", r.rank_2019},
                        {"world_rank_2023", r.rank_2023}});
    files["first_author.json"] = with_source("InCites (June 2024)", std::move(rows)).dump(2) + "\n";

    rows = ojson::array();
    for (const auto& r : f.hyperprolific) {
        ojson counts = ojson::object();
        for (int i = 0; i < 5; ++i) counts[std::to_string(2019 + i)] = r.counts[static_cast<std::size_t>(i)];
        rows.push_back({{"id", r.id}, {"counts", std::move(counts)}});
    }
    files["hyperprolific.json"] = with_source("SciVal (June 2024)", std::move(rows)).dump(2) + "\n";

    rows = ojson::array();
    for (const auto& r : f.multi_affiliation)
        rows.push_back({{"id", r.id}, {"pct_2019", r.pct_2019}, {"pct_2023", r.pct_2023}, {"change", r.change}});
    files["multi_affiliation.json"] = with_source("Scopus (June 2024)", std::move(rows)).dump(2) + "\n";

    rows = ojson::array();
    for (const auto& r : f.intl_collab)
        rows.push_back({{"id", r.id},
                        {"pct_2019", r.pct_2019},
                        {"pct_2023", r.pct_2023},
                        {"world_rank_2019", r.rank_2019},
                        {"world_rank_2023", r.rank_2023}});
    files["intl_collab.json"] = with_source("InCites (June 2024)", std::move(rows)).dump(2) + "\n";

    rows = ojson::array();
    for (const auto& r : f.mathematics)
        rows.push_back({{"id", r.id},
                        {"group", r.study ? "study" : "control"},
                        {"articles_2019", r.articles_2019},
                        {"articles_2023", r.articles_2023},
                        {"world_rank_2019", r.rank_2019},
                        {"world_rank_2023", r.rank_2023 ? ojson(*r.rank_2023) : ojson("dropped out")}});
    files["subject_mathematics.json"] =
        with_source("Essential Science Indicators via InCites (June 2024)", std::move(rows)).dump(2) + "\n";

    const auto& g = f.facts;
    ojson facts;
    facts["source"] = "SciVal, InCites and Scopus (June 2024)";
    facts["study_distinct_articles"] = {{"2019", g.study_distinct_2019}, {"2023", g.study_distinct_2023}};
    facts["growth_pct"] = {{"study", g.study_growth_pct}, {"control", g.control_growth_pct}};
    facts["overlap_pct"] = {{"study", {{"2019", g.study_overlap_2019}, {"2023", g.study_overlap_2023}}},
                            {"control", {{"2019", g.control_overlap_2019}, {"2023", g.control_overlap_2023}}}};
    facts["study_hyperprolific_total"] = {{"2019", g.study_hyperprolific_2019},
                                          {"2023", g.study_hyperprolific_2023}};
    facts["control_hyperprolific_per_institution"] = g.control_hyperprolific_per_institution;
    auto tenth = [](const std::array<int, 2>& v) {
        return ojson{{"2019", v[0] / 10.0}, {"2023", v[1] / 10.0}};
    };
    facts["authors_per_article"] = {{"study", tenth(g.study_authors_per_article_x10)},
                                    {"control", tenth(g.control_authors_per_article_x10)},
                                    {"world", tenth(g.world_authors_per_article_x10)}};
    facts["first_author_pct"] = {
        {"study", {{"2019", g.study_first_author_2019}, {"2023", g.study_first_author_2023}}},
        {"world", {{"2019", g.world_first_author[0]}, {"2023", g.world_first_author[1]}}}};
    facts["intl_collab_pct"] = {{"study", {{"2019", g.study_intl_2019}, {"2023", g.study_intl_2023}}},
                                {"control", {{"2019", g.control_intl_2019}, {"2023", g.control_intl_2023}}}};
    facts["study_median_ranks"] = {
        {"output_2023", g.study_median_output_rank_2023},
        {"first_author", {{"2019", g.study_median_first_author_rank_2019},
                          {"2023", g.study_median_first_author_rank_2023}}},
        {"intl_collab", {{"2019", g.study_median_intl_rank_2019}, {"2023", g.study_median_intl_rank_2023}}}};
    facts["network_external_institutions"] = {
        {"study", {{"2019", g.external_institutions_2019},
                   {"2023", g.external_institutions_2023},
                   {"change_pct", g.external_institutions_change_pct}}},
        {"control", {{"2019", g.control_external_institutions_2019},
                     {"2023", g.control_external_institutions_2023},
                     {"change_pct", g.control_external_change_pct}}}};
    facts["cross_group_authors"] = {{"count", g.cross_group_authors}, {"min_pubs", g.cross_group_min_pubs}};
    facts["surge_case_articles"] = {{"2022", g.surge_case_2022}, {"2023", g.surge_case_2023}};
    facts["multi_affiliation_case"] = {{"pct_records", g.multi_case_pct},
                                       {"mean_affiliations", g.multi_case_mean_x10 / 10.0}};
    files["group_facts.json"] = facts.dump(2) + "\n";
    return files;
}

}  // namespace bibscreen::synth
