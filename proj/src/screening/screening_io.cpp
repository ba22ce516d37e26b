#include <sstream>

#include <json.hpp>

#include "bibscreen/screening.hpp"

namespace bibscreen::screening {

using ojson = nlohmann::ordered_json;
using indicators::report_decimal;
using indicators::report_percent;

namespace {

ojson exact(const std::optional<Rational>& v) {
    if (!v) return nullptr;
    return v->to_string();
}

ojson exact(const std::optional<int>& v) {
    if (!v) return nullptr;
    return *v;
}

std::string cell(const std::optional<Rational>& v, bool decimal = false) {
    return decimal ? report_decimal(v) : report_percent(v);
}

void group_table(std::ostringstream& out, const GroupPanel& p, const YearRange& years) {
    const auto& s = p.summary;
    auto header = [&](const char* first) {
        out << "| " << first << " |";
        for (const auto& g : s.years) out << ' ' << g.year << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < s.years.size(); ++i) out << "---:|";
        out << '\n';
    };
    out << "### " << s.group_id << " (" << s.members.size() << " members)\n\n";
    header("indicator");
    auto row = [&](const std::string& name, auto&& value) {
        out << "| " << name << " |";
        for (const auto& g : s.years) out << ' ' << value(g) << " |";
        out << '\n';
    };
    row("articles (summed over members)", [](const indicators::GroupYear& g) {
        return std::to_string(g.summed_output);
    });
    row("articles (distinct)", [](const indicators::GroupYear& g) {
        return std::to_string(g.distinct_output);
    });
    row("% first author", [](const indicators::GroupYear& g) {
        return cell(g.first_author.percent());
    });
    row("authors per article", [](const indicators::GroupYear& g) {
        return cell(g.authors_per_article, true);
    });
    row("% international collaboration", [](const indicators::GroupYear& g) {
        return cell(g.intl_collab.percent());
    });
    row("% multiple affiliations", [](const indicators::GroupYear& g) {
        return cell(g.multi_affiliation.percent());
    });
    row("% overlapping articles", [](const indicators::GroupYear& g) {
        return g.overlap ? cell(g.overlap->percent()) : std::string("n/a");
    });
    row("hyperprolific authors", [&](const indicators::GroupYear& g) {
        return std::to_string(p.hyperprolific_total.at(g.year));
    });
    row("median output rank", [](const indicators::GroupYear& g) {
        return cell(g.median_output_rank, true);
    });
    out << "\nGrowth " << years.first << "-" << years.last << ": " << report_percent(s.growth_pct)
        << "% on distinct articles, " << report_percent(s.summed_growth_pct)
        << "% on summed member counts.";
    if (p.cross_group_authors)
        out << " Authors credited to two or more members: " << p.cross_group_authors->to_string()
            << ".";
    out << "\n\n";
    for (const auto& n : s.notes) out << "- " << n << '\n';
    if (!s.notes.empty()) out << '\n';

    header("hyperprolific authors");
    for (const auto& m : s.members) {
        out << "| " << m << " |";
        for (const auto& g : s.years) out << ' ' << p.hyperprolific.at(g.year).at(m) << " |";
        out << '\n';
    }
    out << '\n';
}

ojson panel_json(const GroupPanel& p) {
    const auto& s = p.summary;
    ojson j;
    j["group_id"] = s.group_id;
    j["members"] = s.members;
    j["growth_pct"] = exact(s.growth_pct);
    j["summed_growth_pct"] = exact(s.summed_growth_pct);
    ojson years = ojson::array();
    for (const auto& g : s.years) {
        ojson y;
        y["year"] = g.year;
        y["summed_output"] = g.summed_output;
        y["distinct_output"] = g.distinct_output;
        y["first_author_pct"] = exact(g.first_author.percent());
        y["authors_per_article"] = exact(g.authors_per_article);
        y["intl_collab_pct"] = exact(g.intl_collab.percent());
        y["multi_affiliation_pct"] = exact(g.multi_affiliation.percent());
        y["overlap_pct"] = g.overlap ? exact(g.overlap->percent()) : ojson(nullptr);
        y["median_output_rank"] = exact(g.median_output_rank);
        y["hyperprolific_total"] = p.hyperprolific_total.at(g.year);
        ojson per = ojson::object();
        for (const auto& [m, n] : p.hyperprolific.at(g.year)) per[m] = n;
        y["hyperprolific"] = std::move(per);
        y["unranked"] = g.unranked;
        years.push_back(std::move(y));
    }
    j["years"] = std::move(years);
    j["cross_group_authors"] = exact(p.cross_group_authors);
    j["notes"] = s.notes;
    return j;
}

}  // namespace

std::string ScreeningResult::summary_markdown() const {
    std::ostringstream out;
    out << "# Screening funnel " << config.start_year << "-" << config.end_year << "\n\n"
        << "| stage | remaining | excluded |\n|---|---:|---:|\n";
    for (std::size_t i = 0; i < stages.size(); ++i)
        out << "| " << i << ". " << stages[i].name << " | " << stages[i].survivors.size() << " | "
            << stages[i].excluded.size() << " |\n";
    out << "\nSettings: top " << config.top_n_by_output << " by " << config.end_year
        << " output, growth above " << config.effective_threshold().to_string()
        << "%, top " << config.top_k_rank
        << " in first-author drop or international-collaboration rise.\n\n";
    for (const auto& w : warnings) out << "Warning: " << w << "\n";
    if (!warnings.empty()) out << '\n';
    if (!final_flagged.empty()) {
        out << "Flagged:";
        for (const auto& id : final_flagged) out << ' ' << id;
        out << "\n\n";
    }
    out << "final: " << final_flagged.size() << "\n";
    return out.str();
}

std::string ScreeningResult::to_jsonl() const {
    std::string out;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        ojson j;
        j["type"] = "stage";
        j["index"] = i;
        j["stage"] = stages[i].name;
        j["survivors"] = stages[i].survivors;
        ojson ex = ojson::array();
        for (const auto& e : stages[i].excluded) ex.push_back({{"id", e.id}, {"reason", e.reason}});
        j["excluded"] = std::move(ex);
        out += j.dump() + "\n";
    }
    for (const auto& [id, e] : evidence) {
        ojson j;
        j["type"] = "evidence";
        j["id"] = id;
        j["start_output"] = e.start_output;
        j["end_output"] = e.end_output;
        j["output_rank"] = e.output_rank;
        j["growth_pct"] = exact(e.growth);
        j["first_author_start"] = exact(e.first_author_start);
        j["first_author_end"] = exact(e.first_author_end);
        j["first_author_drop"] = exact(e.first_author_drop);
        j["drop_rank"] = exact(e.drop_rank);
        j["intl_start"] = exact(e.intl_start);
        j["intl_end"] = exact(e.intl_end);
        j["intl_rise"] = exact(e.intl_rise);
        j["rise_rank"] = exact(e.rise_rank);
        j["intl_end_rank"] = exact(e.intl_end_rank);
        j["flagged"] = recheck(e, config);
        out += j.dump() + "\n";
    }
    return out;
}

std::string ComparisonReport::to_markdown() const {
    std::ostringstream out;
    out << "## Study and control groups " << years.first << "-" << years.last << "\n\n";
    group_table(out, study, years);
    group_table(out, control, years);
    return out.str();
}

std::string ComparisonReport::to_json() const {
    ojson j;
    j["years"] = {years.first, years.last};
    j["study"] = panel_json(study);
    j["control"] = panel_json(control);
    return j.dump(2) + "\n";
}

std::string Dossier::to_json() const {
    ojson j;
    j["institution_id"] = institution_id;
    ojson inds = ojson::array();
    for (const auto& i : indicators)
        inds.push_back({{"name", i.name}, {"raised", i.raised}, {"evidence", i.evidence}});
    j["indicators"] = std::move(inds);
    j["flags_raised"] = flags_raised;
    return j.dump();
}

std::string dossiers_jsonl(const std::vector<Dossier>& dossiers) {
    std::string out;
    for (const auto& d : dossiers) out += d.to_json() + "\n";
    return out;
}

}  // namespace bibscreen::screening
