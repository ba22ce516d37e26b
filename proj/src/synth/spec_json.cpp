#include <set>

#include <json.hpp>

#include "bibscreen/error.hpp"
#include "bibscreen/synth.hpp"

namespace bibscreen::synth {

using ojson = nlohmann::ordered_json;

namespace {

template <typename T>
T field(const ojson& j, const char* key, T fallback, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw UsageError(where + ": field '" + key + "' has the wrong type");
    }
}

YearRange parse_years(const ojson& j) {
    if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer())
        return {j[0].get<int>(), j[1].get<int>()};
    if (j.is_object() && j.contains("first") && j.contains("last"))
        return {j["first"].get<int>(), j["last"].get<int>()};
    throw UsageError("generator spec: 'years' must be [first, last] or {\"first\", \"last\"}");
}

}  // namespace

GeneratorSpec GeneratorSpec::from_json(std::string_view text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(std::string("generator spec is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("generator spec must be a JSON object");
    static const std::set<std::string> known{"seed", "years", "subject_categories",
                                             "conference_fraction", "review_fraction",
                                             "author_cap_per_year", "institutions", "anomalies"};
    std::vector<std::string> unknown;
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) unknown.push_back("unknown key '" + k + "'");
    if (!unknown.empty()) throw SpecError(std::move(unknown));

    GeneratorSpec s;
    s.seed = field<std::uint64_t>(j, "seed", s.seed, "spec");
    if (j.contains("years")) s.years = parse_years(j["years"]);
    s.subject_categories = field(j, "subject_categories", s.subject_categories, "spec");
    s.conference_fraction = field(j, "conference_fraction", s.conference_fraction, "spec");
    s.review_fraction = field(j, "review_fraction", s.review_fraction, "spec");
    s.author_cap_per_year = field(j, "author_cap_per_year", s.author_cap_per_year, "spec");
    if (j.contains("institutions")) {
        if (!j["institutions"].is_array()) throw UsageError("spec: 'institutions' must be an array");
        for (const auto& e : j["institutions"]) {
            InstitutionSpec i;
            const std::string where = "institution";
            i.id = field<std::string>(e, "id", "", where);
            i.name = field<std::string>(e, "name", "", where);
            i.country = field<std::string>(e, "country", "", where);
            i.base_output_per_year = field(e, "base_output_per_year", i.base_output_per_year, where);
            i.annual_growth_pct = field(e, "annual_growth_pct", i.annual_growth_pct, where);
            i.authors_pool_size = field(e, "authors_pool_size", i.authors_pool_size, where);
            i.mean_authors_per_record =
                field(e, "mean_authors_per_record", i.mean_authors_per_record, where);
            i.domestic_collab_prob = field(e, "domestic_collab_prob", i.domestic_collab_prob, where);
            i.intl_collab_prob = field(e, "intl_collab_prob", i.intl_collab_prob, where);
            s.institutions.push_back(std::move(i));
        }
    }
    if (j.contains("anomalies")) {
        if (!j["anomalies"].is_array()) throw UsageError("spec: 'anomalies' must be an array");
        for (const auto& e : j["anomalies"]) {
            AnomalyPlant p;
            p.id = field<std::string>(e, "id", "", "anomaly");
            p.kind = parse_plant_kind(field<std::string>(e, "kind", "", "anomaly " + p.id));
            p.targets = field(e, "targets", p.targets, "anomaly " + p.id);
            p.active_years = field(e, "active_years", p.active_years, "anomaly " + p.id);
            if (e.contains("params")) {
                if (!e["params"].is_object()) throw UsageError("anomaly " + p.id + ": 'params' must be an object");
                for (const auto& [k, v] : e["params"].items()) {
                    if (!v.is_number()) throw UsageError("anomaly " + p.id + ": parameter '" + k + "' must be a number");
                    p.params[k] = v.get<double>();
                }
            }
            s.anomalies.push_back(std::move(p));
        }
    }
    return s;
}

std::string GeneratorSpec::to_json() const {
    ojson j;
    j["seed"] = seed;
    j["years"] = {years.first, years.last};
    j["subject_categories"] = subject_categories;
    j["conference_fraction"] = conference_fraction;
    j["review_fraction"] = review_fraction;
    j["author_cap_per_year"] = author_cap_per_year;
    ojson insts = ojson::array();
    for (const auto& i : institutions) {
        ojson e;
        e["id"] = i.id;
        if (!i.name.empty()) e["name"] = i.name;
        e["country"] = i.country;
        e["base_output_per_year"] = i.base_output_per_year;
        e["annual_growth_pct"] = i.annual_growth_pct;
        e["authors_pool_size"] = i.authors_pool_size;
        e["mean_authors_per_record"] = i.mean_authors_per_record;
        e["domestic_collab_prob"] = i.domestic_collab_prob;
        e["intl_collab_prob"] = i.intl_collab_prob;
        insts.push_back(std::move(e));
    }
    j["institutions"] = std::move(insts);
    ojson plants = ojson::array();
    for (const auto& p : anomalies) {
        ojson e;
        e["id"] = p.id;
        e["kind"] = plant_kind_name(p.kind);
        e["targets"] = p.targets;
        ojson params = ojson::object();
        for (const auto& [k, v] : p.params) params[k] = v;
        e["params"] = std::move(params);
        e["active_years"] = p.active_years;
        plants.push_back(std::move(e));
    }
    j["anomalies"] = std::move(plants);
    return j.dump(2) + "\n";
}

std::string GroundTruth::to_jsonl() const {
    std::string out;
    ojson head;
    head["type"] = "summary";
    head["seed"] = seed;
    head["records"] = records;
    head["plants"] = plants.size();
    out += head.dump() + "\n";
    for (const auto& p : plants) {
        ojson j;
        j["type"] = "plant";
        j["plant_id"] = p.plant_id;
        j["kind"] = plant_kind_name(p.kind);
        j["targets"] = p.targets;
        j["record_ids"] = p.record_ids;
        j["author_ids"] = p.author_ids;
        ojson ay = ojson::object();
        for (const auto& [a, years] : p.author_yearly) {
            ojson y = ojson::object();
            for (const auto& [year, n] : years) y[std::to_string(year)] = n;
            ay[a] = std::move(y);
        }
        j["author_yearly"] = std::move(ay);
        ojson yc = ojson::object();
        for (const auto& [year, n] : p.yearly_counts) yc[std::to_string(year)] = n;
        j["yearly_counts"] = std::move(yc);
        ojson v = ojson::object();
        for (const auto& [k, x] : p.values) v[k] = x;
        j["values"] = std::move(v);
        out += j.dump() + "\n";
    }
    return out;
}

}  // namespace bibscreen::synth
