#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

#include <json.hpp>

#include "bibscreen/cli.hpp"
#include "bibscreen/error.hpp"
#include "bibscreen/network.hpp"

extern char** environ;

namespace bibscreen::cli {

using ojson = nlohmann::ordered_json;

namespace {

/// "8.7", "87/10", "12" or a JSON number.
Rational to_rational(const ojson& v) {
    std::string text = v.is_string() ? v.get<std::string>() : v.dump();
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational::parse(text);
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::int64_t den = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    return Rational(Rational::parse(digits).num(), den);
}

class Reader {
public:
    explicit Reader(std::vector<std::string>& violations) : v_(violations) {}

    void check_keys(const ojson& obj, const std::string& where, std::initializer_list<const char*> keys) {
        if (!obj.is_object()) {
            v_.push_back((where.empty() ? "config" : where) + " must be an object");
            return;
        }
        std::set<std::string> known(keys.begin(), keys.end());
        for (const auto& [k, val] : obj.items())
            if (!known.count(k)) v_.push_back("unknown key '" + join(where, k) + "'");
    }

    template <typename T>
    void get(const ojson& obj, const std::string& where, const char* key, T& target) {
        if (!obj.is_object() || !obj.contains(key) || obj[key].is_null()) return;
        try {
            target = obj[key].get<T>();
        } catch (const nlohmann::json::exception&) {
            v_.push_back("'" + join(where, key) + "' has the wrong type");
        }
    }

    void rational(const ojson& obj, const std::string& where, const char* key, Rational& target) {
        std::optional<Rational> r;
        optional_rational(obj, where, key, r);
        if (r) target = *r;
    }

    void optional_rational(const ojson& obj, const std::string& where, const char* key,
                           std::optional<Rational>& target) {
        if (!obj.is_object() || !obj.contains(key)) return;
        if (obj[key].is_null()) {
            target.reset();
            return;
        }
        try {
            target = to_rational(obj[key]);
        } catch (const Error&) {
            v_.push_back("'" + join(where, key) + "' is not a number");
        }
    }

    void years(const ojson& obj, const char* key, std::optional<YearRange>& target) {
        if (!obj.contains(key) || obj[key].is_null()) return;
        const auto& y = obj[key];
        if (y.is_array() && y.size() == 2 && y[0].is_number_integer() && y[1].is_number_integer())
            target = YearRange{y[0].get<int>(), y[1].get<int>()};
        else if (y.is_object() && y.contains("first") && y.contains("last") &&
                 y["first"].is_number_integer() && y["last"].is_number_integer())
            target = YearRange{y["first"].get<int>(), y["last"].get<int>()};
        else
            v_.push_back("'years' must be [first, last]");
    }

private:
    static std::string join(const std::string& where, const std::string& key) {
        return where.empty() ? key : where + "." + key;
    }

    std::vector<std::string>& v_;
};

std::vector<std::string> id_list(const ojson& v, std::vector<std::string>& violations, const char* key) {
    if (v.is_string()) {
        std::vector<std::string> out;
        std::string s = v.get<std::string>();
        std::size_t start = 0;
        while (start <= s.size()) {
            auto comma = s.find(',', start);
            if (comma == std::string::npos) comma = s.size();
            if (comma > start) out.push_back(s.substr(start, comma - start));
            start = comma + 1;
        }
        return out;
    }
    if (v.is_array()) {
        try {
            return v.get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception&) {
        }
    }
    violations.push_back(std::string("'") + key + "' must be a list of ids");
    return {};
}

}  // namespace

RunConfig RunConfig::from_json(std::string_view text) {
    ojson j;
    try {
        j = text.empty() ? ojson::object() : ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    std::vector<std::string> v;
    Reader rd(v);
    RunConfig c;
    rd.check_keys(j, "", {"inputs", "corpus", "registry", "output_dir", "input_format", "years", "funnel",
                          "groups", "world", "thresholds", "dossier", "network", "synth", "table_formats",
                          "fixtures"});
    if (!j.is_object()) throw SpecError(std::move(v));

    if (j.contains("inputs")) c.inputs = id_list(j["inputs"], v, "inputs");
    rd.get(j, "", "corpus", c.corpus);
    rd.get(j, "", "registry", c.registry);
    rd.get(j, "", "output_dir", c.output_dir);
    rd.get(j, "", "input_format", c.input_format);
    rd.years(j, "years", c.years);
    if (j.contains("table_formats")) c.table_formats = id_list(j["table_formats"], v, "table_formats");
    rd.get(j, "", "fixtures", c.fixtures);

    if (j.contains("funnel")) {
        const auto& f = j["funnel"];
        rd.check_keys(f, "funnel", {"top_n_by_output", "growth_threshold_pct", "growth_multiple_of_world",
                                    "top_k_rank", "start_year", "end_year"});
        rd.get(f, "funnel", "top_n_by_output", c.funnel.top_n_by_output);
        rd.optional_rational(f, "funnel", "growth_threshold_pct", c.funnel.growth_threshold_pct);
        rd.optional_rational(f, "funnel", "growth_multiple_of_world", c.funnel.growth_multiple_of_world);
        rd.get(f, "funnel", "top_k_rank", c.funnel.top_k_rank);
        rd.get(f, "funnel", "start_year", c.funnel.start_year);
        rd.get(f, "funnel", "end_year", c.funnel.end_year);
    }
    if (j.contains("groups")) {
        const auto& g = j["groups"];
        rd.check_keys(g, "groups", {"study", "control"});
        if (g.contains("study") && !g["study"].is_null()) c.study = id_list(g["study"], v, "groups.study");
        if (g.contains("control")) c.control = id_list(g["control"], v, "groups.control");
    }
    std::map<std::string, Rational> fa, apa;
    if (j.contains("world")) {
        const auto& w = j["world"];
        rd.check_keys(w, "world", {"growth_pct", "first_author", "authors_per_article"});
        rd.rational(w, "world", "growth_pct", c.world.growth_pct);
        for (auto [key, target] : {std::pair{"first_author", &fa}, std::pair{"authors_per_article", &apa}}) {
            if (!w.contains(key)) continue;
            if (!w[key].is_object()) {
                v.push_back(std::string("'world.") + key + "' must map years to values");
                continue;
            }
            for (const auto& [year, val] : w[key].items()) {
                Rational r;
                rd.rational(w[key], std::string("world.") + key, year.c_str(), r);
                (*target)[year] = r;
            }
        }
    }
    if (j.contains("thresholds")) {
        const auto& t = j["thresholds"];
        rd.check_keys(t, "thresholds", {"hyperprolific", "hyperprolific_inclusive", "external_min_pubs",
                                        "cross_group_min_pubs", "surge_ratio", "surge_min_recent",
                                        "surge_baseline_years", "surge_recent_years"});
        rd.get(t, "thresholds", "hyperprolific", c.hyperprolific.threshold);
        rd.get(t, "thresholds", "hyperprolific_inclusive", c.hyperprolific.inclusive);
        rd.get(t, "thresholds", "external_min_pubs", c.external_min_pubs);
        rd.get(t, "thresholds", "cross_group_min_pubs", c.cross_group_min_pubs);
        rd.rational(t, "thresholds", "surge_ratio", c.surge.ratio_threshold);
        rd.rational(t, "thresholds", "surge_min_recent", c.surge.min_recent);
        rd.get(t, "thresholds", "surge_baseline_years", c.surge.baseline_years);
        rd.get(t, "thresholds", "surge_recent_years", c.surge.recent_years);
    }
    if (j.contains("dossier")) {
        const auto& d = j["dossier"];
        rd.check_keys(d, "dossier", {"hyperprolific_min", "external_min", "multi_affiliation_rise",
                                     "overlap_min_links", "intl_rank_top_k"});
        rd.get(d, "dossier", "hyperprolific_min", c.dossier.hyperprolific_min);
        rd.get(d, "dossier", "external_min", c.dossier.external_min);
        rd.rational(d, "dossier", "multi_affiliation_rise", c.dossier.multi_affiliation_rise);
        rd.get(d, "dossier", "overlap_min_links", c.dossier.overlap_min_links);
        rd.get(d, "dossier", "intl_rank_top_k", c.dossier.intl_rank_top_k);
    }
    if (j.contains("network")) {
        const auto& n = j["network"];
        rd.check_keys(n, "network", {"year", "seed_group", "min_articles", "qualification", "format",
                                     "clustering_seed"});
        if (n.contains("year") && !n["year"].is_null()) {
            int y = 0;
            rd.get(n, "network", "year", y);
            c.network.year = y;
        }
        if (n.contains("seed_group")) {
            auto ids = id_list(n["seed_group"], v, "network.seed_group");
            if (!(ids.size() == 1 && ids[0] == "study")) c.network.seed_group = ids;
        }
        rd.get(n, "network", "min_articles", c.network.min_articles);
        rd.get(n, "network", "qualification", c.network.qualification);
        rd.get(n, "network", "format", c.network.format);
        rd.get(n, "network", "clustering_seed", c.network.clustering_seed);
    }
    if (j.contains("synth")) {
        const auto& s = j["synth"];
        rd.check_keys(s, "synth", {"spec", "preset", "seed", "surges", "institutions", "records", "oracle",
                                   "fixtures"});
        rd.get(s, "synth", "spec", c.synth.spec);
        rd.get(s, "synth", "preset", c.synth.preset);
        rd.get(s, "synth", "seed", c.synth.seed);
        rd.get(s, "synth", "surges", c.synth.surges);
        rd.get(s, "synth", "institutions", c.synth.institutions);
        rd.get(s, "synth", "records", c.synth.records);
        rd.get(s, "synth", "oracle", c.synth.oracle);
        rd.get(s, "synth", "fixtures", c.synth.fixtures);
    }

    // World baselines follow the funnel's boundary years.
    c.funnel.world_growth_pct = c.world.growth_pct;
    auto pick = [&](const std::map<std::string, Rational>& m, int year, Rational& target) {
        if (auto it = m.find(std::to_string(year)); it != m.end()) target = it->second;
    };
    pick(fa, c.funnel.start_year, c.world.first_author_start);
    pick(fa, c.funnel.end_year, c.world.first_author_end);
    pick(apa, c.funnel.start_year, c.world.authors_per_article_start);
    pick(apa, c.funnel.end_year, c.world.authors_per_article_end);

    static const std::set<std::string> formats{"auto", "jsonl", "csv"};
    if (!formats.count(c.input_format)) v.push_back("input_format must be auto, jsonl or csv");
    if (c.years && c.years->empty()) v.push_back("years: first must not exceed last");
    for (const auto& f : c.table_formats)
        if (f != "csv" && f != "jsonl") v.push_back("table_formats: unknown format '" + f + "'");
    if (c.hyperprolific.threshold < 1) v.push_back("thresholds.hyperprolific must be at least 1");
    if (c.external_min_pubs < 1) v.push_back("thresholds.external_min_pubs must be at least 1");
    if (c.cross_group_min_pubs < 0) v.push_back("thresholds.cross_group_min_pubs must be non-negative");
    if (c.surge.baseline_years < 1 || c.surge.recent_years < 1)
        v.push_back("surge windows must span at least one year");
    if (c.network.min_articles < 0) v.push_back("network.min_articles must be non-negative");
    if (c.network.qualification != "total_output" && c.network.qualification != "co_published")
        v.push_back("network.qualification must be total_output or co_published");
    try {
        network::parse_format(c.network.format);
    } catch (const UsageError& e) {
        v.push_back(std::string("network.format: ") + e.what());
    }
    if (c.synth.preset != "planted_universe" && c.synth.preset != "scale")
        v.push_back("synth.preset must be planted_universe or scale");
    if (c.synth.surges < 0 || c.synth.institutions < 1 || c.synth.records < 1)
        v.push_back("synth sizes must be positive");
    {
        std::set<std::string> a(c.study.begin(), c.study.end());
        for (const auto& id : c.control)
            if (a.count(id)) v.push_back("groups: '" + id + "' is in both study and control");
    }
    try {
        c.funnel.validate();
    } catch (const SpecError& e) {
        for (const auto& s : e.violations()) v.push_back("funnel: " + s);
    }
    if (!v.empty()) throw SpecError(std::move(v));
    return c;
}

std::string RunConfig::to_json() const {
    ojson j;
    j["inputs"] = inputs;
    j["corpus"] = corpus;
    j["registry"] = registry;
    j["output_dir"] = output_dir;
    j["input_format"] = input_format;
    j["years"] = years ? ojson{years->first, years->last} : ojson(nullptr);
    auto opt = [](const std::optional<Rational>& r) { return r ? ojson(r->to_string()) : ojson(nullptr); };
    j["funnel"] = {{"top_n_by_output", funnel.top_n_by_output},
                   {"growth_threshold_pct", opt(funnel.growth_threshold_pct)},
                   {"growth_multiple_of_world", opt(funnel.growth_multiple_of_world)},
                   {"top_k_rank", funnel.top_k_rank},
                   {"start_year", funnel.start_year},
                   {"end_year", funnel.end_year}};
    j["groups"] = {{"study", study}, {"control", control}};
    const auto s = std::to_string(funnel.start_year), e = std::to_string(funnel.end_year);
    j["world"] = {{"growth_pct", world.growth_pct.to_string()},
                  {"first_author", {{s, world.first_author_start.to_string()}, {e, world.first_author_end.to_string()}}},
                  {"authors_per_article",
                   {{s, world.authors_per_article_start.to_string()}, {e, world.authors_per_article_end.to_string()}}}};
    j["thresholds"] = {{"hyperprolific", hyperprolific.threshold},
                       {"hyperprolific_inclusive", hyperprolific.inclusive},
                       {"external_min_pubs", external_min_pubs},
                       {"cross_group_min_pubs", cross_group_min_pubs},
                       {"surge_ratio", surge.ratio_threshold.to_string()},
                       {"surge_min_recent", surge.min_recent.to_string()},
                       {"surge_baseline_years", surge.baseline_years},
                       {"surge_recent_years", surge.recent_years}};
    j["dossier"] = {{"hyperprolific_min", dossier.hyperprolific_min},
                    {"external_min", dossier.external_min},
                    {"multi_affiliation_rise", dossier.multi_affiliation_rise.to_string()},
                    {"overlap_min_links", dossier.overlap_min_links},
                    {"intl_rank_top_k", dossier.intl_rank_top_k}};
    j["network"] = {{"year", network.year ? ojson(*network.year) : ojson(nullptr)},
                    {"seed_group", network.seed_group.empty() ? ojson("study") : ojson(network.seed_group)},
                    {"min_articles", network.min_articles},
                    {"qualification", network.qualification},
                    {"format", network.format},
                    {"clustering_seed", network.clustering_seed}};
    j["synth"] = {{"spec", synth.spec},           {"preset", synth.preset},
                  {"seed", synth.seed},           {"surges", synth.surges},
                  {"institutions", synth.institutions}, {"records", synth.records},
                  {"oracle", synth.oracle},       {"fixtures", synth.fixtures}};
    j["table_formats"] = table_formats;
    j["fixtures"] = fixtures;
    return j.dump(2) + "\n";
}

std::string apply_env_overrides(std::string_view config_json, const std::map<std::string, std::string>& env) {
    ojson j;
    try {
        j = config_json.empty() ? ojson::object() : ojson::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    const std::string prefix = "BIBSCREEN_";
    for (const auto& [name, value] : env) {
        if (name.rfind(prefix, 0) != 0 || name == "BIBSCREEN_CONFIG") continue;
        std::string path = name.substr(prefix.size());
        std::transform(path.begin(), path.end(), path.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        ojson* node = &j;
        std::size_t start = 0;
        for (;;) {
            auto sep = path.find("__", start);
            std::string key = path.substr(start, sep == std::string::npos ? std::string::npos : sep - start);
            if (key.empty()) throw UsageError("malformed override variable " + name);
            if (sep == std::string::npos) {
                ojson parsed = ojson::parse(value, nullptr, false);
                (*node)[key] = parsed.is_discarded() ? ojson(value) : parsed;
                break;
            }
            if (!(*node)[key].is_object()) (*node)[key] = ojson::object();
            node = &(*node)[key];
            start = sep + 2;
        }
    }
    return j.dump();
}

std::map<std::string, std::string> environment() {
    std::map<std::string, std::string> out;
    for (char** e = environ; e && *e; ++e) {
        std::string kv = *e;
        auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        std::string name = kv.substr(0, eq);
        if (name.rfind("BIBSCREEN_", 0) == 0) out[name] = kv.substr(eq + 1);
    }
    return out;
}

}  // namespace bibscreen::cli
