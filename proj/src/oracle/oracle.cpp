#include "bibscreen/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>
#include <vector>

#include <json.hpp>

namespace bibscreen::oracle {

namespace {

struct Affil {
    std::string inst;  // empty when unresolved
    std::string country;
};

struct Author {
    std::string id;
    std::vector<Affil> affils;
};

struct Rec {
    int year = 0;
    std::vector<Author> authors;
    std::vector<std::string> cats;
};

__extension__ typedef __int128 Wide;

struct Frac {
    long long n = 0;
    long long d = 1;
};

Frac make(long long n, long long d) {
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    return {n / g, d / g};
}

bool less(const Frac& a, const Frac& b) {
    return static_cast<Wide>(a.n) * b.d < static_cast<Wide>(b.n) * a.d;
}

long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::string raw(const Frac& f) {
    return f.d == 1 ? std::to_string(f.n) : std::to_string(f.n) + "/" + std::to_string(f.d);
}

std::string whole(const Frac& f) { return std::to_string(floor_div(2 * f.n + f.d, 2 * f.d)); }

std::string tenth(const Frac& f) {
    long long t = floor_div(20 * f.n + f.d, 2 * f.d);
    std::string sign = t < 0 ? "-" : "";
    if (t < 0) t = -t;
    return sign + std::to_string(t / 10) + "." + std::to_string(t % 10);
}

std::string field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

bool lists(const Author& a, const std::string& inst) {
    for (const auto& f : a.affils)
        if (f.inst == inst) return true;
    return false;
}

std::vector<Rec> parse(std::istream& in) {
    std::vector<Rec> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            std::string type = j.at("doc_type").get<std::string>();
            std::transform(type.begin(), type.end(), type.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            type.erase(0, type.find_first_not_of(' '));
            type.erase(type.find_last_not_of(' ') + 1);
            if (type != "article" && type != "review") continue;
            Rec r;
            r.year = j.at("year").get<int>();
            for (const auto& ja : j.at("authors")) {
                Author a;
                a.id = ja.at("author_id").get<std::string>();
                for (const auto& jf : ja.at("affiliations")) {
                    Affil f;
                    if (jf.contains("institution_id")) f.inst = jf["institution_id"].get<std::string>();
                    f.country = jf.at("country").get<std::string>();
                    a.affils.push_back(f);
                }
                r.authors.push_back(a);
            }
            if (j.contains("subject_categories"))
                r.cats = j["subject_categories"].get<std::vector<std::string>>();
            out.push_back(r);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(n, e.what());
        }
    }
    return out;
}

struct Row {
    std::string inst;
    int order;
    std::string cat;
    int year;
    std::string metric;
    std::string value_raw;
    std::string value_reported;
    std::string rank;
};

// Competition rank among present values, larger first.
std::vector<std::string> ranks(const std::vector<std::pair<bool, Frac>>& values) {
    std::vector<std::string> out;
    for (const auto& [has, v] : values) {
        if (!has) {
            out.push_back("");
            continue;
        }
        int better = 0;
        for (const auto& [h2, w] : values)
            if (h2 && less(v, w)) ++better;
        out.push_back(std::to_string(better + 1));
    }
    return out;
}

}  // namespace

std::string metrics_csv(std::istream& in, const Options& opt) {
    const std::vector<Rec> recs = parse(in);
    std::string out = "institution_id,metric,year,value_raw,value_reported,rank\n";
    if (recs.empty()) return out;

    std::set<std::string> insts, cats;
    int lo = recs.front().year, hi = recs.front().year;
    for (const auto& r : recs) {
        lo = std::min(lo, r.year);
        hi = std::max(hi, r.year);
        for (const auto& a : r.authors)
            for (const auto& f : a.affils)
                if (!f.inst.empty()) insts.insert(f.inst);
        cats.insert(r.cats.begin(), r.cats.end());
    }
    const std::vector<std::string> ids(insts.begin(), insts.end());

    auto listed = [](const Rec& r, const std::string& inst) {
        for (const auto& a : r.authors)
            if (lists(a, inst)) return true;
        return false;
    };
    auto output = [&](const std::string& inst, int y) {
        long long n = 0;
        for (const auto& r : recs)
            if (r.year == y && listed(r, inst)) ++n;
        return n;
    };

    std::vector<Row> rows;
    auto emit = [&](const std::vector<std::string>& who, const std::vector<std::pair<bool, Frac>>& vals,
                    int order, const std::string& metric, const std::string& cat, int y,
                    std::string (*report)(const Frac&)) {
        auto rk = ranks(vals);
        for (std::size_t i = 0; i < who.size(); ++i)
            rows.push_back({who[i], order, cat, y, metric, vals[i].first ? raw(vals[i].second) : "n/a",
                            vals[i].first ? report(vals[i].second) : "n/a", rk[i]});
    };

    for (int y = lo; y <= hi; ++y) {
        std::vector<std::pair<bool, Frac>> v;
        for (const auto& id : ids) v.push_back({true, make(output(id, y), 1)});
        emit(ids, v, 0, "output_count", "", y, raw);

        if (y > lo) {
            v.clear();
            for (const auto& id : ids) {
                long long a = output(id, lo), b = output(id, y);
                v.push_back({a > 0, a > 0 ? make(100 * (b - a), a) : Frac{}});
            }
            emit(ids, v, 1, "growth_pct", "", y, whole);
        }

        // Per-record rates, each a fresh scan.
        auto rate = [&](auto counts, auto numer) {
            std::vector<std::pair<bool, Frac>> vals;
            for (const auto& id : ids) {
                long long num = 0, den = 0;
                for (const auto& r : recs) {
                    if (r.year != y || !listed(r, id) || !counts(r, id)) continue;
                    ++den;
                    num += numer(r, id);
                }
                vals.push_back({den > 0, den > 0 ? make(100 * num, den) : Frac{}});
            }
            return vals;
        };
        auto always = [](const Rec&, const std::string&) { return true; };

        emit(ids, rate(always, [](const Rec& r, const std::string& id) { return lists(r.authors[0], id) ? 1 : 0; }),
             2, "first_author_pct", "", y, whole);

        v.clear();
        for (const auto& id : ids) {
            long long n = 0, a = 0;
            for (const auto& r : recs)
                if (r.year == y && listed(r, id)) {
                    ++n;
                    a += static_cast<long long>(r.authors.size());
                }
            v.push_back({n > 0, n > 0 ? make(a, n) : Frac{}});
        }
        emit(ids, v, 3, "authors_per_article", "", y, tenth);

        emit(ids, rate(always, [](const Rec& r, const std::string&) {
                 std::set<std::string> countries;
                 for (const auto& a : r.authors)
                     for (const auto& f : a.affils) countries.insert(f.country);
                 return countries.size() > 1 ? 1 : 0;
             }),
             4, "intl_collab_pct", "", y, whole);

        auto kept = [](const Rec& r, const std::string& id) {
            int sole = 0;
            for (const auto& a : r.authors) {
                if (a.affils.size() > 1) return true;
                if (lists(a, id)) ++sole;
            }
            return sole < 2;
        };
        emit(ids, rate(kept, [](const Rec& r, const std::string& id) {
                 for (const auto& a : r.authors)
                     if (a.affils.size() > 1 && lists(a, id)) return 1;
                 return 0;
             }),
             5, "multi_affiliation_pct", "", y, whole);

        std::map<std::string, long long> yearly;
        for (const auto& r : recs)
            if (r.year == y)
                for (const auto& a : r.authors) ++yearly[a.id];
        for (const auto& id : ids) {
            std::set<std::string> cands;
            std::map<std::string, std::pair<long long, long long>> usage;
            for (const auto& r : recs) {
                if (r.year != y) continue;
                for (const auto& a : r.authors) {
                    if (!lists(a, id)) continue;
                    cands.insert(a.id);
                    auto& u = usage[a.id];
                    ++u.first;
                    if (a.affils[0].inst != id) ++u.second;
                }
            }
            long long hp = 0, ext = 0;
            for (const auto& c : cands) {
                long long n = yearly[c];
                if (opt.hyperprolific_inclusive ? n >= opt.hyperprolific_threshold
                                                : n > opt.hyperprolific_threshold)
                    ++hp;
                const auto& u = usage[c];
                if (u.first >= opt.external_min_pubs && 2 * u.second > u.first) ++ext;
            }
            rows.push_back({id, 6, "", y, "hyperprolific_count", std::to_string(hp), std::to_string(hp), ""});
            rows.push_back({id, 7, "", y, "external_author_count", std::to_string(ext), std::to_string(ext), ""});
        }

        for (const auto& cat : cats) {
            std::vector<std::string> who;
            v.clear();
            for (const auto& id : ids) {
                long long n = 0;
                for (const auto& r : recs)
                    if (r.year == y && listed(r, id) &&
                        std::find(r.cats.begin(), r.cats.end(), cat) != r.cats.end())
                        ++n;
                if (n == 0) continue;
                who.push_back(id);
                v.push_back({true, make(n, 1)});
            }
            emit(who, v, 8, "subject_output_count:" + cat, cat, y, raw);
        }
    }

    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.inst, a.order, a.cat, a.year) < std::tie(b.inst, b.order, b.cat, b.year);
    });
    for (const auto& r : rows)
        out += field(r.inst) + "," + field(r.metric) + "," + std::to_string(r.year) + "," +
               field(r.value_raw) + "," + field(r.value_reported) + "," + r.rank + "\n";
    return out;
}

std::string metrics_csv(std::string_view text, const Options& options) {
    std::istringstream in{std::string(text)};
    return metrics_csv(in, options);
}

}  // namespace bibscreen::oracle
