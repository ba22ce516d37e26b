#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "bibscreen/error.hpp"
#include "bibscreen/synth.hpp"

namespace bibscreen::synth {

namespace {

constexpr const char* kCountries[] = {"SA", "IN", "EG", "AE", "LB", "IQ", "PK", "CN", "US", "DE"};

std::string numbered(const char* prefix, int i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%03d", prefix, i);
    return buf;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

std::vector<int> all_years(const YearRange& r) {
    std::vector<int> out;
    for (int y = r.first; y <= r.last; ++y) out.push_back(y);
    return out;
}

}  // namespace

GeneratorSpec planted_universe(std::uint64_t seed, const UniverseOptions& o) {
    const int roles = o.surges + o.near_misses + (o.hyperprolific_authors > 0) +
                      (o.external_authors > 0) + (o.cross_group_authors > 0 ? 3 : 0) + 1;
    if (o.institutions < roles)
        throw UsageError("planted universe needs at least " + std::to_string(roles) + " institutions");
    if (o.min_base_output < 1 || o.max_base_output < o.min_base_output)
        throw UsageError("planted universe: invalid base output range");

    std::mt19937_64 rng(seed ^ 0x5eedULL);
    GeneratorSpec s;
    s.seed = seed;
    const int span = s.years.last - s.years.first;
    for (int i = 0; i < o.institutions; ++i) {
        InstitutionSpec inst;
        inst.id = numbered("u", i + 1);
        inst.name = "Universe Institution " + std::to_string(i + 1);
        inst.country = kCountries[i % std::size(kCountries)];
        inst.base_output_per_year =
            o.min_base_output +
            static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(o.max_base_output - o.min_base_output + 1));
        // Period growth within 20% of the world figure of 8.7%.
        double period = 8.7 * (0.8 + 0.4 * unit(rng));
        inst.annual_growth_pct = (std::pow(1.0 + period / 100.0, 1.0 / span) - 1.0) * 100.0;
        inst.authors_pool_size = std::max<std::int64_t>(20, inst.base_output_per_year / 3);
        s.institutions.push_back(std::move(inst));
    }

    std::vector<std::size_t> order(s.institutions.size());
    std::iota(order.begin(), order.end(), 0);
    shuffle(order, rng);
    std::size_t next = 0;
    auto take = [&] { return s.institutions[order[next++]].id; };
    const std::vector<int> last{s.years.last};

    for (int k = 0; k < o.surges; ++k)
        s.anomalies.push_back({"surge-" + std::to_string(k + 1), PlantKind::output_surge, {take()},
                               {{"multiplier", 5}, {"first_author_share", 0.1}, {"intl_share", 0.9}},
                               last});
    for (int k = 0; k < o.near_misses; ++k)
        s.anomalies.push_back({"near-miss-" + std::to_string(k + 1), PlantKind::output_surge, {take()},
                               {{"multiplier", 4},
                                {"first_author_share", 1.0},
                                {"intl_share", 0.0},
                                {"expect_funnel", 0}},
                               last});
    if (o.hyperprolific_authors > 0)
        s.anomalies.push_back({"hyper-1", PlantKind::hyperprolific_author, {take()},
                               {{"authors", o.hyperprolific_authors}, {"yearly_count", 80}}, last});
    if (o.external_authors > 0)
        s.anomalies.push_back({"external-1", PlantKind::external_author, {take()},
                               {{"authors", o.external_authors},
                                {"records_per_author", 6},
                                {"secondary_fraction", 1.0}},
                               all_years(s.years)});
    if (o.cross_group_authors > 0) {
        std::vector<std::string> group{take(), take(), take()};
        std::sort(group.begin(), group.end());
        s.anomalies.push_back({"cross-1", PlantKind::cross_group_author, group,
                               {{"authors", o.cross_group_authors}, {"records_per_author", 24}},
                               all_years(s.years)});
        s.anomalies.push_back({"overlap-1", PlantKind::overlap_boost, group,
                               {{"records_per_year", 10}}, all_years(s.years)});
    }
    s.anomalies.push_back(
        {"inflation-1", PlantKind::multi_affiliation_inflation, {take()}, {{"share", 0.5}}, last});
    return s;
}

GeneratorSpec scale_spec(std::uint64_t seed, std::int64_t records, int institutions) {
    if (institutions < 10) throw UsageError("scale spec needs at least 10 institutions");
    if (records < 1) throw UsageError("scale spec needs a positive record count");
    std::mt19937_64 rng(seed ^ 0x5ca1eULL);
    GeneratorSpec s;
    s.seed = seed;
    const std::int64_t years = s.years.last - s.years.first + 1;
    const std::int64_t per = std::max<std::int64_t>(1, records / (years * institutions));
    for (int i = 0; i < institutions; ++i) {
        InstitutionSpec inst;
        inst.id = numbered("s", i + 1);
        inst.country = kCountries[i % std::size(kCountries)];
        // Spread sizes over 0.5x to 1.5x while keeping the mean at `per`.
        double f = 0.5 + static_cast<double>(i % 11) / 10.0;
        inst.base_output_per_year = std::max<std::int64_t>(1, std::llround(double(per) * f));
        inst.annual_growth_pct = 2.0 * unit(rng);
        inst.authors_pool_size = std::max<std::int64_t>(20, inst.base_output_per_year / 3);
        s.institutions.push_back(std::move(inst));
    }
    const std::vector<int> last{s.years.last};
    s.anomalies.push_back({"surge-1", PlantKind::output_surge, {s.institutions[3].id}, {}, last});
    s.anomalies.push_back({"surge-2", PlantKind::output_surge, {s.institutions[7].id}, {}, last});
    s.anomalies.push_back({"hyper-1", PlantKind::hyperprolific_author, {s.institutions[5].id},
                           {{"authors", 3}, {"yearly_count", 60}}, last});
    s.anomalies.push_back({"external-1", PlantKind::external_author, {s.institutions[9].id},
                           {{"authors", 10}, {"records_per_author", 6}, {"secondary_fraction", 1.0}},
                           all_years(s.years)});
    s.anomalies.push_back({"cross-1", PlantKind::cross_group_author,
                           {s.institutions[0].id, s.institutions[1].id, s.institutions[2].id},
                           {{"authors", 5}, {"records_per_author", 24}}, all_years(s.years)});
    return s;
}

}  // namespace bibscreen::synth
