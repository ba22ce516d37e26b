#include <functional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bibscreen/cli.hpp"
#include "bibscreen/error.hpp"
#include "bibscreen/io.hpp"

namespace bibscreen::cli {

using ojson = nlohmann::ordered_json;

namespace {

// Flag values collected before the config is assembled; applied last.
struct Overrides {
    std::vector<std::pair<std::string, ojson>> values;

    void set(std::string path, ojson v) { values.emplace_back(std::move(path), std::move(v)); }

    void apply(ojson& j) const {
        for (const auto& [path, v] : values) {
            ojson* node = &j;
            std::size_t start = 0;
            for (;;) {
                auto dot = path.find('.', start);
                auto key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
                if (dot == std::string::npos) {
                    (*node)[key] = v;
                    break;
                }
                if (!(*node)[key].is_object()) (*node)[key] = ojson::object();
                node = &(*node)[key];
                start = dot + 1;
            }
        }
    }
};

ojson scalar(const std::string& text) {
    ojson parsed = ojson::parse(text, nullptr, false);
    return parsed.is_discarded() || parsed.is_object() ? ojson(text) : parsed;
}

// Binds an option whose value lands at `path` only when it is given.
template <class T>
CLI::Option* bind(CLI::App* app, Overrides& ov, const std::string& flag, const std::string& path,
                  const std::string& help) {
    return app->add_option_function<T>(
        flag, [&ov, path](const T& v) { ov.set(path, ojson(v)); }, help);
}

CLI::Option* bind_list(CLI::App* app, Overrides& ov, const std::string& flag, const std::string& path,
                       const std::string& help) {
    return app
        ->add_option_function<std::vector<std::string>>(
            flag, [&ov, path](const std::vector<std::string>& v) { ov.set(path, ojson(v)); }, help)
        ->delimiter(',');
}

CLI::Option* bind_flag(CLI::App* app, Overrides& ov, const std::string& flag, const std::string& path,
                       const std::string& help) {
    return app->add_flag_callback(flag, [&ov, path] { ov.set(path, true); }, help);
}

void error_json(std::ostream& err, const char* kind, const std::string& message, int code) {
    ojson e;
    e["error"] = kind;
    e["message"] = message;
    e["exit_code"] = code;
    err << e.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::map<std::string, std::string>& env) {
    CLI::App app{"Institutional publication indicators and authorship screening"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_all_flag("--help-all");

    std::string config_path;
    if (auto it = env.find("BIBSCREEN_CONFIG"); it != env.end()) config_path = it->second;
    Overrides ov;
    std::vector<std::string> sets;
    app.add_option("-c,--config", config_path, "JSON config file (also BIBSCREEN_CONFIG)");
    app.add_option("--set", sets, "Override a config key: dotted.key=value (repeatable)");
    bind<std::string>(&app, ov, "-o,--output-dir", "output_dir", "Directory for output files");
    bind<std::string>(&app, ov, "-r,--registry", "registry", "Institution registry JSON");
    bind<std::string>(&app, ov, "--corpus", "corpus", "Canonical corpus JSONL");
    bind_list(&app, ov, "--study", "groups.study", "Study group ids (comma separated)");
    bind_list(&app, ov, "--control", "groups.control", "Control group ids (comma separated)");
    bind<int>(&app, ov, "--start-year", "funnel.start_year", "First comparison year");
    bind<int>(&app, ov, "--end-year", "funnel.end_year", "Last comparison year");
    bind<std::int64_t>(&app, ov, "--hyperprolific-threshold", "thresholds.hyperprolific",
                       "Records per year that make an author hyperprolific");

    std::map<std::string, std::function<void(const RunConfig&, std::ostream&)>> commands;

    auto* ingest = app.add_subcommand("ingest", "Normalize raw exports into a canonical corpus");
    commands["ingest"] = cmd_ingest;
    ingest->add_option_function<std::vector<std::string>>(
        "inputs", [&ov](const std::vector<std::string>& v) { ov.set("inputs", ojson(v)); },
        "Raw CSV or JSONL exports");
    bind<std::string>(ingest, ov, "--format", "input_format", "auto, csv or jsonl");
    ingest->add_option_function<std::vector<int>>(
        "--years", [&ov](const std::vector<int>& v) { ov.set("years", ojson(v)); },
        "Keep records in FIRST,LAST")
        ->expected(2)
        ->delimiter(',');

    auto* metrics = app.add_subcommand("metrics", "Indicator table for every institution and year");
    commands["metrics"] = cmd_metrics;
    bind_list(metrics, ov, "--formats", "table_formats", "csv and/or jsonl");

    auto* flags = app.add_subcommand("flags", "Authorship detector flags");
    commands["flags"] = cmd_flags;
    bind<std::int64_t>(flags, ov, "--external-min-pubs", "thresholds.external_min_pubs",
                       "Minimum records for an external-author flag");
    bind<std::int64_t>(flags, ov, "--cross-group-min-pubs", "thresholds.cross_group_min_pubs",
                       "Records above which a cross-group author is flagged");

    auto* network = app.add_subcommand("network", "Co-authorship network of a seed group");
    commands["network"] = cmd_network;
    bind<int>(network, ov, "--year", "network.year", "Network year (default: funnel end year)");
    bind_list(network, ov, "--seed-group", "network.seed_group", "Seed ids (default: study group)");
    bind<std::int64_t>(network, ov, "--min-articles", "network.min_articles", "External node threshold");
    bind<std::string>(network, ov, "--qualification", "network.qualification", "total_output or co_published");
    bind<std::string>(network, ov, "--export-format", "network.format", "csv, vosviewer or graphml");
    bind<std::uint64_t>(network, ov, "--clustering-seed", "network.clustering_seed", "Clustering seed");

    auto* screen = app.add_subcommand("screen", "Selection funnel with per-institution dossiers");
    commands["screen"] = cmd_screen;
    bind<std::int64_t>(screen, ov, "--top-n", "funnel.top_n_by_output", "Stage 1 size");
    bind<std::string>(screen, ov, "--growth-threshold", "funnel.growth_threshold_pct", "Growth percent");
    bind<std::string>(screen, ov, "--growth-multiple", "funnel.growth_multiple_of_world",
                      "Growth threshold as a multiple of world growth");
    bind<std::int64_t>(screen, ov, "--top-k", "funnel.top_k_rank", "Rank cut for stage 3");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with planted anomalies");
    commands["synth"] = cmd_synth;
    bind<std::string>(synth, ov, "--spec", "synth.spec", "Generator spec JSON");
    bind<std::string>(synth, ov, "--preset", "synth.preset", "planted_universe or scale");
    bind<std::uint64_t>(synth, ov, "--seed", "synth.seed", "Generator seed");
    bind<int>(synth, ov, "--surges", "synth.surges", "Planted surging institutions");
    bind<int>(synth, ov, "--institutions", "synth.institutions", "Institutions in the universe");
    bind<std::int64_t>(synth, ov, "--records", "synth.records", "Target records (scale preset)");
    bind_flag(synth, ov, "--oracle", "synth.oracle", "Also write the oracle indicator table");
    bind_flag(synth, ov, "--fixtures", "synth.fixtures", "Also write the transcribed fixture files");

    auto* report = app.add_subcommand("report", "Markdown and CSV report bundle");
    commands["report"] = cmd_report;
    bind_flag(report, ov, "--fixtures", "fixtures", "Render the transcribed fixture corpora");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        error_json(err, "usage", e.what(), 1);
        return 1;
    }

    try {
        std::string text = "{}";
        if (!config_path.empty()) {
            if (!std::filesystem::is_regular_file(config_path))
                throw UsageError("config file not found: " + config_path);
            text = io::read_file(config_path);
        }
        ojson j = ojson::parse(apply_env_overrides(text, env));
        Overrides generic;
        for (const auto& s : sets) {
            auto eq = s.find('=');
            if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got " + s);
            generic.set(s.substr(0, eq), scalar(s.substr(eq + 1)));
        }
        generic.apply(j);
        ov.apply(j);
        const RunConfig config = RunConfig::from_json(j.dump());
        for (const auto* sub : app.get_subcommands()) commands.at(sub->get_name())(config, out);
        return 0;
    } catch (const UsageError& e) {
        error_json(err, "usage", e.what(), 1);
        return 1;
    } catch (const DataError& e) {
        error_json(err, "data", e.what(), 2);
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        error_json(err, "data", e.what(), 2);
        return 2;
    }
}

}  // namespace bibscreen::cli
