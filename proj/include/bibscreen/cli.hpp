#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "bibscreen/authorship.hpp"
#include "bibscreen/corpus.hpp"
#include "bibscreen/indicators.hpp"
#include "bibscreen/screening.hpp"

namespace bibscreen::cli {

struct NetworkSettings {
    std::optional<int> year;                       // defaults to the funnel end year
    std::vector<std::string> seed_group;           // empty: the study group
    std::int64_t min_articles = 91;
    std::string qualification = "total_output";    // or "co_published"
    std::string format = "vosviewer";              // csv, vosviewer, graphml
    std::uint64_t clustering_seed = 0;
};

struct SynthSettings {
    std::string spec;                      // generator spec file; empty: use the preset
    std::string preset = "planted_universe";  // or "scale"
    std::uint64_t seed = 1;
    int surges = 3;
    int institutions = 50;
    std::int64_t records = 100000;         // scale preset only
    bool oracle = false;                   // also write the oracle indicator table
    bool fixtures = false;                 // also write the transcribed fixture files
};

/// Every setting a command may read. Keys mirror the JSON config file.
struct RunConfig {
    std::vector<std::string> inputs;
    std::string corpus;
    std::string registry;
    std::string output_dir = "out";
    std::string input_format = "auto";
    std::optional<YearRange> years;
    screening::FunnelConfig funnel;
    std::vector<std::string> study;    // empty: derived from the funnel
    std::vector<std::string> control;
    indicators::WorldBaselines world;
    authorship::HyperprolificOptions hyperprolific;
    std::int64_t external_min_pubs = 2;
    std::int64_t cross_group_min_pubs = 10;
    authorship::SurgeOptions surge;
    screening::DossierConfig dossier;
    NetworkSettings network;
    SynthSettings synth;
    std::vector<std::string> table_formats{"csv"};  // csv, jsonl
    bool fixtures = false;  // report: render the transcribed fixtures

    /// Throws SpecError listing unknown keys and invalid values.
    static RunConfig from_json(std::string_view text);
    std::string to_json() const;
};

/// Applies BIBSCREEN_* variables to a JSON config. "__" separates nesting
/// levels and names are lower-cased: BIBSCREEN_FUNNEL__TOP_K_RANK=10 sets
/// funnel.top_k_rank. Values that parse as JSON are used as such, anything
/// else as a string.
std::string apply_env_overrides(std::string_view config_json,
                                const std::map<std::string, std::string>& env);

/// Snapshot of the process environment restricted to BIBSCREEN_* names.
std::map<std::string, std::string> environment();

/// Entry point behind the binary: 0 success, 1 usage or config error,
/// 2 data error. Errors are written to `err` as one JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::map<std::string, std::string>& env);

// Command bodies, callable once a RunConfig is settled.
void cmd_ingest(const RunConfig& config, std::ostream& out);
void cmd_metrics(const RunConfig& config, std::ostream& out);
void cmd_flags(const RunConfig& config, std::ostream& out);
void cmd_network(const RunConfig& config, std::ostream& out);
void cmd_screen(const RunConfig& config, std::ostream& out);
void cmd_synth(const RunConfig& config, std::ostream& out);
void cmd_report(const RunConfig& config, std::ostream& out);

/// Markdown tables and figure-footer lines for a corpus, plus CSV files
/// keyed by file name.
struct ReportBundle {
    std::string markdown;
    std::map<std::string, std::string> csv;
};

ReportBundle build_report(const Corpus& corpus, const RunConfig& config);
/// The same layout filled from the fixture corpora.
ReportBundle build_fixture_report(const RunConfig& config);

}  // namespace bibscreen::cli
