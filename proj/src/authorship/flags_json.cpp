#include <json.hpp>

#include "bibscreen/authorship.hpp"

namespace bibscreen::authorship {

// Evidence values are exact fractions written as "p" or "p/q".
std::string FlagRecord::to_json() const {
    nlohmann::ordered_json j;
    j["subject"] = subject;
    j["flag"] = std::string(flag_kind_name(flag));
    j["years"] = years;
    j["context"] = context;
    nlohmann::ordered_json e = nlohmann::ordered_json::object();
    for (const auto& [k, v] : evidence) e[k] = v.to_string();
    j["evidence"] = std::move(e);
    return j.dump();
}

std::string flags_jsonl(const std::vector<FlagRecord>& flags) {
    std::string out;
    for (const auto& f : flags) {
        out += f.to_json();
        out += '\n';
    }
    return out;
}

}  // namespace bibscreen::authorship
