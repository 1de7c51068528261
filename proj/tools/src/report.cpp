#include "caliblab_cli/report.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <set>

namespace caliblab::cli {

nlohmann::json to_json(const ReportRecord& r) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["id"] = r.id;
    j["command"] = r.command;
    j["inputs"] = r.inputs;
    j["values"] = r.values;
    j["pass"] = r.pass;
    j["expected_fail"] = r.expected_fail;
    j["note"] = r.note;
    j["wall_ms"] = r.wall_ms;
    j["timestamp"] = r.timestamp;
    return j;
}

ReportRecord record_from_json(const nlohmann::json& j) {
    if (j.at("schema_version").get<int>() != kSchemaVersion)
        throw std::invalid_argument("unsupported report schema version");
    ReportRecord r;
    r.id = j.at("id").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.inputs = j.at("inputs");
    r.values = j.at("values").get<std::map<std::string, double>>();
    r.pass = j.at("pass").get<bool>();
    r.expected_fail = j.at("expected_fail").get<bool>();
    r.note = j.at("note").get<std::string>();
    r.wall_ms = j.at("wall_ms").get<double>();
    r.timestamp = j.at("timestamp").get<std::string>();
    return r;
}

void sort_records(std::vector<ReportRecord>& records) {
    std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
}

void write_jsonl(std::ostream& os, const std::vector<ReportRecord>& records) {
    for (const auto& r : records) os << to_json(r).dump() << '\n';
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<ReportRecord>& records) {
    std::set<std::string> keys;
    for (const auto& r : records)
        for (const auto& [k, v] : r.values) keys.insert(k);
    os << "schema_version,id,command,pass,expected_fail";
    for (const auto& k : keys) os << ',' << csv_field(k);
    os << ",note\n";
    for (const auto& r : records) {
        os << kSchemaVersion << ',' << csv_field(r.id) << ',' << r.command << ',' << (r.pass ? "true" : "false") << ','
           << (r.expected_fail ? "true" : "false");
        for (const auto& k : keys) {
            os << ',';
            if (auto it = r.values.find(k); it != r.values.end()) os << nlohmann::json(it->second).dump();
        }
        os << ',' << csv_field(r.note) << '\n';
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace caliblab::cli
