#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace caliblab::cli {

inline constexpr int kSchemaVersion = 1;

struct ReportRecord {
    std::string id;
    std::string command;
    nlohmann::json inputs = nlohmann::json::object();
    std::map<std::string, double> values;
    bool pass = false;
    // Documented negative outcome: pass means the expected failure was reproduced.
    bool expected_fail = false;
    std::string note;
    double wall_ms = 0.0;
    std::string timestamp;

    bool operator==(const ReportRecord&) const = default;
};

nlohmann::json to_json(const ReportRecord& r);
ReportRecord record_from_json(const nlohmann::json& j);

// Fields that legitimately differ between two identical runs.
inline const std::vector<std::string> kVolatileFields{"wall_ms", "timestamp"};

void sort_records(std::vector<ReportRecord>& records);
void write_jsonl(std::ostream& os, const std::vector<ReportRecord>& records);
void write_csv(std::ostream& os, const std::vector<ReportRecord>& records);

std::string utc_timestamp();

}  // namespace caliblab::cli
