#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace dls {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolkitVersion = "0.1.0";

enum class Status { Pass, Fail, Inconclusive };
std::string to_string(Status s);
Status status_from_string(const std::string& s);

struct CheckResult {
    std::string name;
    Status status = Status::Pass;
    json data = json::object();  // a failing check carries a "witness" entry
};

struct CountRow {
    std::string label;
    std::uint64_t count = 0;
};

struct Report {
    std::string command;
    json config = json::object();
    std::vector<CountRow> counts;
    std::vector<CheckResult> checks;
    json tables = json::object();
    std::string version = kToolkitVersion;
    double wall_seconds = 0.0;

    void add(std::string name, Status st, json data = json::object());
    void add_bool(std::string name, bool ok, json data = json::object());
    // fail dominates inconclusive dominates pass
    Status overall() const;
    bool operator==(const Report& o) const;
};

enum class Format { Json, Csv, Md };
Format format_from_string(const std::string& s);

// Everything except wall time; identical inputs give identical bytes.
json stable_json(const Report& r);
json to_json(const Report& r);
Report report_from_json(const json& j);
std::string emit(const Report& r, Format f);

// 0 all pass, 1 any fail, 3 inconclusive without fail
int exit_code(const Report& r);

}  // namespace dls
