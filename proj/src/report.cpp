#include "dlstrata/report.hpp"

#include <sstream>
#include <stdexcept>

namespace dls {

std::string to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Inconclusive: return "inconclusive";
    }
    return "fail";
}

Status status_from_string(const std::string& s) {
    if (s == "pass") return Status::Pass;
    if (s == "fail") return Status::Fail;
    if (s == "inconclusive") return Status::Inconclusive;
    throw std::invalid_argument("unknown status: " + s);
}

void Report::add(std::string name, Status st, json data) {
    checks.push_back({std::move(name), st, std::move(data)});
}

void Report::add_bool(std::string name, bool ok, json data) {
    add(std::move(name), ok ? Status::Pass : Status::Fail, std::move(data));
}

Status Report::overall() const {
    bool inc = false;
    for (const auto& c : checks) {
        if (c.status == Status::Fail) return Status::Fail;
        if (c.status == Status::Inconclusive) inc = true;
    }
    return inc ? Status::Inconclusive : Status::Pass;
}

bool Report::operator==(const Report& o) const { return stable_json(*this) == stable_json(o); }

Format format_from_string(const std::string& s) {
    if (s == "json") return Format::Json;
    if (s == "csv") return Format::Csv;
    if (s == "md") return Format::Md;
    throw std::invalid_argument("unknown format: " + s);
}

json stable_json(const Report& r) {
    json j;
    j["command"] = r.command;
    j["version"] = r.version;
    j["config"] = r.config;
    j["status"] = to_string(r.overall());
    j["counts"] = json::array();
    for (const auto& c : r.counts) j["counts"].push_back({{"label", c.label}, {"count", c.count}});
    j["checks"] = json::array();
    for (const auto& c : r.checks)
        j["checks"].push_back({{"name", c.name}, {"status", to_string(c.status)}, {"data", c.data}});
    j["tables"] = r.tables;
    return j;
}

json to_json(const Report& r) {
    json j;
    j["stable"] = stable_json(r);
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

Report report_from_json(const json& j) {
    const json& s = j.contains("stable") ? j.at("stable") : j;
    Report r;
    r.command = s.at("command").get<std::string>();
    r.version = s.at("version").get<std::string>();
    r.config = s.at("config");
    for (const auto& c : s.at("counts"))
        r.counts.push_back({c.at("label").get<std::string>(), c.at("count").get<std::uint64_t>()});
    for (const auto& c : s.at("checks"))
        r.checks.push_back({c.at("name").get<std::string>(),
                            status_from_string(c.at("status").get<std::string>()), c.at("data")});
    r.tables = s.at("tables");
    if (j.contains("wall_seconds")) r.wall_seconds = j.at("wall_seconds").get<double>();
    return r;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char c : s) {
        if (c == '"') o += '"';
        o += c;
    }
    return o + "\"";
}

std::string md_cell(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    std::string o;
    for (char c : s) o += c == '|' ? std::string("\\|") : std::string(1, c);
    return o;
}

}  // namespace

std::string emit(const Report& r, Format f) {
    std::ostringstream os;
    switch (f) {
        case Format::Json:
            os << to_json(r).dump(2) << "\n";
            break;
        case Format::Csv:
            os << "label,count\n";
            for (const auto& c : r.counts) os << csv_field(c.label) << "," << c.count << "\n";
            break;
        case Format::Md: {
            os << "# " << r.command << "\n\n";
            os << "config: `" << r.config.dump() << "`\n\n";
            if (!r.counts.empty()) {
                os << "| stratum | count |\n|---|---|\n";
                for (const auto& c : r.counts) os << "| " << c.label << " | " << c.count << " |\n";
                os << "\n";
            }
            os << "| check | status | data |\n|---|---|---|\n";
            for (const auto& c : r.checks)
                os << "| " << c.name << " | " << to_string(c.status) << " | " << md_cell(c.data)
                   << " |\n";
            os << "\noverall: " << to_string(r.overall()) << "\n";
            break;
        }
    }
    return os.str();
}

int exit_code(const Report& r) {
    switch (r.overall()) {
        case Status::Pass: return 0;
        case Status::Fail: return 1;
        case Status::Inconclusive: return 3;
    }
    return 1;
}

}  // namespace dls
