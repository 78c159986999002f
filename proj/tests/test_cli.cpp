#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dlstrata/cli.hpp"

using namespace dls;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "dlstrata");
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("report JSON round trip and emitters") {
    Report r;
    r.command = "x";
    r.config = {{"a", 1}};
    CHECK(json::parse(emit(r, Format::Json))["stable"]["counts"] == json::array());
    r.counts = {{"id(0,0)", 40}, {"w(1,0)", 240}};
    r.add("c1", Status::Pass);
    r.add("c2", Status::Inconclusive, {{"reason", "budget"}});
    r.wall_seconds = 1.5;
    Report back = report_from_json(json::parse(emit(r, Format::Json)));
    CHECK(back == r);
    std::istringstream csv(emit(r, Format::Csv));
    std::string line;
    int lines = 0;
    while (std::getline(csv, line)) ++lines;
    CHECK(lines == 1 + 2);
    CHECK(stable_json(r).contains("wall_seconds") == false);
}

TEST_CASE("exit codes follow the status lattice") {
    Report r;
    CHECK(exit_code(r) == 0);
    r.add("a", Status::Pass);
    CHECK(exit_code(r) == 0);
    r.add("b", Status::Inconclusive);
    CHECK(exit_code(r) == 3);
    r.add("c", Status::Fail, {{"witness", 1}});
    CHECK(exit_code(r) == 1);
    CHECK(r.overall() == Status::Fail);
}

TEST_CASE("prime powers") {
    CHECK(split_prime_power(9) == std::pair{3u, 2u});
    CHECK(split_prime_power(5) == std::pair{5u, 1u});
    CHECK_FALSE(split_prime_power(6).has_value());
    CHECK_FALSE(split_prime_power(1).has_value());
}

TEST_CASE("budget precedence") {
    ::unsetenv(kBudgetEnv);
    CHECK(resolve_budget(std::nullopt, 7) == 7);
    ::setenv(kBudgetEnv, "11", 1);
    CHECK(resolve_budget(std::nullopt, 7) == 11);
    CHECK(resolve_budget(13, 7) == 13);
    ::unsetenv(kBudgetEnv);
}

TEST_CASE("strata verify") {
    auto r = cli({"strata", "verify", "--case", "z", "--q", "3", "--k", "2", "--t", "4", "--h", "0", "--format", "json"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out)["stable"];
    std::set<std::string> names;
    for (const auto& c : j["checks"]) names.insert(c["name"].get<std::string>());
    CHECK(names.count("partition"));
    CHECK(names.count("top_closure_index_set"));
    CHECK(names.count("kr_refinement"));
}

TEST_CASE("usage errors") {
    auto r = cli({"strata", "verify", "--case", "z", "--q", "3", "--t", "3", "--h", "0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("even") != std::string::npos);
    CHECK(cli({"nope"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"strata", "verify", "--q", "6"}).code == 2);
    CHECK(cli({"charts", "rzdim", "--n", "5"}).code == 2);
    CHECK(cli({"charts", "reconcile", "--family", "z", "--n", "8", "--h", "4", "--t1", "2"}).code == 2);
    CHECK(cli({"--budget", "0", "strata", "count"}).code == 2);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("charts") {
    auto r = cli({"charts", "rzdim", "--n", "5", "--h", "0", "--format", "json"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out)["stable"];
    CHECK(j["counts"][0]["count"] == 2);
    auto s = cli({"charts", "reconcile", "--family", "zy", "--n", "8", "--h", "4", "--t1", "6", "--t2", "2"});
    CHECK(s.code == 0);
}

TEST_CASE("budget from the environment gives inconclusive") {
    ::setenv(kBudgetEnv, "5", 1);
    auto r = cli({"strata", "count", "--case", "z", "--k", "2", "--t", "4", "--h", "0"});
    ::unsetenv(kBudgetEnv);
    CHECK(r.code == 3);
}

TEST_CASE("classify from a file") {
    const auto path = std::filesystem::temp_directory_path() / "dlstrata_classify_test.json";
    auto cfg = strata_config_from_json({{"case", "z"}, {"t", 4}, {"h", 2}, {"q", 3}, {"k", 2}});
    auto I = Instance::make(cfg);
    json subs = json::array();
    std::map<std::string, int> want;
    std::uint64_t n = 0;
    for_each_member(I, MemberRoute::Generator, [&](const Subspace& U, std::uint64_t) {
        if (n++ % 5) return;
        subs.push_back(subspace_to_json(U));
        ++want[classify(I, U).str()];
    }, 10'000'000);
    {
        std::ofstream f(path);
        f << json{{"config", cfg.to_json()}, {"subspaces", subs}}.dump();
    }
    auto r = cli({"strata", "classify", "--input", path.string(), "--format", "json"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out)["stable"];
    std::map<std::string, int> got;
    for (const auto& c : j["counts"]) got[c["label"].get<std::string>()] = c["count"].get<int>();
    CHECK(got == want);
    CHECK(j["tables"]["classified"].size() == subs.size());

    // span(e_1, f_1) is not isotropic
    {
        json plane = {{"k", 2}, {"rows", {{{1, 0}, {0, 0}, {0, 0}, {0, 0}}, {{0, 0}, {0, 0}, {1, 0}, {0, 0}}}}};
        std::ofstream f(path);
        f << json{{"config", cfg.to_json()}, {"subspaces", {plane}}}.dump();
    }
    // members of the h = 2 case are lines
    CHECK(cli({"strata", "classify", "--input", path.string()}).code == 2);
    {
        json plane = {{"k", 2}, {"rows", {{{1, 0}, {0, 0}, {0, 0}, {0, 0}}, {{0, 0}, {0, 0}, {1, 0}, {0, 0}}}}};
        std::ofstream f(path);
        f << json{{"config", {{"case", "z"}, {"t", 4}, {"h", 0}, {"q", 3}, {"k", 2}}}, {"subspaces", {plane}}}.dump();
    }
    auto bad = cli({"strata", "classify", "--input", path.string(), "--format", "json"});
    CHECK(bad.code == 1);
    CHECK(cli({"strata", "classify", "--input", "/nonexistent/file.json"}).code == 2);
    std::filesystem::remove(path);
}

TEST_CASE("identical runs give identical stable JSON") {
    std::vector<std::string> a{"latcalc", "dichotomy", "--trials", "10", "--seed", "5", "--n", "3", "--skip-exhaustive",
                               "--format", "json"};
    auto x = cli(a), y = cli(a);
    CHECK(stable_json(report_from_json(json::parse(x.out))) == stable_json(report_from_json(json::parse(y.out))));
}
