// Acceptance run: one line per criterion, exit 0 unless a criterion fails unexpectedly.

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "dlstrata/audit.hpp"
#include "dlstrata/charts.hpp"
#include "dlstrata/latcalc.hpp"
#include "dlstrata/strata.hpp"

using namespace dls;

namespace {

// pinned tolerances
constexpr std::uint64_t kStrataBudget = 100'000'000;
constexpr double kConfigSeconds = 300.0;  // per decomposition config
constexpr double kChartSeconds = 120.0;   // whole chart sweep
constexpr int kDichotomyTrials = 1000;
constexpr double kGuardRate = 0.05;
constexpr int kMaxChartEntries = 10;
constexpr int kMaxRzN = 12;

// Inclusion checks expected to fail as printed: the containment in the two
// "type h" bullets runs the other way (Lambda_1 <= Lambda_2).
const std::set<std::string> kKnownInclusionFailures = {"z_in_y_as_stated", "y_in_z_as_stated"};

struct Outcome {
    Status status = Status::Pass;
    std::string detail;
    bool known_deviation = false;
};

struct Criterion {
    int id;
    std::string title;
    std::vector<Report> reports;
    Outcome outcome;
};

const CheckResult* check(const Report& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::string fmt_seconds(double s) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(1) << s << " s";
    return o.str();
}

// first failing or inconclusive check, for the summary line
std::string first_problem(const std::vector<Report>& reps) {
    for (const auto& r : reps)
        for (const auto& c : r.checks)
            if (c.status != Status::Pass)
                return r.command + " " + r.config.dump() + ": " + c.name + " " + to_string(c.status);
    return "";
}

Status combine(const std::vector<Report>& reps) {
    Status s = Status::Pass;
    for (const auto& r : reps) {
        if (r.overall() == Status::Fail) return Status::Fail;
        if (r.overall() == Status::Inconclusive) s = Status::Inconclusive;
    }
    return s;
}

Report timed_verify(const StrataConfig& cfg) {
    VerifyOptions o;
    o.budget = kStrataBudget;
    return verify_decomposition(cfg, o);
}

Criterion symplectic() {
    Criterion c{1, "symplectic decomposition", {}, {}};
    double worst = 0;
    for (unsigned p : {3u, 5u})
        for (int t = 2; t <= 6; t += 2)
            for (int h = 0; h < t; h += 2)
                for (unsigned k : {1u, 2u}) {
                    StrataConfig cfg;
                    cfg.kind = CaseKind::Z;
                    cfg.t = t;
                    cfg.h = h;
                    cfg.p = p;
                    cfg.k = k;
                    c.reports.push_back(timed_verify(cfg));
                    worst = std::max(worst, c.reports.back().wall_seconds);
                }
    c.outcome.status = combine(c.reports);
    if (worst > kConfigSeconds) c.outcome.status = Status::Fail;
    c.outcome.detail = std::to_string(c.reports.size()) + " configs, slowest " + fmt_seconds(worst);
    return c;
}

Criterion orthogonal() {
    Criterion c{2, "orthogonal decomposition", {}, {}};
    int signed_top = 0, signed_wprime = 0;
    bool sign_ok = true;
    double worst = 0;
    for (int n = 1; n <= 8; ++n)
        for (int h = 0; h <= 2 * (n / 2); h += 2)
            for (int t = 0; t <= h; t += 2)
                for (unsigned k : {1u, 2u}) {
                    StrataConfig cfg;
                    cfg.kind = CaseKind::Y;
                    cfg.n = n;
                    cfg.h = h;
                    cfg.t = t;
                    cfg.k = k;
                    Report r = timed_verify(cfg);
                    worst = std::max(worst, r.wall_seconds);
                    if (cfg.signed_case() && t < h) {
                        const CheckResult* s = check(r, "sign_classes");
                        sign_ok = sign_ok && s && s->status == Status::Pass;
                        // h = n: only signed w labels; h = n - 2: signed w' labels in the index set
                        bool has_signed = false, only_w = true;
                        for (const auto& L : expected_labels(cfg)) {
                            if (L.sign != 0) has_signed = true;
                            if (h == n && L.kind != Kind::W) only_w = false;
                        }
                        sign_ok = sign_ok && has_signed && only_w;
                        (h == n ? signed_top : signed_wprime)++;
                    }
                    c.reports.push_back(std::move(r));
                }
    c.outcome.status = combine(c.reports);
    if (!sign_ok || signed_top == 0 || signed_wprime == 0 || worst > kConfigSeconds) c.outcome.status = Status::Fail;
    c.outcome.detail = std::to_string(c.reports.size()) + " configs, " + std::to_string(signed_top) +
                       " with h = n and " + std::to_string(signed_wprime) + " with h = n-2 signed, slowest " +
                       fmt_seconds(worst);
    return c;
}

Criterion linear() {
    Criterion c{3, "linear decomposition", {}, {}};
    bool all_w = true;
    for (unsigned p : {3u, 5u})
        for (int t2 = 0; t2 <= 8; t2 += 2)
            for (int t1 = t2; t1 - t2 <= 8; t1 += 2)
                for (int h = t2; h <= t1; h += 2)
                    for (unsigned k : {1u, 2u}) {
                        StrataConfig cfg;
                        cfg.kind = CaseKind::ZY;
                        cfg.t1 = t1;
                        cfg.t2 = t2;
                        cfg.h = h;
                        cfg.p = p;
                        cfg.k = k;
                        for (const auto& L : expected_labels(cfg)) all_w = all_w && L.kind == Kind::W;
                        Report r = timed_verify(cfg);
                        for (const auto& row : r.counts) all_w = all_w && row.label.rfind("w(", 0) == 0;
                        c.reports.push_back(std::move(r));
                    }
    c.outcome.status = combine(c.reports);
    if (!all_w) c.outcome.status = Status::Fail;
    c.outcome.detail = std::to_string(c.reports.size()) + " configs, all labels of kind w: " + (all_w ? "yes" : "no");
    return c;
}

Criterion weyl_criterion() {
    Criterion c{4, "Weyl audit", {}, {}};
    WeylAuditOptions o;
    o.max_t = 6;
    o.growth_level = 2;
    c.reports.push_back(weyl_audit(o));
    c.outcome.status = combine(c.reports);
    c.outcome.detail = "w' dimension realized as r-s-1 by both the DL formula and point-count growth";
    return c;
}

Criterion charts_criterion() {
    Criterion c{5, "chart counts, growth, smoothness, Gorenstein", {}, {}};
    c.reports.push_back(reconcile_sweep(kMaxChartEntries, 12));
    c.outcome.status = combine(c.reports);
    if (c.reports[0].wall_seconds > kChartSeconds) c.outcome.status = Status::Fail;
    c.outcome.detail = std::to_string(c.reports[0].counts.empty() ? 0 : c.reports[0].counts[0].count) +
                       " shapes with at most " + std::to_string(kMaxChartEntries) + " entries, q in {3, 5}, " +
                       fmt_seconds(c.reports[0].wall_seconds);
    return c;
}

Criterion rzdim_criterion() {
    Criterion c{6, "rz_dim against vertex types", {}, {}};
    Report r;
    r.command = "charts rzdim sweep";
    r.config = {{"max_n", kMaxRzN}};
    std::uint64_t checked = 0, bad = 0, printed_differs = 0;
    json witness, printed = json::array();
    for (int n = 1; n <= kMaxRzN; ++n)
        for (int h = 0; h <= 2 * (n / 2); h += 2)
            for (int eps : {1, -1}) {
                ++checked;
                const int d = rz_dim(n, h, eps), m = rz_dim_from_types(n, h, eps), lit = rz_dim_printed(n, h, eps);
                if (d != m && bad++ == 0) witness = {{"n", n}, {"h", h}, {"eps", eps}, {"rz_dim", d}, {"types", m}};
                if (lit != m) {
                    ++printed_differs;
                    printed.push_back({{"n", n}, {"h", h}, {"eps", eps}, {"printed", lit}, {"types", m}});
                }
            }
    json d = {{"checked", checked}, {"failures", bad}};
    if (bad) d["witness"] = witness;
    r.add_bool("rz_dim_equals_max_over_types", bad == 0, d);
    r.tables["printed_formula_differs"] = printed;
    r.counts.push_back({"parameter_sets", checked});
    c.reports.push_back(r);
    c.outcome.status = combine(c.reports);
    c.outcome.detail = std::to_string(checked) + " (n, h, eps), printed constants differ on " +
                       std::to_string(printed_differs);
    return c;
}

Criterion dichotomy_criterion(std::uint64_t seed) {
    Criterion c{7, "crucial dichotomy", {}, {}};
    DichotomyOptions o;
    o.seed = seed;
    o.trials = kDichotomyTrials;
    o.max_n = 4;
    c.reports.push_back(dichotomy_report(o));
    const auto* g = check(c.reports[0], "guard_rate");
    double rate = g ? g->data.value("rate", 1.0) : 1.0;
    c.outcome.status = combine(c.reports);
    if (rate >= kGuardRate) c.outcome.status = Status::Fail;
    std::ostringstream d;
    const auto* rnd = check(c.reports[0], "random");
    d << (rnd ? rnd->data.value("instances", 0) : 0) << " random instances, guard rate " << rate;
    c.outcome.detail = d.str();
    return c;
}

Criterion inclusions_criterion() {
    Criterion c{8, "lattice inclusions", {}, {}};
    InclusionOptions o;
    o.max_n = 4;
    o.p = 3;
    c.reports.push_back(inclusions_report(o));
    const Report& r = c.reports[0];
    bool unexpected = false;
    std::set<std::string> failing;
    for (const auto& ch : r.checks) {
        if (ch.status == Status::Fail) failing.insert(ch.name);
        if (ch.status != Status::Pass && !kKnownInclusionFailures.count(ch.name)) unexpected = true;
    }
    const json& alt = r.tables.at("containment_direction_swapped");
    const bool swapped_hold = alt.at("z_in_y_iff_type_h_and_contained").at("failures") == 0 &&
                              alt.at("y_in_z_iff_type_h_and_contained").at("failures") == 0;
    c.outcome.status = r.overall();
    if (failing.empty()) {
        c.outcome.detail = "all five bullets hold as stated";
    } else if (!unexpected && swapped_hold) {
        c.outcome.known_deviation = true;
        std::ostringstream d;
        d << "known deviation: the two type-h bullets fail as printed ("
          << check(r, "z_in_y_as_stated")->data.value("failures", 0) << " and "
          << check(r, "y_in_z_as_stated")->data.value("failures", 0)
          << " pairs) and hold with Lambda_1 <= Lambda_2; the other bullets and singleton worst points hold";
        c.outcome.detail = d.str();
    } else {
        c.outcome.detail = first_problem(c.reports);
    }
    return c;
}

std::vector<Criterion> suite(std::uint64_t seed, bool announce) {
    std::vector<std::function<Criterion()>> steps = {symplectic,      orthogonal,
                                                     linear,          weyl_criterion,
                                                     charts_criterion, rzdim_criterion,
                                                     [seed] { return dichotomy_criterion(seed); },
                                                     inclusions_criterion};
    std::vector<Criterion> out;
    for (auto& step : steps) {
        const auto t0 = std::chrono::steady_clock::now();
        out.push_back(step());
        if (out.back().outcome.status != Status::Pass && out.back().outcome.detail.find("known deviation") == std::string::npos)
            out.back().outcome.detail += "; first problem: " + first_problem(out.back().reports);
        if (announce) {
            const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::cerr << "  ran criterion " << out.back().id << " in " << fmt_seconds(s) << "\n";
        }
    }
    return out;
}

std::string stable_dump(const std::vector<Criterion>& cs) {
    json all = json::array();
    for (const auto& c : cs)
        for (const auto& r : c.reports) all.push_back(stable_json(r));
    return all.dump();
}

void print(const Criterion& c, std::ostream& out) {
    std::string tag = c.outcome.status == Status::Pass ? "PASS" : c.outcome.status == Status::Fail ? "FAIL" : "INCONCLUSIVE";
    out << "criterion " << c.id << " [" << tag << "] " << c.title << ": " << c.outcome.detail << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::uint64_t seed = 0;
    std::string json_out;
    app.add_option("--seed", seed, "seed for the randomized suites");
    app.add_option("--json", json_out, "write every stable report section to this file");
    CLI11_PARSE(app, argc, argv);

    const auto t0 = std::chrono::steady_clock::now();
    auto first = suite(seed, true);
    bool unexpected = false;
    for (const auto& c : first) {
        print(c, std::cout);
        std::cout.flush();
        if (c.outcome.status != Status::Pass && !c.outcome.known_deviation) unexpected = true;
    }

    std::cerr << "  second run for determinism\n";
    auto second = suite(seed, false);
    const std::string a = stable_dump(first), b = stable_dump(second);
    Criterion det{9, "determinism", {}, {}};
    det.outcome.status = a == b ? Status::Pass : Status::Fail;
    det.outcome.detail = std::to_string(a.size()) + " bytes of stable report sections, two runs " +
                         (a == b ? "byte-identical" : "differ");
    print(det, std::cout);
    if (det.outcome.status != Status::Pass) unexpected = true;

    if (!json_out.empty()) std::ofstream(json_out) << json::parse(a).dump(1) << "\n";
    std::cout << "total " << fmt_seconds(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count())
              << ", " << (unexpected ? "unexpected failures" : "no unexpected failures") << "\n";
    return unexpected ? 1 : 0;
}
