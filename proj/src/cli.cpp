#include "dlstrata/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dlstrata/audit.hpp"
#include "dlstrata/charts.hpp"
#include "dlstrata/gf.hpp"
#include "dlstrata/latcalc.hpp"
#include "dlstrata/weyl.hpp"

namespace dls {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

FormKind parse_form(const std::string& s) {
    if (s == "split") return FormKind::SymSplit;
    if (s == "nonsplit" || s == "non-split") return FormKind::SymNonsplit;
    return form_kind_from_string(s);
}

std::pair<unsigned, unsigned> prime_power_or_throw(std::uint64_t q) {
    auto pe = split_prime_power(q);
    if (!pe) throw UsageError("q = " + std::to_string(q) + " is not a prime power");
    return *pe;
}

// Flags shared by the strata subcommands.
struct StrataFlags {
    std::string kind = "z";
    std::uint64_t q = 3;
    unsigned k = 1;
    int n = 0, h = 0, t = 0, t1 = 0, t2 = 0;
    std::string form;
    std::uint64_t seed = 0;
    std::string route = "generator";
    bool no_cross_check = false;
    std::string input;

    void attach(CLI::App* app, bool with_input) {
        app->add_option("--case", kind, "z, y or zy")->check(CLI::IsMember({"z", "y", "zy"}));
        app->add_option("--q", q, "residue field size (prime power, odd)");
        app->add_option("--k", k, "degree of the point field over GF(q)");
        app->add_option("--n", n, "hermitian dimension (Y case)");
        app->add_option("--h", h, "type of the worst-point lattice");
        app->add_option("--t", t, "vertex lattice type (Z and Y cases)");
        app->add_option("--t1", t1, "larger type (ZY case)");
        app->add_option("--t2", t2, "smaller type (ZY case)");
        app->add_option("--form", form, "Y case with even n-t: split or nonsplit");
        app->add_option("--seed", seed, "seed for witness searches");
        app->add_option("--route", route, "member enumeration: generator, brute-force or orbit");
        app->add_flag("--no-cross-check", no_cross_check, "skip the second member route");
        if (with_input) app->add_option("--input", input, "JSON file of subspaces")->required();
    }

    StrataConfig config() const {
        StrataConfig c;
        c.kind = case_from_string(kind);
        auto [p, e] = prime_power_or_throw(q);
        c.p = p;
        c.e = e;
        c.k = k;
        c.n = n;
        c.h = h;
        c.t = t;
        c.t1 = t1;
        c.t2 = t2;
        if (!form.empty()) c.form = parse_form(form);
        c.validate();
        return c;
    }

    VerifyOptions options(std::uint64_t budget) const {
        VerifyOptions o;
        o.budget = budget;
        o.seed = seed;
        o.route = route_from_string(route);
        o.cross_check = !no_cross_check;
        return o;
    }
};

Report classify_report(const StrataConfig& flag_cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
    StrataConfig cfg = flag_cfg;
    json subs = doc;
    if (doc.is_object() && doc.contains("subspaces")) {
        if (doc.contains("config")) cfg = strata_config_from_json(doc["config"]);
        subs = doc["subspaces"];
    }
    if (subs.is_object()) subs = json::array({subs});
    if (!subs.is_array()) throw UsageError(path + ": expected a subspace, an array, or {config, subspaces}");

    const Instance I = Instance::make(cfg);
    Report r;
    r.command = "strata classify";
    r.config = cfg.to_json();
    r.config["input"] = path;
    std::map<StratumLabel, std::uint64_t> tally;
    json rows = json::array();
    std::uint64_t bad = 0;
    json first_bad;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        Subspace U;
        try {
            U = subspace_from_json(I.space, subs[i]);
        } catch (const std::exception& e) {
            throw UsageError("subspace " + std::to_string(i) + ": " + e.what());
        }
        if (!member(I, U)) {
            if (bad++ == 0) first_bad = {{"index", i}, {"subspace", subs[i]}};
            rows.push_back({{"index", i}, {"member", false}});
            continue;
        }
        const StratumLabel L = classify(I, U);
        ++tally[L];
        rows.push_back({{"index", i},
                        {"member", true},
                        {"label", L.str()},
                        {"r", L.r},
                        {"s", L.s},
                        {"kind", to_string(L.kind)},
                        {"sign", L.sign},
                        {"kr", to_string(kr_class(I, U))}});
    }
    for (const auto& [L, c] : tally) r.counts.push_back({L.str(), c});
    json d = {{"checked", subs.size()}, {"non_members", bad}};
    if (bad) d["witness"] = first_bad;
    r.add_bool("inputs_are_members", bad == 0, d);
    r.tables["classified"] = rows;
    return r;
}

int emit_report(const Report& r, const std::string& fmt, std::ostream& out) {
    out << emit(r, format_from_string(fmt));
    return exit_code(r);
}

}  // namespace

std::optional<std::pair<unsigned, unsigned>> split_prime_power(std::uint64_t q) {
    if (q < 2) return std::nullopt;
    for (std::uint64_t p = 2; p * p <= q; ++p) {
        if (q % p) continue;
        unsigned e = 0;
        while (q % p == 0) {
            q /= p;
            ++e;
        }
        if (q != 1) return std::nullopt;
        return std::make_pair(static_cast<unsigned>(p), e);
    }
    return std::make_pair(static_cast<unsigned>(q), 1u);
}

std::uint64_t resolve_budget(std::optional<std::uint64_t> flag, std::uint64_t fallback) {
    if (flag) {
        if (*flag == 0) throw UsageError("budget must be positive");
        return *flag;
    }
    if (const char* env = std::getenv(kBudgetEnv); env && *env) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (*end != '\0' || v == 0) throw UsageError(std::string(kBudgetEnv) + " must be a positive integer");
        return v;
    }
    return fallback;
}

StrataConfig strata_config_from_json(const json& j) {
    StrataConfig c;
    c.kind = case_from_string(j.value("case", std::string("z")));
    c.n = j.value("n", 0);
    c.h = j.value("h", 0);
    c.t = j.value("t", 0);
    c.t1 = j.value("t1", 0);
    c.t2 = j.value("t2", 0);
    if (j.contains("p")) {
        c.p = j["p"].get<unsigned>();
        c.e = j.value("e", 1u);
    } else {
        auto [p, e] = prime_power_or_throw(j.value("q", std::uint64_t{3}));
        c.p = p;
        c.e = e;
    }
    c.k = j.value("k", 1u);
    if (j.contains("form")) {
        const FormKind f = parse_form(j["form"].get<std::string>());
        // echoed configs carry the derived form, which is only an override for even Y
        if (f == FormKind::SymSplit || f == FormKind::SymNonsplit) c.form = f;
    }
    c.validate();
    return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-field strata, Weyl-group and lattice checks"};
    // --h is a parameter, so help is long-form only; global options may follow subcommands
    app.set_help_flag("--help", "print help");
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolkitVersion);

    std::string fmt = "md";
    std::optional<std::uint64_t> budget;
    app.add_option("--format", fmt, "json, csv or md")->check(CLI::IsMember({"json", "csv", "md"}));
    app.add_option("--budget", budget, std::string("enumeration budget (overrides ") + kBudgetEnv + ")");

    auto* strata = app.add_subcommand("strata", "subspace stratifications");
    strata->require_subcommand(1);
    StrataFlags sv, sc, scl;
    auto* s_verify = strata->add_subcommand("verify", "partition, index set, closure and KR checks");
    sv.attach(s_verify, false);
    auto* s_count = strata->add_subcommand("count", "per-label point counts");
    sc.attach(s_count, false);
    auto* s_classify = strata->add_subcommand("classify", "label the subspaces in a file");
    scl.attach(s_classify, true);

    auto* weyl = app.add_subcommand("weyl", "Weyl-group calculus");
    weyl->require_subcommand(1);
    WeylAuditOptions wopt;
    auto* w_audit = weyl->add_subcommand("audit", "lengths, minimality, diagrams and DL dimensions");
    w_audit->add_option("--max-t", wopt.max_t, "largest hatted rank");
    w_audit->add_option("--brute-rank", wopt.brute_rank, "rank bound for brute-force cross-checks");
    w_audit->add_option("--growth-level", wopt.growth_level, "0 none, 1 C2, 2 adds C3");

    auto* charts = app.add_subcommand("charts", "local chart counts and dimensions");
    charts->require_subcommand(1);
    std::string family;
    ChartSpec cs;
    std::uint64_t chart_q = 3;
    int max_entries = 10, max_n = 12;
    auto* c_rec = charts->add_subcommand("reconcile", "chart counts against closed forms and predicates");
    c_rec->add_option("--family", family, "z, y, zy or pimodular; omit for the full sweep");
    c_rec->add_option("--n", cs.n);
    c_rec->add_option("--h", cs.h);
    c_rec->add_option("--t1", cs.t1);
    c_rec->add_option("--t2", cs.t2);
    c_rec->add_option("--q", chart_q, "prime");
    c_rec->add_option("--max-entries", max_entries, "sweep: matrix entry bound");
    c_rec->add_option("--max-n", max_n, "sweep: largest n");
    int rz_n = 0, rz_h = 0, rz_eps = 1;
    auto* c_rz = charts->add_subcommand("rzdim", "dimension of the reduced locus");
    c_rz->add_option("--n", rz_n)->required();
    c_rz->add_option("--h", rz_h)->required();
    c_rz->add_option("--eps", rz_eps, "+1 or -1");

    auto* lat = app.add_subcommand("latcalc", "truncated lattice calculus");
    lat->require_subcommand(1);
    DichotomyOptions dopt;
    bool skip_exhaustive = false;
    auto* l_dich = lat->add_subcommand("dichotomy", "crucial dichotomy on exhaustive and random instances");
    l_dich->add_option("--trials", dopt.trials, "random instances wanted");
    l_dich->add_option("--seed", dopt.seed);
    l_dich->add_option("--n", dopt.max_n, "largest hermitian dimension");
    l_dich->add_option("--N", dopt.N, "truncation: the ring is modulo pi^(2N)");
    l_dich->add_flag("--skip-exhaustive", skip_exhaustive);
    InclusionOptions iopt;
    auto* l_inc = lat->add_subcommand("inclusions", "Z and Y strata inclusions on enumerated families");
    l_inc->add_option("--n", iopt.max_n, "largest hermitian dimension");
    l_inc->add_option("--q", iopt.p, "prime residue field size");

    std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rev.begin(), rev.end());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion& e) {
        out << kToolkitVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        if (*s_verify) {
            const auto cfg = sv.config();
            return emit_report(verify_decomposition(cfg, sv.options(resolve_budget(budget, 10'000'000))), fmt, out);
        }
        if (*s_count) {
            const auto cfg = sc.config();
            return emit_report(count_report(cfg, sc.options(resolve_budget(budget, 10'000'000))), fmt, out);
        }
        if (*s_classify) return emit_report(classify_report(scl.config(), scl.input), fmt, out);
        if (*w_audit) {
            wopt.budget = resolve_budget(budget, wopt.budget);
            if (wopt.max_t < 1 || wopt.brute_rank < 1) throw UsageError("ranks must be positive");
            return emit_report(weyl_audit(wopt), fmt, out);
        }
        if (*c_rec) {
            const std::uint64_t b = resolve_budget(budget, 100'000'000);
            if (family.empty()) return emit_report(reconcile_sweep(max_entries, max_n, b), fmt, out);
            cs.family = chart_family_from_string(family);
            if (!is_prime(chart_q)) throw UsageError("charts need a prime q");
            cs.q = static_cast<unsigned>(chart_q);
            return emit_report(reconcile(cs, b), fmt, out);
        }
        if (*c_rz) return emit_report(rzdim_report(rz_n, rz_h, rz_eps), fmt, out);
        if (*l_dich) {
            dopt.budget = resolve_budget(budget, dopt.budget);
            dopt.exhaustive = !skip_exhaustive;
            if (dopt.trials < 0 || dopt.max_n < 2 || dopt.N < 2) throw UsageError("need trials >= 0, n >= 2, N >= 2");
            return emit_report(dichotomy_report(dopt), fmt, out);
        }
        if (*l_inc) {
            iopt.budget = resolve_budget(budget, iopt.budget);
            if (!is_prime(iopt.p) || iopt.p == 2) throw UsageError("inclusions need an odd prime q");
            if (iopt.max_n < 1) throw UsageError("n must be positive");
            return emit_report(inclusions_report(iopt), fmt, out);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const StrataError& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return kUsageError;
    } catch (const ChartError& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return kUsageError;
    } catch (const SpaceError& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return kUsageError;
    } catch (const FieldError& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return kUsageError;
    } catch (const WeylError& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return kUsageError;
    } catch (const LatticeError& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kUsageError;
    }
    err << "unknown command\n";
    return kUsageError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace dls
