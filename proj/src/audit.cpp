#include "dlstrata/audit.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include "dlstrata/strata.hpp"
#include "dlstrata/weyl.hpp"

namespace dls {

namespace {

struct Tally {
    std::uint64_t checked = 0, failures = 0;
    json witness;
    void check(bool ok, const json& w) {
        ++checked;
        if (!ok && failures++ == 0) witness = w;
    }
    json data() const {
        json d = {{"checked", checked}, {"failures", failures}};
        if (!witness.is_null()) d["witness"] = witness;
        return d;
    }
    bool ok() const { return failures == 0 && checked > 0; }
};

std::string show(const BasisVec& b) { return b.str(); }

// every element of W_I w W_J
std::set<std::vector<int>> double_coset(const WeylElem& w, const ParabolicIndex& I, const ParabolicIndex& J) {
    std::set<std::vector<int>> seen{w.image()};
    std::vector<WeylElem> todo{w};
    while (!todo.empty()) {
        WeylElem x = todo.back();
        todo.pop_back();
        auto push = [&](const WeylElem& y) {
            if (seen.insert(y.image()).second) todo.push_back(y);
        };
        for (int s : I.gens) push(WeylElem::simple(w.ctx(), s) * x);
        for (int s : J.gens) push(x * WeylElem::simple(w.ctx(), s));
    }
    return seen;
}

// growth of a label's point count in the extension degree at fixed q: the rational
// components do not depend on K, so log_q(N(K2) / N(K1)) / (K2 - K1) tends to the dimension
struct GrowthRun {
    int t, h;
    unsigned k1, k2;
};

}  // namespace

Report weyl_audit(const WeylAuditOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.command = "weyl audit";
    rep.config = {{"max_t", opt.max_t}, {"brute_rank", opt.brute_rank}, {"growth_level", opt.growth_level}};

    Tally len_w, reduced_w, reduced_wp, minimal, diagrams, dl_w, irreducible_top;
    json dl_wprime = json::array();
    std::map<std::string, int> wprime_dl;  // "t,r,s,h" -> dl_dimension

    for (int T = 1; T <= opt.max_t; ++T) {
        const WeylCtx C{WeylType::C, T, false};
        for (int h = 0; h < T; ++h)
            for (int r = h + 1; r <= T; ++r)
                for (int s = 0; s <= h; ++s) {
                    const json where = {{"t", T}, {"r", r}, {"s", s}, {"h", h}};
                    const ParabolicIndex I = stratum_index(C, r, s);
                    const WeylElem w = build_family(C, Family::W, {r, s, h});
                    len_w.check(length(w) == r + s, where);
                    reduced_w.check(length(w) == static_cast<int>(w.word().size()), where);
                    minimal.check(is_min_double_coset(w, I, I), where);
                    dl_w.check(dl_dimension(I, w) == r + s, where);
                    if (r == T && s == h) irreducible_top.check(irreducible(I, w), where);
                    for (const auto& [x, y] : diagram_action(T, Family::W, r, s, h))
                        diagrams.check(act(w, x) == y, {{"t", T}, {"r", r}, {"s", s}, {"h", h}, {"family", "w"},
                                                        {"vector", show(x)}, {"expected", show(y)},
                                                        {"got", show(act(w, x))}});
                    if (s < h) {
                        const WeylElem wp = build_family(C, Family::WPrime, {r, s, h});
                        reduced_wp.check(length(wp) == static_cast<int>(wp.word().size()) &&
                                             length(wp) == r - s - 1,
                                         where);
                        minimal.check(is_min_double_coset(wp, I, I), where);
                        const int d = dl_dimension(I, wp);
                        wprime_dl[std::to_string(T) + "," + std::to_string(r) + "," + std::to_string(s) + "," +
                                  std::to_string(h)] = d;
                        if (T <= 3) dl_wprime.push_back({{"t", T}, {"r", r}, {"s", s}, {"h", h}, {"dl_dimension", d},
                                                         {"letters", r - s - 1}, {"stated", r - s}});
                        for (const auto& [x, y] : diagram_action(T, Family::WPrime, r, s, h))
                            diagrams.check(act(wp, x) == y,
                                           {{"t", T}, {"r", r}, {"s", s}, {"h", h}, {"family", "wprime"},
                                            {"vector", show(x)}, {"expected", show(y)}, {"got", show(act(wp, x))}});
                    }
                }
    }
    rep.add_bool("length_w_equals_r_plus_s", len_w.ok(), len_w.data());
    rep.add_bool("w_reduced", reduced_w.ok(), reduced_w.data());
    rep.add_bool("wprime_reduced", reduced_wp.ok(), reduced_wp.data());
    rep.add_bool("double_coset_minimal", minimal.ok(), minimal.data());
    rep.add_bool("diagrams_match", diagrams.ok(), diagrams.data());
    rep.add_bool("dl_dimension_w", dl_w.ok(), dl_w.data());
    rep.add_bool("top_stratum_irreducible", irreducible_top.ok(), irreducible_top.data());
    rep.tables["wprime_dimensions"] = dl_wprime;

    // brute force at small rank: length is BFS distance, minimality is the coset minimum
    Tally brute_len, brute_min;
    for (WeylType ty : {WeylType::A, WeylType::B, WeylType::C, WeylType::D})
        for (int rk = ty == WeylType::D ? 2 : 1; rk <= opt.brute_rank; ++rk) {
            const WeylCtx ctx{ty, rk, false};
            const auto group = enumerate_group(ctx);
            for (const auto& [w, d] : group)
                brute_len.check(length(w) == d, {{"group", ctx.name()}, {"image", w.image()}, {"bfs", d}});
            for (unsigned mi = 0; mi < (1u << rk); ++mi)
                for (unsigned mj = 0; mj < (1u << rk); ++mj) {
                    ParabolicIndex I{ctx, {}}, J{ctx, {}};
                    for (int s = 1; s <= rk; ++s) {
                        if (mi >> (s - 1) & 1) I.gens.insert(s);
                        if (mj >> (s - 1) & 1) J.gens.insert(s);
                    }
                    std::map<std::vector<int>, int> len_of;
                    for (const auto& [w, d] : group) len_of[w.image()] = d;
                    for (const auto& [w, d] : group) {
                        int best = d;
                        for (const auto& img : double_coset(w, I, J)) best = std::min(best, len_of[img]);
                        brute_min.check(is_min_double_coset(w, I, J) == (best == d),
                                        {{"group", ctx.name()}, {"image", w.image()},
                                         {"I", std::vector<int>(I.gens.begin(), I.gens.end())},
                                         {"J", std::vector<int>(J.gens.begin(), J.gens.end())}});
                    }
                }
        }
    rep.add_bool("brute_force_length", brute_len.ok(), brute_len.data());
    rep.add_bool("brute_force_minimality", brute_min.ok(), brute_min.data());

    // w' dimension: DL formula against point-count growth
    std::vector<GrowthRun> runs;
    if (opt.growth_level >= 1) runs.push_back({4, 2, 2, 4});
    if (opt.growth_level >= 2) runs.push_back({6, 4, 2, 3});
    if (!runs.empty()) {
        json rows = json::array();
        bool agree = true, budget_hit = false;
        for (const auto& run : runs) {
            std::map<StratumLabel, std::uint64_t> c1, c2;
            try {
                for (unsigned k : {run.k1, run.k2}) {
                    StrataConfig cfg;
                    cfg.kind = CaseKind::Z;
                    cfg.n = run.t;
                    cfg.t = run.t;
                    cfg.h = run.h;
                    cfg.p = 3;
                    cfg.k = k;
                    (k == run.k1 ? c1 : c2) = stratum_counts(cfg, MemberRoute::Generator, opt.budget).counts;
                }
            } catch (const BudgetExceeded&) {
                budget_hit = true;
                continue;
            }
            const WeylCtx C{WeylType::C, run.t / 2, false};
            for (const auto& [L, n2] : c2) {
                if (L.kind != Kind::WPrime) continue;
                const auto it = c1.find(L);
                if (it == c1.end() || it->second == 0) continue;
                const double g = std::log(static_cast<double>(n2) / static_cast<double>(it->second)) /
                                 std::log(3.0) / static_cast<double>(run.k2 - run.k1);
                const int growth = static_cast<int>(std::lround(g));
                const int dl = dl_dimension(stratum_index(C, L.r, L.s), build_family(C, Family::WPrime, {L.r, L.s, run.h / 2}));
                agree = agree && growth == dl;
                rows.push_back({{"t", run.t}, {"h", run.h}, {"label", L.str()}, {"k1", run.k1}, {"k2", run.k2},
                                {"count_k1", it->second}, {"count_k2", n2}, {"growth", g},
                                {"growth_rounded", growth}, {"dl_dimension", dl}, {"stated", L.r - L.s}});
            }
        }
        json d = {{"rows", rows}};
        if (budget_hit) {
            d["reason"] = "point count budget exceeded";
            rep.add("wprime_dimension_growth", Status::Inconclusive, d);
        } else {
            if (!agree) d["witness"] = rows;
            rep.add_bool("wprime_dimension_growth", agree && !rows.empty(), d);
        }
    }
    rep.counts.push_back({"type_c_parameter_sets", len_w.checked});
    rep.counts.push_back({"diagram_arrows", diagrams.checked});
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace dls
