#include <doctest.h>

#include "dlstrata/strata.hpp"

using namespace dls;

namespace {

StrataConfig z(int t, int h, unsigned p, unsigned k) {
    StrataConfig c;
    c.kind = CaseKind::Z;
    c.t = t;
    c.h = h;
    c.p = p;
    c.k = k;
    return c;
}

const CheckResult* find(const Report& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("configuration preconditions") {
    CHECK_THROWS_AS(z(3, 0, 3, 1).validate(), StrataError);
    CHECK_THROWS_AS(z(4, 6, 3, 1).validate(), StrataError);
    CHECK_THROWS_AS(z(4, 0, 9, 1).validate(), StrataError);
    StrataConfig y;
    y.kind = CaseKind::Y;
    y.n = 4;
    y.h = 2;
    y.t = 4;
    CHECK_THROWS_AS(y.validate(), StrataError);
}

TEST_CASE("rational Lagrangians are the k = 1 members") {
    auto sc = stratum_counts(z(4, 0, 3, 1));
    CHECK(sc.total == 40);
    REQUIRE(sc.counts.size() == 1);
    CHECK(sc.counts.begin()->first.kind == Kind::Id);
}

TEST_CASE("symplectic t = 4, h = 0 over GF(9)") {
    auto sc = stratum_counts(z(4, 0, 3, 2));
    CHECK(sc.total == 280);
    CHECK(sc.counts.at({0, 0, Kind::Id, 0}) == 40);
    CHECK(sc.counts.at({1, 0, Kind::W, 0}) == 240);
    for (const auto& [L, c] : sc.counts) CHECK(L.kind != Kind::WPrime);
    auto rep = verify_decomposition(z(4, 0, 3, 2));
    CHECK(rep.overall() == Status::Pass);
}

TEST_CASE("orthogonal h = n: two equal sign classes of kind w") {
    StrataConfig c;
    c.kind = CaseKind::Y;
    c.n = 6;
    c.h = 6;
    c.t = 0;
    c.k = 2;
    auto sc = stratum_counts(c);
    std::uint64_t plus = 0, minus = 0;
    for (const auto& [L, n] : sc.counts) {
        CHECK(L.kind == Kind::W);
        (L.sign > 0 ? plus : minus) += n;
    }
    CHECK(plus == 280);
    CHECK(minus == 280);

    c.t = 2;
    auto rep = verify_decomposition(c);
    CHECK(rep.overall() == Status::Pass);
    REQUIRE(find(rep, "sign_classes"));
    CHECK(find(rep, "sign_classes")->status == Status::Pass);
}

TEST_CASE("linear case index set") {
    StrataConfig c;
    c.kind = CaseKind::ZY;
    c.t1 = 6;
    c.h = 4;
    c.t2 = 2;
    c.k = 2;
    std::set<StratumLabel> want{{2, 2, Kind::W, 0}, {3, 1, Kind::W, 0}};
    CHECK(expected_labels(c) == want);
    auto rep = verify_decomposition(c);
    CHECK(rep.overall() == Status::Pass);
}

TEST_CASE("classification of explicit subspaces") {
    auto cfg = z(4, 2, 3, 2);
    auto I = Instance::make(cfg);
    // span(e_1) is rational
    Mat m(1, 4);
    m(0, 0) = 1;
    Subspace U(I.space, 2, m);
    REQUIRE(member(I, U));
    CHECK(classify(I, U) == StratumLabel{1, 1, Kind::Id, 0});
    CHECK(kr_class(I, U) == Kind::Id);
    // kr class w exactly for kind w with s at the level, id for id, wprime otherwise
    auto sc = stratum_counts(cfg);
    for (const auto& [L, n] : sc.counts) {
        const Kind want = L.kind == Kind::Id ? Kind::Id : L.kind == Kind::W && L.s == cfg.H() ? Kind::W : Kind::WPrime;
        CHECK(predicted_kr(cfg, L) == want);
    }
    CHECK(sc.kr_mismatches == 0);
}

TEST_CASE("member routes agree") {
    for (auto cfg : {z(4, 0, 3, 2), z(4, 2, 3, 2), z(6, 2, 3, 1)}) {
        auto g = stratum_counts(cfg, MemberRoute::Generator);
        auto b = stratum_counts(cfg, MemberRoute::BruteForce);
        auto o = stratum_counts(cfg, MemberRoute::Orbit);
        CHECK(g.counts == b.counts);
        CHECK(g.counts == o.counts);
        CHECK(g.duplicates == 0);
        CHECK(g.equivariance_failures == 0);
        CHECK(g.kr_mismatches == 0);
    }
}

TEST_CASE("closure of the top label is the index set") {
    for (int t = 2; t <= 6; t += 2)
        for (int h = 0; h < t; h += 2) {
            auto cfg = z(t, h, 3, 1);
            const StratumLabel top{t / 2, h / 2, Kind::W, 0};
            CHECK(closure(cfg, top) == expected_labels(cfg));
            for (const auto& L : expected_labels(cfg))
                for (const auto& M : closure(cfg, L)) CHECK(label_dimension(cfg, M) <= label_dimension(cfg, L));
        }
}

TEST_CASE("witnesses realize every label") {
    auto cfg = z(6, 2, 3, 1);
    for (const auto& L : expected_labels(cfg)) {
        auto w = witness(cfg, L, 0);
        REQUIRE(w.has_value());
        auto wc = cfg;
        wc.k = w->degree;
        auto I = Instance::make(wc);
        auto U = subspace_from_json(I.space, subspace_to_json(w->U));
        CHECK(member(I, U));
        CHECK(classify(I, U) == L);
    }
}

TEST_CASE("subspace serialization round trip") {
    auto I = Instance::make(z(4, 0, 3, 2));
    std::uint64_t n = 0;
    for_each_member(I, MemberRoute::Generator, [&](const Subspace& U, std::uint64_t) {
        if (n++ % 17) return;
        CHECK(subspace_from_json(I.space, subspace_to_json(U)) == U);
    }, 10'000'000);
    CHECK(n == 280);
}

TEST_CASE("budget exhaustion is reported inconclusive") {
    VerifyOptions o;
    o.budget = 5;
    auto rep = count_report(z(4, 0, 3, 2), o);
    CHECK(rep.overall() == Status::Inconclusive);
}
