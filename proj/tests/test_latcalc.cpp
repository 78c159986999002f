#include <doctest.h>

#include "dlstrata/latcalc.hpp"

using namespace dls;

namespace {

HermPtr space(unsigned p, unsigned s, int n, unsigned N = 4) { return HermSpace::standard(TruncRing::make(p, 1, s, N), n); }

bool alternating(const FieldCtx& F, const Mat& m) {
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            if (m(i, j) != F.neg(m(j, i)) || (i == j && m(i, i) != 0)) return false;
    return true;
}

bool symmetric(const Mat& m) {
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            if (m(i, j) != m(j, i)) return false;
    return true;
}

}  // namespace

TEST_CASE("truncated ring arithmetic") {
    auto R = TruncRing::make(3, 1, 2, 3);
    CHECK(R->len() == 6);
    const Elem pi = R->pi_pow(1);
    CHECK(R->conj(pi) == R->neg(pi));
    CHECK(R->valuation(R->mul(pi, R->pi_pow(2))) == 3);
    CHECK(R->valuation(R->zero()) == 6);
    Elem u = R->add(R->constant(2), pi);
    CHECK(R->mul(u, R->inv(u)) == R->constant(1));
    CHECK(R->sigma(R->sigma(u)) == u);
}

TEST_CASE("standard vertex lattices") {
    auto sp = space(3, 2, 2);
    auto L0 = TruncLattice::standard_vertex(sp, 0);
    auto L2 = TruncLattice::standard_vertex(sp, 2);
    CHECK(vertex_type(L0) == 0);
    CHECK(vertex_type(L2) == 2);
    CHECK(dual_sharp(L0) == L0);
    CHECK(dual_sharp(dual_sharp(L2)) == L2);
    // pi-modular: L# = pi^-1 L
    CHECK(dual_sharp(L2) == pi_inv(L2));
    CHECK(tau_stable(L0));
    CHECK(tau_stable(L2));
    CHECK(index_of(dual_sharp(L2), L2) == 2);

    auto sp4 = space(3, 2, 4);
    for (int t : {0, 2, 4}) CHECK(vertex_type(TruncLattice::standard_vertex(sp4, t)) == t);
    auto sp3 = space(5, 1, 3);
    for (int t : {0, 2}) CHECK(vertex_type(TruncLattice::standard_vertex(sp3, t)) == t);
}

TEST_CASE("lattice operations") {
    auto sp = space(3, 2, 4);
    auto A = TruncLattice::standard_vertex(sp, 2), B = TruncLattice::standard_vertex(sp, 4);
    CHECK(A.contains(B));
    CHECK(sum(A, B) == A);
    CHECK(intersect(A, B) == B);
    CHECK(dual_sharp(A).contains(A));
    CHECK(dual_sharp(intersect(A, B)) == sum(dual_sharp(A), dual_sharp(B)));
    CHECK(pi_contained(dual_sharp(A), A));
    CHECK(pi_mul(pi_inv(A)) == A);
}

TEST_CASE("lattices between pi L# and L#") {
    auto sp = space(3, 1, 2);
    auto L = TruncLattice::standard_vertex(sp, 2);
    auto top = dual_sharp(L);
    auto bot = pi_mul(top);
    std::uint64_t seen = 0;
    enumerate_between(bot, top, [](const TruncLattice&) { return true; }, [&](const TruncLattice&) { ++seen; });
    CHECK(seen == 6);  // subspaces of a plane over F_3: 1 + 4 + 1
    std::uint64_t same = 0;
    enumerate_between(top, top, [](const TruncLattice&) { return true; }, [&](const TruncLattice&) { ++same; });
    CHECK(same == 1);
}

TEST_CASE("induced forms") {
    auto sp = space(3, 2, 2);
    const auto& F = sp->R().F();
    auto f0 = induced_forms(TruncLattice::standard_vertex(sp, 0));
    CHECK(f0.symplectic.rows == 0);
    CHECK(f0.symmetric.rows == 2);
    auto f2 = induced_forms(TruncLattice::standard_vertex(sp, 2));
    CHECK(f2.symplectic.rows == 2);
    CHECK(f2.symmetric.rows == 0);
    auto sp4 = space(3, 2, 4);
    auto f = induced_forms(TruncLattice::standard_vertex(sp4, 2));
    CHECK(f.symplectic.rows == 2);
    CHECK(f.symmetric.rows == 2);
    CHECK(alternating(F, f.symplectic));
    CHECK(symmetric(f.symmetric));
    CHECK(rank(F, f.symplectic) == 2);
    CHECK(rank(F, f.symmetric) == 2);
}

TEST_CASE("unitary generators preserve the form") {
    for (int n : {2, 3, 4}) {
        auto R = TruncRing::make(3, 1, 2, 4);
        for (const auto& g : unitary_generators(R, n)) CHECK_NOTHROW(HermSpace::make(R, n, g.mat));
        std::mt19937_64 rng(11);
        for (int i = 0; i < 5; ++i) CHECK_NOTHROW(HermSpace::make(R, n, random_unitary(R, n, rng)));
    }
    auto R = TruncRing::make(3, 1, 1, 3);
    RMat bad = identity_rmat(*R, 2);
    bad[0][0] = R->constant(2);
    CHECK_THROWS_AS(HermSpace::make(R, 2, bad), LatticeError);
}

TEST_CASE("dichotomy at the worst point") {
    auto sp = space(3, 2, 4, 6);
    for (int h : {0, 2, 4}) {
        auto M = TruncLattice::standard_vertex(sp, h);
        auto r = crucial_dichotomy(M);
        CHECK(r.predicted == Dichotomy::Both);
        CHECK(r.c == 0);
        CHECK(r.d == 0);
        CHECK(r.h == h);
        CHECK(r.verified);
        CHECK(tau_chain(M).c == 0);
    }
}

TEST_CASE("dichotomy on every lattice between pi L0# and L0#, twisted tau") {
    auto R = TruncRing::make(3, 1, 2, 6);
    int caseZ = 0;
    for (const auto& g : unitary_generators(R, 2)) {
        auto sp = HermSpace::make(R, 2, g.mat);
        for (int t : {0, 2}) {
            auto L = TruncLattice::standard_vertex(sp, t);
            auto top = dual_sharp(L);
            enumerate_between(pi_mul(top), top, dichotomy_hypotheses, [&](const TruncLattice& M) {
                auto r = crucial_dichotomy(M);
                CHECK_MESSAGE(r.verified, r.failure);
                if (!dual_sharp(M).contains(tau_image(M))) {
                    ++caseZ;
                    CHECK(r.predicted != Dichotomy::CaseY);
                    CHECK(r.z_holds);
                    REQUIRE(r.type_z.has_value());
                    CHECK(*r.type_z >= r.h);
                }
            });
        }
    }
    CHECK(caseZ > 0);
}

TEST_CASE("dichotomy report, random only") {
    DichotomyOptions o;
    o.trials = 40;
    o.seed = 3;
    o.max_n = 3;
    o.exhaustive = false;
    auto rep = dichotomy_report(o);
    CHECK(rep.overall() != Status::Fail);
    CHECK(stable_json(rep) == stable_json(dichotomy_report(o)));
}

TEST_CASE("strata points and inclusions at n <= 2") {
    auto sp = space(3, 1, 2);
    auto L0 = TruncLattice::standard_vertex(sp, 0), L2 = TruncLattice::standard_vertex(sp, 2);
    auto z = z_points(L2, 2), y = y_points(L0, 0);
    REQUIRE(z.size() == 1);
    CHECK(z[0] == L2);
    REQUIRE(y.size() == 1);
    CHECK(y[0] == L0);

    InclusionOptions o;
    o.max_n = 2;
    auto rep = inclusions_report(o);
    for (const auto& c : rep.checks)
        if (c.name == "z_in_z_iff_contains" || c.name == "y_in_y_iff_contained" || c.name == "z_meets_y_iff_contained" ||
            c.name == "worst_points_singleton")
            CHECK_MESSAGE(c.status == Status::Pass, c.name);
    const auto& alt = rep.tables["containment_direction_swapped"];
    CHECK(alt["z_in_y_iff_type_h_and_contained"]["failures"] == 0);
    CHECK(alt["y_in_z_iff_type_h_and_contained"]["failures"] == 0);
}
