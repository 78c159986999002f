#include <doctest.h>

#include "dlstrata/space.hpp"

using namespace dls;

namespace {

Subspace span(const SpacePtr& sp, std::vector<std::vector<Elt>> rows, unsigned k = 1) {
    Mat m(0, sp->dim());
    for (auto& r : rows) m.append_row(r.data());
    return Subspace(sp, k, m);
}

}  // namespace

TEST_CASE("standard forms") {
    auto F = FieldCtx::make(3, 1, 1);
    auto sp = FormedSpace::build(F, FormKind::Symplectic, 4);
    // e1 e2 f1 f2
    CHECK(sp->form(Mat::identity(4).row(0), Mat::identity(4).row(2)) == 1);
    CHECK(sp->form(Mat::identity(4).row(2), Mat::identity(4).row(0)) == F->neg(1));
    CHECK(sp->form(Mat::identity(4).row(0), Mat::identity(4).row(1)) == 0);
    auto odd = FormedSpace::build(F, FormKind::SymOdd, 5);
    CHECK(odd->gram()(4, 4) == 1);
    CHECK_THROWS_AS(FormedSpace::build(F, FormKind::Symplectic, 3), SpaceError);
}

TEST_CASE("phi on subspaces") {
    auto F = FieldCtx::make(3, 1, 2);
    auto sp = FormedSpace::build(F, FormKind::SymSplit, 4);
    auto U = span(sp, {{1, 2, 0, 1}}, 2);
    CHECK(apply_phi(U) == U);
    CHECK(is_phi_stable(U));
    auto V = span(sp, {{1, F->generator(), 0, 0}}, 2);
    CHECK(apply_phi(apply_phi(V)) == V);
    CHECK(apply_phi_inv(apply_phi(V)) == V);

    auto ns = FormedSpace::build(F, FormKind::SymNonsplit, 4);
    // the last e and f are swapped by phi
    CHECK(apply_phi(span(ns, {{0, 1, 0, 0}}, 2)) == span(ns, {{0, 0, 0, 1}}, 2));
}

TEST_CASE("sum, intersection, perp") {
    auto F = FieldCtx::make(3, 1, 1);
    auto sp = FormedSpace::build(F, FormKind::Symplectic, 4);
    auto a = span(sp, {{1, 0, 0, 0}}), b = span(sp, {{0, 1, 0, 0}});
    CHECK(sum(a, a) == a);
    CHECK(intersect(a, a) == a);
    CHECK(sum(a, b).dim() == 2);
    CHECK(intersect(a, b).dim() == 0);
    CHECK(perp(Subspace::full(sp, 1)).dim() == 0);
    CHECK(perp(a) == span(sp, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}));
}

TEST_CASE("isotropy") {
    auto F = FieldCtx::make(3, 1, 1);
    auto symp = FormedSpace::build(F, FormKind::Symplectic, 4);
    CHECK(is_isotropic(span(symp, {{1, 2, 1, 1}})));
    auto split = FormedSpace::build(F, FormKind::SymSplit, 4);
    CHECK_FALSE(is_isotropic(span(split, {{1, 0, 1, 0}})));
    for (auto kind : {FormKind::Symplectic, FormKind::SymSplit, FormKind::SymOdd}) {
        auto sp = FormedSpace::build(F, kind, kind == FormKind::SymOdd ? 5 : 4);
        CHECK(is_isotropic(span(sp, kind == FormKind::SymOdd ? std::vector<std::vector<Elt>>{{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}}
                                                             : std::vector<std::vector<Elt>>{{1, 0, 0, 0}, {0, 1, 0, 0}})));
    }
}

TEST_CASE("enumeration counts match exhaustive oracles") {
    auto F = FieldCtx::make(3, 1, 1);
    auto plane = FormedSpace::build(F, FormKind::None, 2);
    CHECK(enumerate_subspaces(plane, 1, 1, false, [](const Subspace&) { return true; }) == 4);
    auto symp = FormedSpace::build(F, FormKind::Symplectic, 4);
    CHECK(enumerate_subspaces(symp, 2, 1, true, [](const Subspace&) { return true; }) == 40);
    CHECK((3 + 1) * (9 + 1) == 40);
    auto flat = FormedSpace::build(F, FormKind::None, 4);
    CHECK(enumerate_subspaces(flat, 2, 1, false, [](const Subspace&) { return true; }) == 130);
    CHECK(gaussian_binomial(4, 2, 3) == 130);
    CHECK(gaussian_binomial(7, 0, 5) == 1);
    CHECK(count_oracle(symp, 2, 1, true) == 40);
}

TEST_CASE("enumeration agrees with the count oracle") {
    for (auto [p, k] : {std::pair{3u, 1u}, {5u, 1u}, {3u, 2u}}) {
        auto F = FieldCtx::make(p, 1, k);
        for (auto [kind, dim] : {std::pair{FormKind::Symplectic, 4u}, {FormKind::SymSplit, 4u},
                                 {FormKind::SymOdd, 5u}, {FormKind::None, 3u}})
            for (std::size_t d = 1; d <= dim / 2; ++d) {
                auto sp = FormedSpace::build(F, kind, dim);
                const bool iso = kind != FormKind::None;
                auto oracle = count_oracle(sp, d, k, iso);
                if (!oracle) continue;
                std::uint64_t distinct = 0;
                std::vector<Subspace> seen;
                auto n = enumerate_subspaces(sp, d, k, iso, [&](const Subspace& U) {
                    CHECK(U.dim() == d);
                    if (iso) CHECK(is_isotropic(U));
                    ++distinct;
                    return true;
                });
                CHECK(n == *oracle);
                CHECK(distinct == *oracle);
            }
    }
}

TEST_CASE("budget") {
    auto F = FieldCtx::make(5, 1, 1);
    auto sp = FormedSpace::build(F, FormKind::None, 6);
    CHECK_THROWS_AS(enumerate_subspaces(sp, 3, 1, false, [](const Subspace&) { return true; }, 10),
                    BudgetExceeded);
}
