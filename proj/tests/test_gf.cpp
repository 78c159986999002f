#include <doctest.h>

#include <set>

#include "dlstrata/gf.hpp"

using namespace dls;

TEST_CASE("field construction and modulus validation") {
    auto f5 = FieldCtx::make(5, 1, 1);
    CHECK(f5->order() == 5);
    auto f9 = FieldCtx::make(3, 1, 2, {1, 0});  // x^2 + 1
    CHECK(f9->order() == 9);
    CHECK_THROWS_AS(FieldCtx::make(3, 1, 2, {2, 0}), FieldError);  // x^2 - 1
    CHECK_THROWS_AS(FieldCtx::make(4, 1, 1), FieldError);
}

TEST_CASE("x^2 + 1 has no root in F_3") {
    for (unsigned x = 0; x < 3; ++x) CHECK((x * x + 1) % 3 != 0);
    CHECK(is_irreducible(3, {1, 0, 1}));
    CHECK_FALSE(is_irreducible(3, {2, 0, 1}));
}

TEST_CASE("inverses") {
    auto f5 = FieldCtx::make(5, 1, 1);
    CHECK(f5->inv(2) == 3);
    CHECK(f5->inv(1) == 1);
    CHECK_THROWS_AS(f5->inv(0), FieldError);

    auto f9 = FieldCtx::make(3, 1, 2);
    const Elt g = f9->generator();
    CHECK(f9->inv(g) == f9->pow(g, 7));
    // against the full multiplication table
    for (Elt a = 1; a < 9; ++a) {
        int found = 0;
        for (Elt b = 1; b < 9; ++b)
            if (f9->mul(a, b) == 1) {
                ++found;
                CHECK(f9->inv(a) == b);
            }
        CHECK(found == 1);
    }
}

TEST_CASE("frobenius") {
    auto f9 = FieldCtx::make(3, 1, 2, {1, 0});
    const Elt i = 3;  // the class of x
    CHECK(f9->mul(i, i) == f9->neg(1));
    CHECK(f9->frob(i) == f9->neg(i));
    CHECK(f9->pow(i, 3) == f9->neg(i));
    for (Elt a : f9->base_elements()) CHECK(f9->frob(a) == a);

    auto f = FieldCtx::make(5, 1, 3);
    for (Elt a = 0; a < f->order(); ++a) {
        Elt b = a;
        for (unsigned j = 0; j < f->k(); ++j) b = f->frob(b);
        CHECK(b == a);
        CHECK(f->frob_inv(f->frob(a)) == a);
    }
}

TEST_CASE("field axioms on small fields") {
    for (auto [p, e, k] : {std::tuple{3u, 1u, 1u}, {5u, 1u, 1u}, {3u, 2u, 1u}, {3u, 1u, 3u}, {7u, 1u, 2u}}) {
        auto F = FieldCtx::make(p, e, k);
        const Elt n = static_cast<Elt>(F->order());
        for (Elt a = 0; a < n; ++a) {
            CHECK(F->add(a, F->neg(a)) == 0);
            for (Elt b = 0; b < n; ++b) {
                CHECK(F->add(a, b) == F->add(b, a));
                CHECK(F->mul(a, b) == F->mul(b, a));
                CHECK(F->frob(F->mul(a, b)) == F->mul(F->frob(a), F->frob(b)));
                CHECK(F->frob(F->add(a, b)) == F->add(F->frob(a), F->frob(b)));
            }
        }
        for (Elt a = 1; a < n; ++a) CHECK(F->mul(a, F->inv(a)) == 1);
    }
}

TEST_CASE("enumeration") {
    auto f3 = FieldCtx::make(3, 1, 1);
    CHECK(f3->enumerate() == std::vector<Elt>{0, 1, 2});
    auto f9 = FieldCtx::make(3, 1, 2);
    auto all = f9->enumerate();
    CHECK(all.size() == 9);
    CHECK(std::set<Elt>(all.begin(), all.end()).size() == 9);
    CHECK(FieldCtx::make(5, 1, 1)->enumerate() == FieldCtx::make(5, 1, 1)->enumerate());
    CHECK(f9->base_elements().size() == 3);
    CHECK(f9->subfield(2).size() == 9);
    CHECK(f9->subfield(1).size() == 3);
}

TEST_CASE("FieldElem refuses mixed contexts") {
    auto a = FieldCtx::make(3, 1, 1), b = FieldCtx::make(5, 1, 1);
    FieldElem x(a, 1), y(b, 1);
    CHECK_THROWS(x + y);
    CHECK((FieldElem(a, 2) * FieldElem(a, 2)) == FieldElem(a, 1));
    CHECK(inv(FieldElem(b, 2)) == FieldElem(b, 3));
}
