#include <doctest.h>

#include <algorithm>

#include "dlstrata/weyl.hpp"

using namespace dls;

TEST_CASE("words and lengths") {
    const WeylCtx C2{WeylType::C, 2, false};
    CHECK(from_word(C2, {}).is_identity());
    CHECK(length(WeylElem::identity(C2)) == 0);
    int longest = 0;
    auto group = enumerate_group(C2);
    CHECK(group.size() == 8);
    for (const auto& [w, d] : group) longest = std::max(longest, length(w));
    CHECK(longest == 4);
}

TEST_CASE("length equals breadth-first distance") {
    for (auto ctx : {WeylCtx{WeylType::A, 3, false}, WeylCtx{WeylType::B, 3, false}, WeylCtx{WeylType::C, 3, false},
                     WeylCtx{WeylType::D, 3, false}, WeylCtx{WeylType::D, 4, false}}) {
        for (const auto& [w, d] : enumerate_group(ctx)) {
            CHECK(length(w) == d);
            auto red = reduced_word(w);
            CHECK(static_cast<int>(red.size()) == d);
            CHECK(from_word(ctx, red) == w);
            CHECK(length(w.inverse()) == d);
            for (int s = 1; s <= ctx.rank; ++s) {
                const auto sw = WeylElem::simple(ctx, s) * w;
                CHECK(is_left_descent(w, s) == (length(sw) < d));
                const auto ws = w * WeylElem::simple(ctx, s);
                CHECK(is_right_descent(w, s) == (length(ws) < d));
            }
        }
    }
}

TEST_CASE("w families in type C") {
    const WeylCtx C2{WeylType::C, 2, false};
    CHECK(family_word(C2, Family::WLambda, {.h = 1}) == std::vector<int>{1, 2, 1});
    CHECK(length(build_family(C2, Family::WLambda, {.h = 1})) == 3);
    CHECK(family_word(C2, Family::WLambdaPrime, {.h = 1}) == std::vector<int>{1});
    for (int T = 1; T <= 5; ++T) {
        const WeylCtx C{WeylType::C, T, false};
        for (int h = 0; h < T; ++h) {
            const auto w = build_family(C, Family::W, {.r = T, .s = h, .h = h});
            CHECK(length(w) == T + h);
            const auto I = stratum_index(C, T, h);
            CHECK(is_min_double_coset(w, I, I));
            CHECK(dl_dimension(I, w) == T + h);
            CHECK(irreducible(I, w));
        }
    }
}

TEST_CASE("double-coset minimality and DL dimension basics") {
    const WeylCtx C3{WeylType::C, 3, false};
    const ParabolicIndex none{C3, {}}, one{C3, {1}};
    CHECK(is_min_double_coset(WeylElem::identity(C3), one, one));
    CHECK_FALSE(is_min_double_coset(WeylElem::simple(C3, 1), one, none));
    const auto Ihh = stratum_index(C3, 1, 1);
    CHECK(dl_dimension(Ihh, WeylElem::identity(C3)) == 0);
    CHECK(longest_length(full_index(C3)) == 9);
    CHECK_FALSE(irreducible(one, WeylElem::identity(C3)));
    CHECK(irreducible(one, from_word(C3, {1, 2, 3})));
}

TEST_CASE("w' has r-s-1 letters and DL dimension r-s-1") {
    for (int T = 2; T <= 5; ++T) {
        const WeylCtx C{WeylType::C, T, false};
        for (int h = 1; h < T; ++h)
            for (int r = h + 1; r <= T; ++r)
                for (int s = 0; s < h; ++s) {
                    const auto wp = build_family(C, Family::WPrime, {.r = r, .s = s, .h = h});
                    CHECK(length(wp) == r - s - 1);
                    CHECK(dl_dimension(stratum_index(C, r, s), wp) == r - s - 1);
                }
    }
}

TEST_CASE("diagram action matches the element") {
    for (int T = 1; T <= 4; ++T)
        for (int h = 0; h < T; ++h)
            for (int r = h + 1; r <= T; ++r)
                for (int s = 0; s <= h; ++s) {
                    const WeylCtx C{WeylType::C, T, false};
                    const auto w = build_family(C, Family::W, {.r = r, .s = s, .h = h});
                    for (const auto& [x, y] : diagram_action(T, Family::W, r, s, h)) CHECK(act(w, x) == y);
                }
}
