#include <doctest.h>

#include "dlstrata/charts.hpp"
#include "dlstrata/gf.hpp"

using namespace dls;

namespace {

ChartSpec spec(ChartFamily f, int n, int h, int t1, int t2, unsigned q = 3) {
    ChartSpec s;
    s.family = f;
    s.n = n;
    s.h = h;
    s.t1 = t1;
    s.t2 = t2;
    s.q = q;
    return s;
}

}  // namespace

TEST_CASE("rank <= 1 counts") {
    CHECK(rank1_brute_force(2, 3, 3) == 105);
    CHECK(rank1_closed_form(2, 3, 3) == 105);
    CHECK(rank1_brute_force(2, 2, 3) == 33);
    CHECK(rank1_closed_form(2, 2, 3) == 33);
    for (int b = 1; b <= 4; ++b) CHECK(rank1_closed_form(1, b, 5) == ipow(5, b));
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            for (unsigned q : {3u, 5u}) CHECK(rank1_brute_force(a, b, q) == rank1_closed_form(a, b, q));
}

TEST_CASE("chart counts") {
    CHECK(chart_count(spec(ChartFamily::ZY, 8, 4, 8, 0)) == 33);
    CHECK(chart_count(spec(ChartFamily::PiModular, 6, 6, 0, 0)) == 9);
    CHECK(chart_count(spec(ChartFamily::Z, 6, 2, 6, 0)) == 105);
    CHECK(chart_dimension(spec(ChartFamily::Z, 6, 2, 6, 0)) == 4);
    // t1 - h = 2: linear chart
    auto lin = spec(ChartFamily::Z, 8, 4, 6, 0);
    CHECK(chart_count(lin) == ipow(3, 5));
    // x^2 = yz: singular with q^2 points
    auto cone = spec(ChartFamily::Z, 4, 0, 4, 0);
    CHECK(chart_count(cone) == 9);
    CHECK(cone.free_entries() == 3);
    CHECK(chart_dimension(cone) == 2);
}

TEST_CASE("strata dimensions") {
    CHECK(dim_z(2, 4) == 3);
    CHECK(dim_y(8, 4, 2) == 4);
    CHECK(dim_zy(4, 6, 2) == 1);
    auto sd = strata_dims(8, 4, 6, 2);
    CHECK(sd.z == 5);
    CHECK(sd.y == 4);
    CHECK(sd.zy == 1);
}

TEST_CASE("smoothness and Gorenstein predicates") {
    auto p = predicates(10, 2, 10, std::nullopt);
    CHECK(p.gorenstein_z == Truth::True);
    CHECK(predicates(8, 4, 6, std::nullopt).smooth_z == Truth::True);
    CHECK(predicates(8, 4, 6, 2).gorenstein_zy == Truth::True);
    CHECK(predicates(8, 0, 4, std::nullopt).smooth_z == Truth::False);
}

TEST_CASE("h-vector Gorenstein oracle") {
    // symmetric rank <= 1 block, a = 4: h-vector [1, 6, 1] is symmetric
    auto s = spec(ChartFamily::Z, 8, 0, 8, 0);
    CHECK(chart_h_vector(s) == std::vector<long long>{1, 6, 1});
    CHECK(gorenstein_by_h_vector(s));
    // generic 2 x 3 rank <= 1: h-vector [1, 2] is not symmetric
    CHECK_FALSE(gorenstein_by_h_vector(spec(ChartFamily::Z, 10, 2, 6, 0)) ==
                gorenstein_by_h_vector(spec(ChartFamily::Z, 10, 2, 4, 0)));
}

TEST_CASE("rz_dim") {
    CHECK(rz_dim(5, 0, 1) == 2);
    CHECK(rz_dim(5, 0, -1) == 2);
    CHECK(rz_dim(4, 0, -1) == 2);
    CHECK(rz_dim(6, 4, -1) == 5);
    for (int n = 1; n <= 12; ++n)
        for (int h = 0; h <= 2 * (n / 2); h += 2)
            for (int eps : {1, -1}) CHECK(rz_dim(n, h, eps) == rz_dim_from_types(n, h, eps));
    CHECK_THROWS_AS(rz_dim(5, 1, 1), ChartError);
    CHECK_THROWS_AS(rz_dim(5, 0, 0), ChartError);
}

TEST_CASE("vertex types") {
    CHECK(VertexTypeTable{5, 1}.types() == std::vector<int>{0, 2, 4});
    CHECK(VertexTypeTable{4, 1}.t_max() == 2);
    CHECK(VertexTypeTable{4, -1}.t_max() == 4);
    CHECK_FALSE(VertexTypeTable{4, 1}.allowed(3));
}

TEST_CASE("chart shape validation") {
    CHECK_THROWS_AS(spec(ChartFamily::Z, 8, 4, 4, 0).validate(), ChartError);
    CHECK_THROWS_AS(spec(ChartFamily::ZY, 8, 4, 6, 2, 9).validate(), ChartError);
    CHECK_THROWS_AS(spec(ChartFamily::Y, 8, 8, 0, 2).validate(), ChartError);
}

TEST_CASE("reconcile on single shapes") {
    for (auto s : {spec(ChartFamily::ZY, 8, 4, 6, 2), spec(ChartFamily::Z, 6, 2, 6, 0), spec(ChartFamily::Y, 7, 4, 0, 2),
                   spec(ChartFamily::Z, 4, 0, 4, 0), spec(ChartFamily::PiModular, 6, 6, 0, 2)})
        CHECK(reconcile(s).overall() == Status::Pass);
}

TEST_CASE("every shape closes") {
    for (const auto& s : chart_shapes(6, 8)) {
        CHECK(chart_count(s) == chart_closed_form(s));
        CHECK(growth_exponent(s) == chart_dimension(s));
    }
}
