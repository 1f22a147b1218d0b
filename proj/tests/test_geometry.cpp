#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"

using namespace mcw;

TEST_CASE("polygon size") {
    CHECK(PolygonParams::make(2, 1).N == 5);
    CHECK(PolygonParams::make(3, 2).N == 10);
    CHECK_THROWS_AS(PolygonParams::make(0, 1), InvalidInput);
    CHECK_THROWS_AS(PolygonParams::make(1, 0), InvalidInput);
}

TEST_CASE("diagonals are normalized and validated") {
    CHECK(make_diagonal(4, 1, 6) == Diagonal{1, 4});
    CHECK_THROWS_AS(make_diagonal(0, 1, 6), InvalidInput);
    CHECK_THROWS_AS(make_diagonal(0, 5, 6), InvalidInput);
    CHECK_THROWS_AS(make_diagonal(2, 2, 6), InvalidInput);
    CHECK_THROWS_AS(make_diagonal(0, 7, 6), InvalidInput);
    CHECK(crosses({0, 3}, {1, 4}));
    CHECK_FALSE(crosses({0, 3}, {3, 5}));
    CHECK_FALSE(crosses({0, 5}, {1, 4}));
}

TEST_CASE("allowable diagonals agree with the splitting oracle") {
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 5; ++n) {
            auto p = PolygonParams::make(n, m);
            for (int a = 0; a < p.N; ++a)
                for (int b = a + 2; b < p.N; ++b) {
                    if (a == 0 && b == p.N - 1) continue;
                    CHECK_MESSAGE(is_allowable({a, b}, p) == oracle::allowable({a, b}, p.N, m), n, m, a, b);
                }
        }
}

TEST_CASE("small counts") {
    CHECK(fuss_catalan(2, 1) == 5);
    CHECK(fuss_catalan(2, 2) == 12);
    CHECK(fuss_catalan(3, 2) == 55);
    CHECK(all_dissections(PolygonParams::make(2, 1)).size() == 5);
    CHECK(all_dissections(PolygonParams::make(2, 2)).size() == 12);
    CHECK(all_dissections(PolygonParams::make(3, 2)).size() == 55);
}

TEST_CASE("enumeration equals oracle generation") {
    for (int m = 1; m <= 3; ++m)
        for (int n = 1; n <= 4; ++n) {
            auto mine = all_dissections(PolygonParams::make(n, m));
            std::vector<std::vector<Diagonal>> got;
            for (const auto& t : mine) got.push_back(t.diagonals);
            CHECK(std::is_sorted(got.begin(), got.end()));
            CHECK(got == oracle::all_dissections(n, m));
        }
}

TEST_CASE("enumeration cap") {
    CHECK_THROWS_AS(all_dissections(PolygonParams::make(4, 2), 10), CapExceeded);
    CHECK(all_dissections(PolygonParams::make(2, 1), 5).size() == 5);
}

TEST_CASE("validation messages") {
    auto p = PolygonParams::make(2, 1);
    CHECK(validate_dissection(make_dissection(p, {{0, 2}, {0, 3}})));
    auto cross = validate_dissection(make_dissection(p, {{0, 2}, {1, 3}}));
    CHECK_FALSE(cross);
    CHECK(cross.message.find("cross") != std::string::npos);
    CHECK_FALSE(validate_dissection(make_dissection(p, {{0, 2}})));
    auto q = PolygonParams::make(2, 2);
    auto bad = validate_dissection(make_dissection(q, {{0, 2}, {2, 5}}));
    CHECK_FALSE(bad);
    CHECK(bad.message.find("allowable") != std::string::npos);
}

TEST_CASE("faces are (m+2)-gons with ascending corners") {
    for (int m = 1; m <= 3; ++m)
        for (int n = 1; n <= 4; ++n)
            for (const auto& t : all_dissections(PolygonParams::make(n, m))) {
                auto fs = faces(t);
                CHECK(int(fs.size()) == n + 1);
                std::vector<int> uses(n, 0);
                for (const auto& f : fs) {
                    CHECK(int(f.corners.size()) == m + 2);
                    CHECK(std::is_sorted(f.corners.begin(), f.corners.end()));
                    for (const auto& s : f.sides)
                        if (!s.boundary()) uses[s.diagonal]++;
                }
                for (int u : uses) CHECK(u == 2);
            }
}

TEST_CASE("rotation targets match brute-force substitution") {
    for (int m = 1; m <= 3; ++m)
        for (int n = 1; n <= 4; ++n) {
            auto p = PolygonParams::make(n, m);
            for (const auto& t : all_dissections(p))
                for (auto d : t.diagonals) {
                    auto targets = rotation_targets(t, d);
                    REQUIRE(int(targets.size()) == m);
                    std::set<Diagonal> brute;
                    for (int a = 0; a < p.N; ++a)
                        for (int b = a + 2; b < p.N; ++b) {
                            Diagonal e{a, b};
                            if ((a == 0 && b == p.N - 1) || e == d || t.index_of(e) >= 0) continue;
                            std::vector<Diagonal> trial;
                            for (auto x : t.diagonals)
                                if (x != d) trial.push_back(x);
                            trial.push_back(e);
                            std::sort(trial.begin(), trial.end());
                            bool ok = oracle::allowable(e, p.N, m);
                            for (auto x : trial)
                                if (x != e && oracle::crossing(x, e)) ok = false;
                            if (ok) brute.insert(e);
                        }
                    CHECK(std::set<Diagonal>(targets.begin(), targets.end()) == brute);
                    for (int k = 1; k <= m; ++k) CHECK(rotation_closed_form(t, d, k) == targets[k - 1]);
                    CHECK(move_target(p, t.diagonals, d, 1) == targets.front());
                    CHECK(move_target(p, t.diagonals, d, -1) == targets.back());
                }
        }
}

TEST_CASE("pentagon flip") {
    auto p = PolygonParams::make(2, 1);
    auto t = make_dissection(p, {{0, 2}, {0, 3}});
    auto u = apply_move(t, {0, 2}, 1);
    CHECK(u.diagonals == std::vector<Diagonal>{{0, 3}, {1, 3}});
    CHECK(apply_move(u, {1, 3}, 1) == t);
    CHECK(apply_move(t, {0, 2}, 2) == t);
    CHECK_THROWS_AS(move_target(p, t.diagonals, {0, 2}, 2), InvalidInput);
    CHECK_THROWS_AS(apply_move(t, {1, 3}, 1), InvalidInput);
}

TEST_CASE("rotation order in a decagon") {
    auto p = PolygonParams::make(3, 2);
    for (const auto& t : all_dissections(p))
        for (auto d : t.diagonals) {
            auto once = apply_move(t, d, 1);
            Diagonal nd = move_target(p, t.diagonals, d, 1);
            CHECK(apply_move(once, nd, -1) == t);
            CHECK(apply_move(t, d, 3) == t);
        }
}
