#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>

#include "doctest.h"
#include "oracles.hpp"
#include "mcw/normalform.hpp"

using namespace mcw;

namespace {

QuiverWithRelations path_quiver(int m, const std::vector<std::pair<int, int>>& arrows, int vertices) {
    QuiverWithRelations q;
    q.m = m;
    q.vertex_count = vertices;
    for (auto [s, t] : arrows) q.add_arrow(s, t);
    return q;
}

bool uniform_path(const QuiverWithRelations& q) {
    int sources = 0, sinks = 0;
    for (int v = 0; v < q.vertex_count; ++v) {
        if (q.in_arrows(v).size() > 1 || q.out_arrows(v).size() > 1) return false;
        sources += q.in_arrows(v).empty();
        sinks += q.out_arrows(v).empty();
    }
    return sources == 1 && sinks == 1;
}

struct EnvGuard {
    explicit EnvGuard(const char* v) { setenv("MCW_CAP", v, 1); }
    ~EnvGuard() { unsetenv("MCW_CAP"); }
};

}  // namespace

TEST_CASE("normal form examples") {
    auto lin = build_normal_form({5, 0, 2});
    CHECK(lin.vertex_count == 5);
    CHECK(lin.arrows.size() == 4);
    CHECK(lin.relations.empty());
    CHECK(uniform_path(lin));
    auto sq = build_normal_form({4, 1, 2});
    CHECK(sq.arrows.size() == 4);
    CHECK(sq.relations.size() == 4);
    CHECK(full_relation_cycles(sq).full_count() == 1);
    auto tri = build_normal_form({3, 1, 1});
    CHECK(tri.arrows.size() == 3);
    CHECK(derived_invariant(tri).snf == std::vector<std::int64_t>{1, 1, 2});
    CHECK_THROWS_AS(build_normal_form({3, 1, 2}), InvalidInput);
    CHECK_THROWS_AS(build_normal_form({0, 0, 1}), InvalidInput);
    CHECK_FALSE(feasible({6, 2, 2}));
    CHECK(feasible({7, 2, 2}));
}

TEST_CASE("normal forms are gentle with r cycles and are fixed by reduce") {
    for (int m = 1; m <= 3; ++m)
        for (int s = 1; s <= 9; ++s)
            for (int r = 0; feasible({s, r, m}); ++r) {
                auto q = build_normal_form({s, r, m});
                CHECK(is_gentle(q));
                CHECK(oracle::gentle(q));
                CHECK(oracle::full_cycle_count(q) == r);
                CHECK(check_cycle_shape(q));
                CHECK(max_relation_chain(q) == 0);
                CHECK(component_partition(q).size() == 1);
                auto inv = derived_invariant(q);
                CHECK(inv.s == s);
                CHECK(inv.r == r);
                auto tr = reduce(q);
                CHECK(tr.steps.empty());
                CHECK(iso_quivers(tr.final, q).has_value());
            }
}

TEST_CASE("vertex roles on a cycle") {
    auto count = [](const std::map<int, VertexRole>& roles, VertexRole r) {
        return std::count_if(roles.begin(), roles.end(), [&](auto& kv) { return kv.second == r; });
    };
    for (int m = 1; m <= 4; ++m) {
        auto q = build_normal_form({m + 2, 1, m});
        std::vector<int> cyc(m + 2);
        std::iota(cyc.begin(), cyc.end(), 0);
        auto roles = classify_vertices(q, cyc);
        CHECK(int(roles.size()) == m + 2);
        CHECK(count(roles, VertexRole::B) == m / 2);
        CHECK(count(roles, VertexRole::A) == m - m / 2);
    }
    auto r2 = classify_vertices(build_normal_form({4, 1, 2}), {0, 1, 2, 3});
    CHECK(count(r2, VertexRole::B) == 1);
    CHECK(count(r2, VertexRole::A) == 1);
    CHECK(count(r2, VertexRole::Connector) == 2);
    auto r3 = classify_vertices(build_normal_form({5, 1, 3}), {0, 1, 2, 3, 4});
    CHECK(count(r3, VertexRole::B) == 1);
    CHECK(count(r3, VertexRole::A) == 2);
    auto r1 = classify_vertices(build_normal_form({3, 1, 1}), {0, 1, 2});
    CHECK(count(r1, VertexRole::B) == 0);
    CHECK(count(r1, VertexRole::A) == 1);
    CHECK_THROWS_AS(classify_vertices(build_normal_form({4, 0, 2}), {0, 1, 2, 3}), InvalidInput);
    CHECK_THROWS_AS(classify_vertices(build_normal_form({4, 1, 2}), {0, 1, 2}), InvalidInput);
    CHECK(role_name(VertexRole::A) == "A");
}

TEST_CASE("hexagon zigzag reduces to linear A_3") {
    int found = 0;
    for (const auto& t : all_dissections(PolygonParams::make(3, 1))) {
        auto q = quiver_of(t);
        if (q.arrows.size() != 2 || !q.relations.empty() || uniform_path(q)) continue;
        ++found;
        auto tr = reduce(t, 0);
        CHECK(!tr.steps.empty());
        CHECK(tr.steps.size() <= 4);
        CHECK(uniform_path(tr.final));
        CHECK(oracle::iso(tr.final, build_normal_form({3, 0, 1})).has_value());
        CHECK(replay(t, tr) == tr.final);
        for (const auto& s : tr.steps) CHECK(s.before.same_record(s.after));
    }
    CHECK(found > 0);
}

TEST_CASE("tail orientation") {
    auto uni = path_quiver(1, {{0, 1}, {1, 2}, {2, 3}}, 4);
    CHECK(linearize_tail(uni, {0, 1, 2, 3}, 0).empty());
    auto alt = path_quiver(1, {{0, 1}, {2, 1}, {2, 3}}, 4);
    auto moves = linearize_tail(alt, {0, 1, 2, 3}, 0);
    CHECK(!moves.empty());
    CHECK(moves.size() <= 8);
    auto res = apply_moves(alt, moves);
    CHECK(uniform_path(res));
    for (const auto& mv : moves) CHECK(mv.site.at(0) != 0);
    auto late = path_quiver(1, {{0, 1}, {1, 2}, {3, 2}}, 4);
    auto one = linearize_tail(late, {0, 1, 2, 3}, 0);
    CHECK(!one.empty());
    CHECK(uniform_path(apply_moves(late, one)));
    for (const auto& mv : one) CHECK(mv.kind == MoveRecord::Kind::Minus);
    auto rel = uni;
    rel.relations.insert({0, 1});
    CHECK_THROWS_AS(linearize_tail(rel, {0, 1, 2, 3}, 0), InvalidInput);
}

TEST_CASE("tail relations are removed one at a time") {
    auto free = path_quiver(2, {{0, 1}, {1, 2}, {2, 3}}, 4);
    CHECK(remove_tail_relation(free, 3).empty());
    auto one = free;
    one.relations.insert({0, 1});
    auto moves = remove_tail_relation(one, 3);
    REQUIRE(!moves.empty());
    auto out = apply_moves(one, moves);
    CHECK(out.relations.empty());
    CHECK(derived_invariant(out).same_record(derived_invariant(one)));

    QuiverWithRelations two = path_quiver(2, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}, 6);
    two.relations.insert({0, 1});
    two.relations.insert({3, 4});
    auto cur = two;
    for (int round = 0; round < 4 && !cur.relations.empty(); ++round) {
        std::size_t before = cur.relations.size();
        int leaf = -1;
        for (int v = 0; v < cur.vertex_count; ++v)
            if (cur.in_arrows(v).size() + cur.out_arrows(v).size() == 1) leaf = v;
        auto mv = remove_tail_relation(cur, leaf);
        REQUIRE(!mv.empty());
        cur = apply_moves(cur, mv);
        CHECK(cur.relations.size() == before - 1);
    }
    CHECK(cur.relations.empty());
    CHECK(derived_invariant(cur).same_record(derived_invariant(two)));
    CHECK_THROWS_AS(remove_tail_relation(two, 2), InvalidInput);
}

TEST_CASE("derived equivalence decisions") {
    auto sq = make_dissection(PolygonParams::make(4, 2), {{0, 3}, {0, 9}, {3, 6}, {6, 9}});
    auto q = quiver_of(sq);
    auto tr = reduce(sq, 0);
    CHECK(derived_equivalent(q, tr.final));
    int matched = 0;
    for (const auto& t : all_dissections(PolygonParams::make(4, 2))) {
        auto c = quiver_of(t);
        if (components(c).size() == 1 && full_relation_cycles(c).full_count() == 1 && t != sq) {
            CHECK(derived_equivalent(q, c));
            ++matched;
        }
    }
    CHECK(matched > 0);
    CHECK_FALSE(derived_equivalent(build_normal_form({4, 0, 2}), q));
    CHECK_THROWS_AS(derived_equivalent(build_normal_form({4, 0, 1}), q), InvalidInput);
    auto apart = build_normal_form({4, 0, 2});
    apart.vertex_count = 5;
    CHECK_THROWS_AS(derived_equivalent(apart, apart), InvalidInput);
}

TEST_CASE("traces replay from the dissection") {
    for (const auto& t : all_dissections(PolygonParams::make(4, 2))) {
        auto parts = components(quiver_of(t));
        for (int c = 0; c < int(parts.size()); ++c) {
            auto tr = reduce(t, c);
            CHECK(replay(t, tr) == tr.final);
            CHECK(tr.component == parts[c].vertices);
            auto inv = derived_invariant(parts[c].quiver);
            CHECK(tr.target.s == inv.s);
            CHECK(tr.target.r == inv.r);
        }
    }
}

TEST_CASE("step cap") {
    CHECK(default_step_cap(4, 2) == 800);
    Dissection longest;
    std::size_t most = 0;
    for (const auto& t : all_dissections(PolygonParams::make(4, 1))) {
        auto n = reduce(t, 0).steps.size();
        if (n > most) most = n, longest = t;
    }
    REQUIRE(most >= 2);
    ReduceOptions tight;
    tight.cap = 1;
    CHECK_THROWS_AS(reduce(longest, 0, tight), CapExceeded);
    {
        EnvGuard env("1");
        CHECK(default_step_cap(4, 2) == 1);
        CHECK_THROWS_AS(reduce(longest, 0), CapExceeded);
    }
    {
        EnvGuard env("lots");
        CHECK_THROWS_AS(default_step_cap(4, 2), InvalidInput);
    }
    CHECK(reduce(longest, 0).steps.size() == most);
    CHECK_THROWS_AS(reduce(longest, 7), InvalidInput);
}
