#include "mcw/check.hpp"

#include <sstream>

#include "mcw/normalform.hpp"

namespace mcw {

namespace {

struct Tally {
    long checked = 0;
    long failed = 0;
    std::string first;
    void fail(const std::string& why) {
        if (!failed++) first = why;
    }
    CheckLine line(std::string name) const {
        std::ostringstream os;
        os << checked << " checked";
        if (failed) os << ", " << failed << " failed; first: " << first;
        return {std::move(name), failed == 0, os.str()};
    }
};

std::string where(const Dissection& t) {
    std::ostringstream os;
    os << "n=" << t.params.n << " m=" << t.params.m << " {";
    for (size_t i = 0; i < t.diagonals.size(); ++i) os << (i ? " " : "") << to_string(t.diagonals[i]);
    os << "}";
    return os.str();
}

}  // namespace

std::vector<CheckLine> run_check_suite(int n_max, int m_max, std::optional<std::uint64_t> seed) {
    Tally count, structure, bh, moves, group, reduction;
    for (int m = 1; m <= m_max; ++m)
        for (int n = 1; n <= n_max; ++n) {
            auto p = PolygonParams::make(n, m);
            auto all = all_dissections(p);
            ++count.checked;
            if (all.size() != fuss_catalan(n, m))
                count.fail("n=" + std::to_string(n) + " m=" + std::to_string(m) + " count mismatch");
            for (const auto& t : all) {
                const auto q = quiver_of(t);
                ++structure.checked;
                auto g = is_gentle(q);
                if (!g) structure.fail(where(t) + ": not gentle: " + g.reason);
                if (!check_cycle_shape(q)) structure.fail(where(t) + ": cycle shape");
                if (max_relation_chain(q) > m - 1) structure.fail(where(t) + ": relation chain too long");
                const auto C = cartan(q);
                for (const auto& row : C.rows)
                    for (auto x : row)
                        if (x != 0 && x != 1) structure.fail(where(t) + ": cartan entry outside {0,1}");
                auto parts = components(q);
                for (const auto& c : parts) {
                    ++bh.checked;
                    try {
                        auto inv = derived_invariant(c.quiver);
                        auto det = determinant(cartan(c.quiver));
                        if (det != 0 && det != (std::int64_t(1) << inv.oc)) bh.fail(where(t) + ": determinant");
                        if (inv.ec > 0 && det != 0) bh.fail(where(t) + ": determinant");
                        if (seed && smith_normal_form(cartan(c.quiver), *seed + bh.checked).diag != inv.snf)
                            bh.fail(where(t) + ": seeded Smith form differs");
                    } catch (const InvariantFailure& e) {
                        bh.fail(where(t) + ": " + e.what());
                    }
                }
                for (int v = 0; v < n; ++v) {
                    const auto d = t.diagonals[v];
                    for (int k : {1, -1}) {
                        ++group.checked;
                        auto once = apply_move(t, d, k);
                        auto back = apply_move(once, move_target(p, t.diagonals, d, k), -k);
                        if (!(back == t)) group.fail(where(t) + ": move and inverse do not cancel at " + to_string(d));
                        if (k == 1) {
                            auto cur = t;
                            auto cd = d;
                            for (int i = 0; i <= m; ++i) {
                                auto nd = move_target(p, cur.diagonals, cd, 1);
                                cur = apply_move(cur, cd, 1);
                                cd = nd;
                            }
                            if (!(cur == t)) group.fail(where(t) + ": rotation order differs from m+1");
                        }
                        if (!admissible_move(t, d, k)) continue;
                        ++moves.checked;
                        auto geo = geometric_mutation_labeled(p, t.diagonals, v, k).quiver;
                        const auto kind = *algebra_counterpart(q, v, k);
                        auto alg = tilting_mutation(q, kind, v);
                        if (!same_labeled(alg, geo)) moves.fail(where(t) + ": algebra and geometry differ at " + to_string(d));
                        auto cx = tilting_complexes(q, kind, v);
                        if (happel_hom_dims(cx, C) != cartan(alg))
                            moves.fail(where(t) + ": alternating sum differs at " + to_string(d));
                    }
                }
                for (size_t ci = 0; ci < parts.size(); ++ci) {
                    ++reduction.checked;
                    try {
                        auto tr = reduce(t, int(ci));
                        if (!(replay(t, tr) == tr.final)) reduction.fail(where(t) + ": replay differs");
                    } catch (const std::exception& e) {
                        reduction.fail(where(t) + ": " + e.what());
                    }
                }
            }
        }
    return {count.line("enumeration count"),   structure.line("structure"),
            bh.line("Smith form consistency"), moves.line("mutation equivalence"),
            group.line("move group law"),      reduction.line("reduction to normal form")};
}

}  // namespace mcw
