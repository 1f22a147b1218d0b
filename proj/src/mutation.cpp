#include "mcw/mutation.hpp"

#include <algorithm>
#include <map>

namespace mcw {

MutationContext mutation_context(const QuiverWithRelations& q, int mut) {
    MutationContext c;
    c.mut = mut;
    auto ins = q.in_arrows(mut), outs = q.out_arrows(mut);
    auto by_source = [&](int a, int b) { return q.arrows[a].source < q.arrows[b].source; };
    auto by_target = [&](int a, int b) { return q.arrows[a].target < q.arrows[b].target; };
    std::sort(ins.begin(), ins.end(), by_source);
    std::sort(outs.begin(), outs.end(), by_target);
    std::vector<int> in_order, out_order;
    std::vector<char> in_used(ins.size(), 0), out_used(outs.size(), 0);
    for (size_t i = 0; i < ins.size(); ++i)
        for (size_t o = 0; o < outs.size(); ++o)
            if (!in_used[i] && !out_used[o] && !q.is_relation(ins[i], outs[o])) {
                in_order.push_back(ins[i]);
                out_order.push_back(outs[o]);
                in_used[i] = out_used[o] = 1;
            }
    for (size_t i = 0; i < ins.size(); ++i)
        if (!in_used[i]) in_order.push_back(ins[i]);
    for (size_t o = 0; o < outs.size(); ++o)
        if (!out_used[o]) out_order.push_back(outs[o]);
    for (int a : in_order) {
        c.in_arrows.push_back(a);
        c.in_vertices.push_back(q.arrows[a].source);
        std::optional<int> pa, pv;
        for (auto [x, y] : q.relations)
            if (y == a) {
                pa = x;
                pv = q.arrows[x].source;
            }
        c.pre_arrows.push_back(pa);
        c.pre_vertices.push_back(pv);
    }
    for (int a : out_order) {
        c.out_arrows.push_back(a);
        c.out_vertices.push_back(q.arrows[a].target);
        std::optional<int> pa, pv;
        for (auto [x, y] : q.relations)
            if (x == a) {
                pa = y;
                pv = q.arrows[y].target;
            }
        c.post_arrows.push_back(pa);
        c.post_vertices.push_back(pv);
    }
    return c;
}

QuiverWithRelations mutate_plus_raw(const QuiverWithRelations& q, int mut) {
    const auto& A = q.arrows;
    auto ins = q.in_arrows(mut), outs = q.out_arrows(mut);
    // match[i]: the out-arrow continuing i nonzero; pre[i]: the arrow whose path into i is zero
    std::map<int, int> match, pre;
    for (int i : ins)
        for (int o : outs)
            if (!q.is_relation(i, o)) match[i] = o;
    for (int i : ins)
        for (auto [x, y] : q.relations)
            if (y == i) pre[i] = x;
    std::set<int> removed(ins.begin(), ins.end());
    for (auto [i, o] : match) removed.insert(o);
    for (auto [i, e] : pre) removed.insert(e);

    QuiverWithRelations r;
    r.m = q.m;
    r.vertex_count = q.vertex_count;
    r.vertex_labels = q.vertex_labels;
    std::map<int, int> image;  // old arrow -> new arrow carrying its relations
    for (const auto& a : A)
        if (!removed.count(a.id)) image[a.id] = r.add_arrow(a.source, a.target);
    std::map<int, int> rev, comp, fac;
    for (int i : ins) rev[i] = r.add_arrow(mut, A[i].source);
    for (auto [i, o] : match) comp[i] = r.add_arrow(A[i].source, A[o].target);
    for (auto [i, e] : pre) fac[i] = r.add_arrow(A[e].source, mut);
    for (auto [i, o] : match) image[o] = comp[i];
    for (auto [i, e] : pre) image[e] = fac[i];
    std::set<int> inset(ins.begin(), ins.end());
    for (auto [x, y] : q.relations) {
        if (inset.count(x) || inset.count(y)) continue;
        auto ix = image.find(x), iy = image.find(y);
        if (ix != image.end() && iy != image.end()) r.relations.insert({ix->second, iy->second});
    }
    for (auto [i, e] : pre)
        for (int j : ins)
            if (j != i) r.relations.insert({fac[i], rev[j]});
    for (auto [i, o] : match) r.relations.insert({rev[i], comp[i]});
    // drop relations that are no longer composable (cannot occur on simple inputs)
    for (auto it = r.relations.begin(); it != r.relations.end();)
        if (r.arrows[it->first].target != r.arrows[it->second].source)
            it = r.relations.erase(it);
        else
            ++it;
    return r;
}

QuiverWithRelations mutate_minus_raw(const QuiverWithRelations& q, int mut) {
    return opposite(mutate_plus_raw(opposite(q), mut));
}

bool plus_applicable(const QuiverWithRelations& q, int mut) {
    if (q.in_arrows(mut).empty()) return false;
    return bool(check_simple(mutate_plus_raw(q, mut)));
}

bool minus_applicable(const QuiverWithRelations& q, int mut) {
    if (q.out_arrows(mut).empty()) return false;
    return bool(check_simple(mutate_minus_raw(q, mut)));
}

bool preserves_invariant(const QuiverWithRelations& before, const QuiverWithRelations& after) {
    return component_partition(before) == component_partition(after) &&
           full_relation_cycles(before).full_count() == full_relation_cycles(after).full_count();
}

static Diagnostics preserves(const QuiverWithRelations& q, int mut, bool plus) {
    if (mut < 0 || mut >= q.vertex_count) return Diagnostics::fail("no such vertex");
    if (plus ? q.in_arrows(mut).empty() : q.out_arrows(mut).empty())
        return Diagnostics::fail(plus ? "no arrow into the mutation vertex" : "no arrow out of the mutation vertex");
    auto r = plus ? mutate_plus_raw(q, mut) : mutate_minus_raw(q, mut);
    auto s = check_simple(r);
    if (!s) return Diagnostics::fail("result is not a simple quiver: " + s.message);
    if (component_partition(q) != component_partition(r)) return Diagnostics::fail("connectedness changes");
    if (full_relation_cycles(q).full_count() != full_relation_cycles(r).full_count())
        return Diagnostics::fail("number of full-relation cycles changes");
    return Diagnostics::pass();
}

Diagnostics plus_preserves(const QuiverWithRelations& q, int mut) { return preserves(q, mut, true); }
Diagnostics minus_preserves(const QuiverWithRelations& q, int mut) { return preserves(q, mut, false); }

QuiverWithRelations tilting_mutation_plus(const QuiverWithRelations& q, int mut) {
    auto d = plus_preserves(q, mut);
    if (!d) throw RejectedMove("plus at " + std::to_string(mut) + ": " + d.message);
    return mutate_plus_raw(q, mut);
}

QuiverWithRelations tilting_mutation_minus(const QuiverWithRelations& q, int mut) {
    auto d = minus_preserves(q, mut);
    if (!d) throw RejectedMove("minus at " + std::to_string(mut) + ": " + d.message);
    return mutate_minus_raw(q, mut);
}

std::vector<GradedProjective> plus_complexes(const QuiverWithRelations& q, int mut) {
    std::vector<GradedProjective> out(q.vertex_count);
    for (int v = 0; v < q.vertex_count; ++v) out[v][0] = {v};
    out[mut].clear();
    for (int a : q.in_arrows(mut)) out[mut][0].push_back(q.arrows[a].source);
    out[mut][1] = {mut};
    return out;
}

std::vector<GradedProjective> minus_complexes(const QuiverWithRelations& q, int mut) {
    std::vector<GradedProjective> out(q.vertex_count);
    for (int v = 0; v < q.vertex_count; ++v) out[v][0] = {v};
    out[mut].clear();
    out[mut][-1] = {mut};
    for (int a : q.out_arrows(mut)) out[mut][0].push_back(q.arrows[a].target);
    return out;
}

GeometricResult geometric_mutation(const Dissection& t, Diagonal d, int k) {
    if (t.index_of(d) < 0) throw InvalidInput(to_string(d) + " is not in the dissection");
    Diagonal nd = move_target(t.params, t.diagonals, d, k);
    std::vector<Diagonal> ds;
    for (auto e : t.diagonals) ds.push_back(e == d ? nd : e);
    auto nt = make_dissection(t.params, ds);
    return {nt, quiver_of(nt), nd};
}

LabeledMove geometric_mutation_labeled(const PolygonParams& p, const std::vector<Diagonal>& labels, int vertex,
                                       int k) {
    LabeledMove r;
    r.labels = labels;
    r.labels[vertex] = move_target(p, labels, labels[vertex], k);
    r.quiver = quiver_of_labeled(p, r.labels);
    return r;
}

bool preserves_invariant(const Dissection& t, Diagonal d, int k) {
    int v = t.index_of(d);
    if (v < 0) throw InvalidInput(to_string(d) + " is not in the dissection");
    auto before = quiver_of(t);
    auto after = geometric_mutation_labeled(t.params, t.diagonals, v, k).quiver;
    return preserves_invariant(before, after);
}

bool admissible_move(const Dissection& t, Diagonal d, int k) {
    if (!preserves_invariant(t, d, k)) return false;
    return algebra_counterpart(quiver_of(t), t.index_of(d), k).has_value();
}

std::optional<MoveRecord::Kind> algebra_counterpart(const QuiverWithRelations& q, int mut, int k) {
    if (k > 0 ? plus_applicable(q, mut) : minus_applicable(q, mut))
        return k > 0 ? MoveRecord::Kind::Plus : MoveRecord::Kind::Minus;
    if (q.m == 1 && (k > 0 ? minus_applicable(q, mut) : plus_applicable(q, mut)))
        return k > 0 ? MoveRecord::Kind::Minus : MoveRecord::Kind::Plus;
    return std::nullopt;
}

QuiverWithRelations tilting_mutation(const QuiverWithRelations& q, MoveRecord::Kind kind, int mut) {
    if (kind == MoveRecord::Kind::RelRem) throw InvalidInput("relation removal is not a vertex mutation");
    return kind == MoveRecord::Kind::Plus ? tilting_mutation_plus(q, mut) : tilting_mutation_minus(q, mut);
}

std::vector<GradedProjective> tilting_complexes(const QuiverWithRelations& q, MoveRecord::Kind kind, int mut) {
    if (kind == MoveRecord::Kind::RelRem) throw InvalidInput("relation removal is not a vertex mutation");
    return kind == MoveRecord::Kind::Plus ? plus_complexes(q, mut) : minus_complexes(q, mut);
}

std::vector<int> relation_chain_from(const QuiverWithRelations& q, int arrow) {
    std::vector<int> chain{q.arrows[arrow].source, q.arrows[arrow].target};
    int a = arrow;
    for (size_t guard = 0; guard <= q.arrows.size(); ++guard) {
        int next = -1;
        for (auto [x, y] : q.relations)
            if (x == a) next = y;
        if (next < 0 || next == arrow) break;
        a = next;
        chain.push_back(q.arrows[a].target);
    }
    return chain;
}

Diagnostics relation_chain_ok(const QuiverWithRelations& q, const std::vector<int>& chain) {
    const int L = int(chain.size()) - 1;
    if (L < 2) return Diagnostics::fail("chain needs at least two arrows");
    std::vector<int> ids;
    for (int i = 0; i < L; ++i) {
        int a = q.arrow_between(chain[i], chain[i + 1]);
        if (a < 0) return Diagnostics::fail("chain arrow missing");
        ids.push_back(a);
    }
    for (int i = 0; i + 1 < L; ++i)
        if (!q.is_relation(ids[i], ids[i + 1])) return Diagnostics::fail("consecutive chain arrows are not a relation");
    for (auto [x, y] : q.relations)
        if (y == ids[0]) return Diagnostics::fail("chain is not maximal at its start");
    std::set<int> interior(chain.begin() + 1, chain.end() - 1);
    if (int(interior.size()) != L - 1 || interior.count(chain.front()) || interior.count(chain.back()) ||
        chain.front() == chain.back())
        return Diagnostics::fail("chain repeats a vertex");
    for (int v : interior)
        if (q.in_arrows(v).size() + q.out_arrows(v).size() != 2)
            return Diagnostics::fail("interior vertex " + std::to_string(v) + " has other arrows");
    // no connection between the two ends avoiding the interior
    std::vector<std::vector<int>> adj(q.vertex_count);
    for (const auto& a : q.arrows) {
        if (interior.count(a.source) || interior.count(a.target)) continue;
        adj[a.source].push_back(a.target);
        adj[a.target].push_back(a.source);
    }
    std::vector<char> seen(q.vertex_count, 0);
    std::vector<int> stack{chain.front()};
    seen[chain.front()] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    if (seen[chain.back()]) return Diagnostics::fail("the regions at the chain ends are connected");
    return Diagnostics::pass();
}

QuiverWithRelations remove_relation_chain(const QuiverWithRelations& q, const std::vector<int>& chain) {
    auto ok = relation_chain_ok(q, chain);
    if (!ok) throw RejectedMove("relation chain: " + ok.message);
    const int L = int(chain.size()) - 1;
    std::vector<int> ids;
    for (int i = 0; i < L; ++i) ids.push_back(q.arrow_between(chain[i], chain[i + 1]));
    std::set<int> on_chain(ids.begin(), ids.end());
    QuiverWithRelations r;
    r.m = q.m;
    r.vertex_count = q.vertex_count;
    r.vertex_labels = q.vertex_labels;
    std::map<int, int> image;
    for (const auto& a : q.arrows)
        if (!on_chain.count(a.id)) image[a.id] = r.add_arrow(a.source, a.target);
    for (int k = 1; k < L; ++k) r.add_arrow(chain[k], chain[k - 1]);
    int last = r.add_arrow(chain[L - 1], chain[L]);
    image[ids[L - 1]] = last;
    for (auto [x, y] : q.relations) {
        if (on_chain.count(y)) continue;
        if (on_chain.count(x) && x != ids[L - 1]) continue;
        auto ix = image.find(x), iy = image.find(y);
        if (ix != image.end() && iy != image.end()) r.relations.insert({ix->second, iy->second});
    }
    return r;
}

std::vector<GradedProjective> relation_chain_complexes(const QuiverWithRelations& q, const std::vector<int>& chain) {
    const int L = int(chain.size()) - 1;
    std::set<int> interior(chain.begin() + 1, chain.end() - 1);
    // region X: reachable from the chain start without passing the interior
    std::vector<std::vector<int>> adj(q.vertex_count);
    for (const auto& a : q.arrows) {
        if (interior.count(a.source) || interior.count(a.target)) continue;
        adj[a.source].push_back(a.target);
        adj[a.target].push_back(a.source);
    }
    std::vector<char> inX(q.vertex_count, 0);
    std::vector<int> stack{chain.front()};
    inX[chain.front()] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
            if (!inX[w]) {
                inX[w] = 1;
                stack.push_back(w);
            }
    }
    std::vector<GradedProjective> out(q.vertex_count);
    for (int v = 0; v < q.vertex_count; ++v) {
        if (interior.count(v)) continue;
        if (inX[v])
            out[v][0] = {v};
        else
            out[v][L - 1] = {v};
    }
    for (int r = 1; r < L; ++r)
        for (int k = 0; k <= r; ++k) out[chain[r]][k] = {chain[k]};
    return out;
}

std::string kind_name(MoveRecord::Kind k) {
    switch (k) {
        case MoveRecord::Kind::Plus: return "plus";
        case MoveRecord::Kind::Minus: return "minus";
        case MoveRecord::Kind::RelRem: return "rel_rem";
    }
    return "?";
}

MoveRecord::Kind kind_from_name(const std::string& s) {
    if (s == "plus") return MoveRecord::Kind::Plus;
    if (s == "minus") return MoveRecord::Kind::Minus;
    if (s == "rel_rem") return MoveRecord::Kind::RelRem;
    throw InvalidInput("unknown move kind " + s);
}

}  // namespace mcw
