#include "mcw/algebra.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace mcw {

int QuiverWithRelations::add_arrow(int s, int t) {
    int id = int(arrows.size());
    arrows.push_back({s, t, id});
    return id;
}

int QuiverWithRelations::arrow_between(int s, int t) const {
    for (const auto& a : arrows)
        if (a.source == s && a.target == t) return a.id;
    return -1;
}

std::vector<int> QuiverWithRelations::in_arrows(int v) const {
    std::vector<int> out;
    for (const auto& a : arrows)
        if (a.target == v) out.push_back(a.id);
    return out;
}

std::vector<int> QuiverWithRelations::out_arrows(int v) const {
    std::vector<int> out;
    for (const auto& a : arrows)
        if (a.source == v) out.push_back(a.id);
    return out;
}

bool QuiverWithRelations::has_relation(int s, int mid, int t) const {
    int a = arrow_between(s, mid), b = arrow_between(mid, t);
    return a >= 0 && b >= 0 && is_relation(a, b);
}

std::vector<std::array<int, 3>> QuiverWithRelations::relation_triples() const {
    std::vector<std::array<int, 3>> out;
    for (auto [a, b] : relations) out.push_back({arrows[a].source, arrows[a].target, arrows[b].target});
    std::sort(out.begin(), out.end());
    return out;
}

static std::vector<std::pair<int, int>> arrow_pairs(const QuiverWithRelations& q) {
    std::vector<std::pair<int, int>> out;
    for (const auto& a : q.arrows) out.push_back({a.source, a.target});
    std::sort(out.begin(), out.end());
    return out;
}

bool same_labeled(const QuiverWithRelations& a, const QuiverWithRelations& b) {
    return a.vertex_count == b.vertex_count && arrow_pairs(a) == arrow_pairs(b) &&
           a.relation_triples() == b.relation_triples();
}

Diagnostics check_well_formed(const QuiverWithRelations& q) {
    std::set<std::pair<int, int>> seen;
    for (size_t i = 0; i < q.arrows.size(); ++i) {
        const auto& a = q.arrows[i];
        if (a.id != int(i)) return Diagnostics::fail("arrow ids are not consecutive");
        if (a.source < 0 || a.target < 0 || a.source >= q.vertex_count || a.target >= q.vertex_count)
            return Diagnostics::fail("arrow endpoint out of range");
        if (a.source == a.target) return Diagnostics::fail("loop at vertex " + std::to_string(a.source));
        if (!seen.insert({a.source, a.target}).second)
            return Diagnostics::fail("multiple arrows " + std::to_string(a.source) + "->" + std::to_string(a.target));
    }
    for (auto [x, y] : q.relations) {
        if (x < 0 || y < 0 || x >= int(q.arrows.size()) || y >= int(q.arrows.size()))
            return Diagnostics::fail("relation refers to a missing arrow");
        if (q.arrows[x].target != q.arrows[y].source) return Diagnostics::fail("relation is not composable");
    }
    if (!q.vertex_labels.empty() && int(q.vertex_labels.size()) != q.vertex_count)
        return Diagnostics::fail("label count differs from vertex count");
    return Diagnostics::pass();
}

Diagnostics check_simple(const QuiverWithRelations& q) {
    auto wf = check_well_formed(q);
    if (!wf) return wf;
    for (const auto& a : q.arrows)
        if (q.arrow_between(a.target, a.source) >= 0) return Diagnostics::fail("2-cycle at " + std::to_string(a.source));
    return Diagnostics::pass();
}

QuiverWithRelations quiver_of_labeled(const PolygonParams& p, const std::vector<Diagonal>& labels) {
    QuiverWithRelations q;
    q.m = p.m;
    q.vertex_count = int(labels.size());
    for (auto d : labels) q.vertex_labels.push_back(d);
    for (const auto& f : faces_of(p, labels)) {
        const int k = int(f.sides.size());
        std::vector<int> local;
        // walk the face clockwise: side i is followed by side i-1
        for (int t = 0; t < k; ++t) {
            int i = ((k - 2 - t) % k + k) % k;
            int j = (i - 1 + k) % k;
            const auto& s1 = f.sides[i];
            const auto& s2 = f.sides[j];
            if (s1.boundary() || s2.boundary()) continue;
            local.push_back(q.add_arrow(s1.diagonal, s2.diagonal));
        }
        for (int a : local)
            for (int b : local)
                if (a != b && q.arrows[a].target == q.arrows[b].source) q.relations.insert({a, b});
    }
    return q;
}

QuiverWithRelations quiver_of(const Dissection& t) { return quiver_of_labeled(t.params, t.diagonals); }

GentleReport is_gentle(const QuiverWithRelations& q) {
    auto wf = check_well_formed(q);
    if (!wf) return {false, -1, wf.message};
    for (int v = 0; v < q.vertex_count; ++v) {
        if (q.in_arrows(v).size() > 2) return {false, v, "more than two arrows in"};
        if (q.out_arrows(v).size() > 2) return {false, v, "more than two arrows out"};
    }
    for (const auto& b : q.arrows) {
        int zero = 0, nonzero = 0;
        for (int a : q.in_arrows(b.source)) (q.is_relation(a, b.id) ? zero : nonzero)++;
        if (zero > 1) return {false, b.source, "two relations end in one arrow"};
        if (nonzero > 1) return {false, b.source, "two nonzero paths end in one arrow"};
        zero = nonzero = 0;
        for (int c : q.out_arrows(b.target)) (q.is_relation(b.id, c) ? zero : nonzero)++;
        if (zero > 1) return {false, b.target, "two relations start with one arrow"};
        if (nonzero > 1) return {false, b.target, "two nonzero paths start with one arrow"};
    }
    return {};
}

std::vector<std::vector<int>> component_partition(const QuiverWithRelations& q) {
    std::vector<int> parent(q.vertex_count);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& a : q.arrows) parent[find(a.source)] = find(a.target);
    std::map<int, std::vector<int>> blocks;
    for (int v = 0; v < q.vertex_count; ++v) blocks[find(v)].push_back(v);
    std::vector<std::vector<int>> out;
    for (auto& [r, b] : blocks) out.push_back(b);
    std::sort(out.begin(), out.end());
    return out;
}

QuiverWithRelations induced_subquiver(const QuiverWithRelations& q, const std::vector<int>& vertices) {
    std::vector<int> pos(q.vertex_count, -1);
    for (size_t i = 0; i < vertices.size(); ++i) pos[vertices[i]] = int(i);
    QuiverWithRelations s;
    s.m = q.m;
    s.vertex_count = int(vertices.size());
    if (!q.vertex_labels.empty())
        for (int v : vertices) s.vertex_labels.push_back(q.vertex_labels[v]);
    std::vector<int> amap(q.arrows.size(), -1);
    for (const auto& a : q.arrows)
        if (pos[a.source] >= 0 && pos[a.target] >= 0) amap[a.id] = s.add_arrow(pos[a.source], pos[a.target]);
    for (auto [x, y] : q.relations)
        if (amap[x] >= 0 && amap[y] >= 0) s.relations.insert({amap[x], amap[y]});
    return s;
}

std::vector<Component> components(const QuiverWithRelations& q) {
    std::vector<Component> out;
    for (auto& block : component_partition(q)) out.push_back({induced_subquiver(q, block), block});
    return out;
}

QuiverWithRelations opposite(const QuiverWithRelations& q) {
    QuiverWithRelations o = q;
    for (auto& a : o.arrows) std::swap(a.source, a.target);
    o.relations.clear();
    for (auto [x, y] : q.relations) o.relations.insert({y, x});
    return o;
}

std::vector<int> Cycle::vertices(const QuiverWithRelations& q) const {
    std::vector<int> out;
    for (int a : arrows) out.push_back(q.arrows[a].source);
    return out;
}

int CycleReport::full_count() const {
    return int(std::count_if(cycles.begin(), cycles.end(), [](const Cycle& c) { return c.full_relations; }));
}

CycleReport full_relation_cycles(const QuiverWithRelations& q) {
    CycleReport rep;
    std::vector<std::vector<int>> out(q.vertex_count);
    for (const auto& a : q.arrows) out[a.source].push_back(a.id);
    long budget = 5000000;
    std::vector<char> on(q.vertex_count, 0);
    std::vector<int> path;
    for (int start = 0; start < q.vertex_count; ++start) {
        std::function<void(int)> dfs = [&](int v) {
            if (--budget < 0) throw CapExceeded("cycle search budget exhausted");
            for (int a : out[v]) {
                int t = q.arrows[a].target;
                if (t == start) {
                    Cycle c;
                    c.arrows = path;
                    c.arrows.push_back(a);
                    const size_t L = c.arrows.size();
                    c.full_relations = true;
                    for (size_t i = 0; i < L; ++i)
                        if (!q.is_relation(c.arrows[i], c.arrows[(i + 1) % L])) c.full_relations = false;
                    rep.cycles.push_back(std::move(c));
                } else if (t > start && !on[t]) {
                    on[t] = 1;
                    path.push_back(a);
                    dfs(t);
                    path.pop_back();
                    on[t] = 0;
                }
            }
        };
        on[start] = 1;
        dfs(start);
        on[start] = 0;
    }
    return rep;
}

Diagnostics check_cycle_shape(const QuiverWithRelations& q) {
    for (const auto& c : full_relation_cycles(q).cycles) {
        if (int(c.arrows.size()) != q.m + 2)
            return Diagnostics::fail("cycle of length " + std::to_string(c.arrows.size()));
        if (!c.full_relations) return Diagnostics::fail("cycle without full relations");
    }
    return Diagnostics::pass();
}

int max_relation_chain(const QuiverWithRelations& q) {
    std::set<std::pair<int, int>> on_cycle;
    for (const auto& c : full_relation_cycles(q).cycles) {
        if (!c.full_relations) continue;
        const size_t L = c.arrows.size();
        for (size_t i = 0; i < L; ++i) on_cycle.insert({c.arrows[i], c.arrows[(i + 1) % L]});
    }
    std::vector<std::vector<int>> next(q.arrows.size());
    for (auto r : q.relations)
        if (!on_cycle.count(r)) next[r.first].push_back(r.second);
    std::vector<int> memo(q.arrows.size(), -1), state(q.arrows.size(), 0);
    std::function<int(int)> longest = [&](int a) {
        if (state[a] == 2) return memo[a];
        if (state[a] == 1) throw InvariantFailure("relation chain closes up outside a full cycle");
        state[a] = 1;
        int best = 0;
        for (int b : next[a]) best = std::max(best, 1 + longest(b));
        state[a] = 2;
        return memo[a] = best;
    };
    int best = 0;
    for (size_t a = 0; a < q.arrows.size(); ++a) best = std::max(best, longest(int(a)));
    return best;
}

namespace {

struct IsoData {
    int n;
    std::vector<std::vector<char>> adj;
    std::vector<std::array<int, 5>> sig;
    std::vector<std::array<int, 3>> triples;
    std::set<std::array<int, 3>> triple_set;
    std::vector<std::vector<int>> nbr;
};

IsoData iso_data(const QuiverWithRelations& q) {
    IsoData d;
    d.n = q.vertex_count;
    d.adj.assign(d.n, std::vector<char>(d.n, 0));
    d.sig.assign(d.n, {0, 0, 0, 0, 0});
    d.nbr.assign(d.n, {});
    for (const auto& a : q.arrows) {
        d.adj[a.source][a.target] = 1;
        d.sig[a.source][1]++;
        d.sig[a.target][0]++;
        d.nbr[a.source].push_back(a.target);
        d.nbr[a.target].push_back(a.source);
    }
    d.triples = q.relation_triples();
    for (auto t : d.triples) {
        d.sig[t[0]][2]++;
        d.sig[t[1]][3]++;
        d.sig[t[2]][4]++;
        d.triple_set.insert(t);
    }
    for (auto& v : d.nbr) std::sort(v.begin(), v.end());
    return d;
}

}  // namespace

std::optional<std::vector<int>> iso_quivers(const QuiverWithRelations& q1, const QuiverWithRelations& q2) {
    if (q1.vertex_count != q2.vertex_count || q1.arrows.size() != q2.arrows.size() ||
        q1.relations.size() != q2.relations.size())
        return std::nullopt;
    const IsoData A = iso_data(q1), B = iso_data(q2);
    const int n = A.n;
    {
        auto sa = A.sig, sb = B.sig;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return std::nullopt;
    }
    std::vector<std::vector<int>> cand(n);
    for (int v = 0; v < n; ++v)
        for (int u = 0; u < n; ++u)
            if (A.sig[v] == B.sig[u]) cand[v].push_back(u);
    // search order: breadth first inside each component, seeded by the rarest signature
    std::vector<int> order;
    std::vector<char> placed(n, 0);
    while (int(order.size()) < n) {
        int seed = -1;
        for (int v = 0; v < n; ++v)
            if (!placed[v] && (seed < 0 || cand[v].size() < cand[seed].size())) seed = v;
        size_t head = order.size();
        order.push_back(seed);
        placed[seed] = 1;
        while (head < order.size()) {
            int v = order[head++];
            for (int w : A.nbr[v])
                if (!placed[w]) {
                    placed[w] = 1;
                    order.push_back(w);
                }
        }
    }
    std::vector<int> f(n, -1), pos(n, -1);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    std::vector<char> used(n, 0);
    // relation triples checked once their last vertex is placed
    std::vector<std::vector<std::array<int, 3>>> due(n);
    for (auto t : A.triples) {
        int last = std::max({pos[t[0]], pos[t[1]], pos[t[2]]});
        due[last].push_back(t);
    }
    std::function<bool(int)> rec = [&](int i) {
        if (i == n) return true;
        int v = order[i];
        for (int u : cand[v]) {
            if (used[u]) continue;
            bool ok = true;
            for (int j = 0; j < i && ok; ++j) {
                int w = order[j], x = f[w];
                if (A.adj[v][w] != B.adj[u][x] || A.adj[w][v] != B.adj[x][u]) ok = false;
            }
            if (!ok) continue;
            f[v] = u;
            used[u] = 1;
            for (auto t : due[i])
                if (!B.triple_set.count({f[t[0]], f[t[1]], f[t[2]]})) {
                    ok = false;
                    break;
                }
            if (ok && rec(i + 1)) return true;
            used[u] = 0;
            f[v] = -1;
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    return f;
}

}  // namespace mcw
