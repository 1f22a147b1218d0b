#include "mcw/normalform.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

namespace mcw {

Diagnostics feasible(const NormalFormSpec& spec) {
    if (spec.m < 1) return Diagnostics::fail("m must be at least 1");
    if (spec.s < 1) return Diagnostics::fail("s must be at least 1");
    if (spec.r < 0) return Diagnostics::fail("r must be non-negative");
    if (spec.r > 0 && spec.s < spec.r * (spec.m + 1) + 1)
        return Diagnostics::fail("r cycles need at least r(m+1)+1 vertices");
    return Diagnostics::pass();
}

QuiverWithRelations build_normal_form(const NormalFormSpec& spec) {
    auto ok = feasible(spec);
    if (!ok) throw InvalidInput("normal form: " + ok.message);
    QuiverWithRelations q;
    q.m = spec.m;
    q.vertex_count = spec.s;
    if (spec.r == 0) {
        for (int i = 0; i + 1 < spec.s; ++i) q.add_arrow(i, i + 1);
        return q;
    }
    const int L = spec.m + 2, c = spec.m / 2 + 1;
    int nv = 0, conn = 0;
    for (int k = 0; k < spec.r; ++k) {
        std::vector<int> vs;
        if (k == 0) {
            for (int j = 0; j < L; ++j) vs.push_back(j);
            nv = L;
        } else {
            vs.push_back(conn);
            for (int j = 0; j < L - 1; ++j) vs.push_back(nv + j);
            nv += L - 1;
        }
        std::vector<int> ids;
        for (int j = 0; j < L; ++j) ids.push_back(q.add_arrow(vs[j], vs[(j + 1) % L]));
        for (int j = 0; j < L; ++j) q.relations.insert({ids[j], ids[(j + 1) % L]});
        conn = k == 0 ? vs[0] : vs[c];
    }
    for (int cur = conn; nv < spec.s; cur = nv++) q.add_arrow(cur, nv);
    return q;
}

std::string role_name(VertexRole r) {
    switch (r) {
        case VertexRole::Connector: return "connector";
        case VertexRole::A: return "A";
        case VertexRole::B: return "B";
    }
    return "?";
}

std::map<int, VertexRole> classify_vertices(const QuiverWithRelations& q, const std::vector<int>& cycle) {
    const int L = int(cycle.size()), m = q.m;
    if (L != m + 2) throw InvalidInput("cycle must have m+2 vertices");
    for (int j = 0; j < L; ++j) {
        int a = q.arrow_between(cycle[j], cycle[(j + 1) % L]);
        int b = q.arrow_between(cycle[(j + 1) % L], cycle[(j + 2) % L]);
        if (a < 0 || b < 0 || !q.is_relation(a, b)) throw InvalidInput("not a full-relation cycle");
    }
    const int c = m / 2 + 1;
    std::map<int, VertexRole> out;
    for (int j = 0; j < L; ++j)
        out[cycle[j]] = (j == 0 || j == c) ? VertexRole::Connector : j < c ? VertexRole::B : VertexRole::A;
    return out;
}

long default_step_cap(int s, int m) {
    if (const char* env = std::getenv("MCW_CAP")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
        throw InvalidInput("MCW_CAP must be a positive integer");
    }
    return 50L * s * (m + 2);
}

namespace {

using Pair = std::pair<int, int>;
using PairSet = std::set<Pair>;
using Cyc = std::vector<int>;

struct State {
    std::optional<std::vector<Diagonal>> labels;  // present while realizable
    QuiverWithRelations q;

    std::string key() const {
        std::ostringstream os;
        if (labels) {
            os << 'g';
            for (auto d : *labels) os << ' ' << d.a << ',' << d.b;
            return os.str();
        }
        os << 'a';
        std::vector<Pair> arr;
        for (const auto& a : q.arrows) arr.push_back({a.source, a.target});
        std::sort(arr.begin(), arr.end());
        for (auto [s, t] : arr) os << ' ' << s << '>' << t;
        os << " |";
        for (auto t : q.relation_triples()) os << ' ' << t[0] << ',' << t[1] << ',' << t[2];
        return os.str();
    }
};

struct Move {
    MoveRecord::Kind kind = MoveRecord::Kind::Plus;
    int v = -1;
    std::vector<int> chain;
    bool algebra = false;  // algebra-level even while realizable
};

Move mu(int v, int k) { return {k > 0 ? MoveRecord::Kind::Plus : MoveRecord::Kind::Minus, v, {}}; }
Move rr(std::vector<int> chain) { return {MoveRecord::Kind::RelRem, -1, std::move(chain)}; }

std::string site_string(const std::vector<int>& site) {
    std::string s;
    for (int v : site) s += (s.empty() ? "" : ",") + std::to_string(v);
    return s;
}

bool comp_ok(const QuiverWithRelations& a, const QuiverWithRelations& b) { return preserves_invariant(a, b); }

PairSet arrow_pairs(const QuiverWithRelations& q) {
    PairSet s;
    for (const auto& a : q.arrows) s.insert({a.source, a.target});
    return s;
}

PairSet cyc_arrows(const Cyc& C) {
    PairSet s;
    for (size_t i = 0; i < C.size(); ++i) s.insert({C[i], C[(i + 1) % C.size()]});
    return s;
}

bool same_set(const Cyc& a, const Cyc& b) { return std::set<int>(a.begin(), a.end()) == std::set<int>(b.begin(), b.end()); }

bool contains(const Cyc& c, int v) { return std::find(c.begin(), c.end(), v) != c.end(); }

int overlap(const Cyc& a, const Cyc& b) {
    int n = 0;
    for (int x : a) n += contains(b, x);
    return n;
}

std::vector<Cyc> full_cycles(const QuiverWithRelations& q, const std::set<int>& verts) {
    std::vector<Cyc> out;
    for (const auto& c : full_relation_cycles(q).cycles) {
        if (!c.full_relations) continue;
        auto vs = c.vertices(q);
        if (std::all_of(vs.begin(), vs.end(), [&](int v) { return verts.count(v) > 0; })) out.push_back(vs);
    }
    return out;
}

// arrows at v outside the allowed set, sorted
std::vector<Pair> ext(const QuiverWithRelations& q, int v, const PairSet& allowed) {
    std::vector<Pair> out;
    for (const auto& a : q.arrows) {
        Pair p{a.source, a.target};
        if ((a.source == v || a.target == v) && !allowed.count(p)) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Cyc positions(const Cyc& C, int v0, bool forward) {
    const int L = int(C.size());
    int i = int(std::find(C.begin(), C.end(), v0) - C.begin());
    Cyc out;
    for (int j = 0; j < L; ++j) out.push_back(forward ? C[(i + j) % L] : C[((i - j) % L + L) % L]);
    return out;
}

// chain u -> w -> ... continued through relations
std::vector<int> chain_out(const QuiverWithRelations& q, int u, int w) {
    int a = q.arrow_between(u, w);
    if (a < 0) return {};
    return relation_chain_from(q, a);
}

// chain ... -> x -> u ending with the arrow x -> u, listed in arrow direction
std::vector<int> chain_into(const QuiverWithRelations& q, int u, int x) {
    int a = q.arrow_between(x, u);
    if (a < 0) return {};
    auto ch = relation_chain_from(opposite(q), a);
    std::reverse(ch.begin(), ch.end());
    return ch;
}

std::vector<int> path_from(const std::vector<Pair>& arr, int root) {
    std::map<int, std::vector<int>> adj;
    for (auto [a, b] : arr) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> p{root};
    int prev = std::numeric_limits<int>::min();
    for (;;) {
        std::vector<int> nx;
        for (int y : adj[p.back()])
            if (y != prev) nx.push_back(y);
        if (nx.size() > 1) return {};
        if (nx.empty()) return p;
        prev = p.back();
        p.push_back(nx[0]);
        if (p.size() > arr.size() + 1) return {};
    }
}

struct TailInfo {
    std::vector<int> tv;
    std::vector<Pair> arr;
    std::vector<std::array<int, 3>> rels;
};

TailInfo tail_info(const QuiverWithRelations& q, const std::set<int>& tvset) {
    TailInfo ti;
    ti.tv.assign(tvset.begin(), tvset.end());
    for (const auto& a : q.arrows)
        if (tvset.count(a.source) && tvset.count(a.target)) ti.arr.push_back({a.source, a.target});
    for (auto t : q.relation_triples())
        if (tvset.count(t[0]) && tvset.count(t[1]) && tvset.count(t[2])) ti.rels.push_back(t);
    return ti;
}

struct TailState {
    int nr = 0;
    int nw = 0;
    bool path = false;
};

constexpr int kNotPath = 1000000;

TailState tail_state(const QuiverWithRelations& q, const std::set<int>& tvset, std::optional<int> root) {
    auto ti = tail_info(q, tvset);
    if (!ti.rels.empty()) return {int(ti.rels.size()), 0, false};
    PairSet A(ti.arr.begin(), ti.arr.end());
    std::vector<int> ends;
    if (root) {
        ends = {*root};
    } else {
        std::map<int, int> deg;
        for (auto [a, b] : ti.arr) deg[a]++, deg[b]++;
        for (int v : ti.tv)
            if (deg[v] <= 1) ends.push_back(v);
    }
    int best = -1;
    for (int e : ends) {
        auto P = path_from(ti.arr, e);
        if (P.size() != ti.tv.size()) return {0, kNotPath, false};
        int w = 0;
        for (size_t i = 1; i < P.size(); ++i) w += A.count({P[i], P[i - 1]});
        if (best < 0 || w < best) best = w;
    }
    if (best < 0) return {0, kNotPath, false};
    return {0, best, true};
}

using Goal = std::function<bool(const State&)>;

class Reducer {
  public:
    Reducer(std::optional<PolygonParams> p, State st, std::vector<int> comp, long cap)
        : p_(p), st_(std::move(st)), comp_(std::move(comp)), compset_(comp_.begin(), comp_.end()), cap_(cap) {}

    const State& state() const { return st_; }
    std::vector<MoveRecord>& steps() { return steps_; }
    int fallbacks() const { return fallbacks_; }
    void set_phase(std::string p) { phase_ = std::move(p); }

    void run();
    void tail_phase(std::optional<int> root, const std::set<int>& protected_set, bool linearize_only);
    bool sweep_leaf(const std::set<int>& tvset, const std::set<int>& prot, std::optional<int> only_leaf);

  private:
    std::optional<State> try_move(const State& s, const Move& mv) const;
    bool apply(const Move& mv);
    bool try_moves(const std::vector<Move>& mvs);
    void fallback(const std::set<int>& protected_set, const Goal& goal, const std::string& tag);
    std::optional<std::vector<Move>> bfs_goal(const std::set<int>& protected_set, const Goal& goal) const;

    std::vector<Cyc> cycles() const { return full_cycles(st_.q, compset_); }
    std::optional<Cyc> find_cycle(const QuiverWithRelations& q, int v0, const Cyc& old,
                                  const std::vector<Cyc>& exclude) const;
    std::optional<Cyc> best_overlap(const QuiverWithRelations& q, const Cyc& old) const;
    std::set<int> attach_vertex(const QuiverWithRelations& q, const Cyc& C, const std::vector<Cyc>& cyc) const;
    std::optional<int> anchor(const QuiverWithRelations& q, const Cyc& C, int old_v0, int r) const;
    bool init_cleared(const QuiverWithRelations& q, const Cyc& old, int v0, int r) const;
    std::pair<Cyc, int> clear_initial(Cyc C, int v0, int r);
    Cyc clear_cycle(int v0, Cyc Cset, const std::vector<int>& idxs, bool forward, bool dual,
                    const std::set<int>& protected_set, const PairSet& prefix_arrows, const std::vector<Cyc>& exclude,
                    const std::string& tag);
    DerivedInvariant comp_invariant(const QuiverWithRelations& q) const {
        return derived_invariant(induced_subquiver(q, comp_));
    }

    std::optional<PolygonParams> p_;
    State st_;
    std::vector<int> comp_;
    std::set<int> compset_;
    long cap_;
    std::vector<MoveRecord> steps_;
    int fallbacks_ = 0;
    std::string phase_;
};

std::optional<State> Reducer::try_move(const State& s, const Move& mv) const {
    const auto& q = s.q;
    if (mv.kind == MoveRecord::Kind::RelRem) {
        if (!relation_chain_ok(q, mv.chain)) return std::nullopt;
        State t{std::nullopt, remove_relation_chain(q, mv.chain)};
        if (happel_hom_dims(relation_chain_complexes(q, mv.chain), cartan(q)) != cartan(t.q)) return std::nullopt;
        return t;
    }
    const bool plus = mv.kind == MoveRecord::Kind::Plus;
    if (!(plus ? plus_applicable(q, mv.v) : minus_applicable(q, mv.v))) return std::nullopt;
    State t;
    if (s.labels && !mv.algebra) {
        auto lm = geometric_mutation_labeled(*p_, *s.labels, mv.v, plus ? 1 : -1);
        t.labels = std::move(lm.labels);
        t.q = std::move(lm.quiver);
    } else {
        t.q = plus ? mutate_plus_raw(q, mv.v) : mutate_minus_raw(q, mv.v);
    }
    if (!comp_ok(q, t.q)) return std::nullopt;
    // without a geometric witness the alternating-sum prediction is the only check
    if (!t.labels && happel_hom_dims(plus ? plus_complexes(q, mv.v) : minus_complexes(q, mv.v), cartan(q)) != cartan(t.q))
        return std::nullopt;
    return t;
}

bool Reducer::apply(const Move& mv) {
    auto t = try_move(st_, mv);
    if (!t) return false;
    const auto& q = st_.q;
    MoveRecord rec;
    rec.kind = mv.kind;
    rec.phase = phase_;
    rec.before = comp_invariant(q);
    rec.after = comp_invariant(t->q);
    std::vector<GradedProjective> cx;
    if (mv.kind == MoveRecord::Kind::RelRem) {
        rec.site = mv.chain;
        cx = relation_chain_complexes(q, mv.chain);
    } else {
        rec.site = {mv.v};
        const bool plus = mv.kind == MoveRecord::Kind::Plus;
        cx = plus ? plus_complexes(q, mv.v) : minus_complexes(q, mv.v);
        if (st_.labels && !mv.algebra) {
            rec.geometric = true;
            rec.from = (*st_.labels)[mv.v];
            rec.to = (*t->labels)[mv.v];
            auto alg = plus ? mutate_plus_raw(q, mv.v) : mutate_minus_raw(q, mv.v);
            if (!same_labeled(alg, t->q))
                throw InvariantFailure("algebra-level and geometric mutation disagree at vertex " +
                                       std::to_string(mv.v));
        }
    }
    if (!rec.before.same_record(rec.after))
        throw InvariantFailure(kind_name(mv.kind) + " step changed the derived invariant");
    if (happel_hom_dims(cx, cartan(q)) != cartan(t->q))
        throw InvariantFailure(kind_name(mv.kind) + " step at " + site_string(rec.site) + (rec.geometric ? " (geometric)" : "") +
                               " disagrees with the alternating-sum prediction; state " + st_.key());
    st_ = std::move(*t);
    steps_.push_back(std::move(rec));
    if (long(steps_.size()) > cap_)
        throw CapExceeded("reduction exceeded the step cap of " + std::to_string(cap_));
    return true;
}

bool Reducer::try_moves(const std::vector<Move>& mvs) {
    for (const auto& mv : mvs)
        if (apply(mv)) return true;
    return false;
}

std::optional<std::vector<Move>> Reducer::bfs_goal(const std::set<int>& protected_set, const Goal& goal) const {
    constexpr size_t kDepth = 8, kLimit = 20000;
    std::unordered_set<std::string> seen{st_.key()};
    std::deque<std::pair<State, std::vector<Move>>> dq;
    dq.push_back({st_, {}});
    while (!dq.empty()) {
        auto [s, path] = std::move(dq.front());
        dq.pop_front();
        if (goal(s)) return path;
        if (path.size() >= kDepth || seen.size() > kLimit) continue;
        std::vector<std::pair<State, Move>> cand;
        for (int v : comp_) {
            if (protected_set.count(v)) continue;
            for (int k : {1, -1}) {
                auto t = try_move(s, mu(v, k));
                if (t) cand.push_back({std::move(*t), mu(v, k)});
            }
        }
        for (auto [a, b] : s.q.relations) {
            int u = s.q.arrows[a].source;
            if (!compset_.count(u)) continue;
            auto ch = chain_out(s.q, u, s.q.arrows[a].target);
            if (ch.size() < 3) continue;
            if (std::any_of(ch.begin() + 1, ch.end() - 1, [&](int x) { return protected_set.count(x) > 0; }))
                continue;
            auto t = try_move(s, rr(ch));
            if (t) cand.push_back({std::move(*t), rr(ch)});
        }
        // neighbouring components can block every geometric move
        if (s.labels)
            for (int v : comp_) {
                if (protected_set.count(v)) continue;
                for (int k : {1, -1}) {
                    auto mv = mu(v, k);
                    mv.algebra = true;
                    auto t = try_move(s, mv);
                    if (t) cand.push_back({std::move(*t), mv});
                }
            }
        for (auto& [t, mv] : cand) {
            if (!seen.insert(t.key()).second) continue;
            auto p2 = path;
            p2.push_back(mv);
            dq.push_back({std::move(t), std::move(p2)});
        }
    }
    return std::nullopt;
}

void Reducer::fallback(const std::set<int>& protected_set, const Goal& goal, const std::string& tag) {
    ++fallbacks_;
    auto path = bfs_goal(protected_set, goal);
    if (!path)
        throw InvariantFailure("reduction stuck in phase " + tag + " after " + std::to_string(steps_.size()) +
                               " steps");
    auto saved = phase_;
    phase_ = tag + ":search";
    for (const auto& mv : *path)
        if (!apply(mv)) throw InvariantFailure("search path could not be replayed");
    phase_ = saved;
}

std::optional<Cyc> Reducer::find_cycle(const QuiverWithRelations& q, int v0, const Cyc& old,
                                       const std::vector<Cyc>& exclude) const {
    std::optional<Cyc> best;
    int score = -1;
    for (const auto& C : full_cycles(q, compset_)) {
        if (!contains(C, v0)) continue;
        if (std::any_of(exclude.begin(), exclude.end(), [&](const Cyc& E) { return same_set(C, E); })) continue;
        int sc = overlap(C, old);
        if (sc > score) {
            score = sc;
            best = C;
        }
    }
    return best;
}

std::optional<Cyc> Reducer::best_overlap(const QuiverWithRelations& q, const Cyc& old) const {
    std::optional<Cyc> best;
    int score = -1;
    for (const auto& C : full_cycles(q, compset_)) {
        int sc = overlap(C, old);
        if (sc > score) {
            score = sc;
            best = C;
        }
    }
    if (score <= 0) return std::nullopt;
    return best;
}

// cycle vertices through which other cycles are reached
std::set<int> Reducer::attach_vertex(const QuiverWithRelations& q, const Cyc& C, const std::vector<Cyc>& cyc) const {
    std::set<int> Cs(C.begin(), C.end());
    auto allow = cyc_arrows(C);
    std::map<int, std::set<int>> adj;
    for (const auto& a : q.arrows) {
        if (allow.count({a.source, a.target})) continue;
        adj[a.source].insert(a.target);
        adj[a.target].insert(a.source);
    }
    std::vector<Cyc> others;
    for (const auto& D : cyc)
        if (!same_set(D, C)) others.push_back(D);
    std::set<int> hits;
    for (int u : C) {
        std::set<int> seen{u};
        std::vector<int> stack{u};
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int y : adj[x])
                if (!seen.count(y) && !Cs.count(y)) {
                    seen.insert(y);
                    stack.push_back(y);
                }
        }
        for (const auto& D : others) {
            bool hit = contains(D, u);
            for (int y : seen)
                if (y != u && contains(D, y)) hit = true;
            if (hit) hits.insert(u);
        }
    }
    return hits;
}

std::optional<int> Reducer::anchor(const QuiverWithRelations& q, const Cyc& C, int old_v0, int r) const {
    auto h = attach_vertex(q, C, full_cycles(q, compset_));
    if (r >= 2) {
        if (h.size() != 1) return std::nullopt;
        return *h.begin();
    }
    if (contains(C, old_v0)) return old_v0;
    auto arr = arrow_pairs(q);
    for (int x : C)
        if (arr.count({x, old_v0}) || arr.count({old_v0, x})) return x;
    return *std::min_element(C.begin(), C.end());
}

bool Reducer::init_cleared(const QuiverWithRelations& q, const Cyc& old, int v0, int r) const {
    auto C = best_overlap(q, old);
    if (!C) return false;
    auto v = anchor(q, *C, v0, r);
    if (!v) return false;
    auto al = cyc_arrows(*C);
    int dirty = 0;
    for (int x : *C)
        if (!ext(q, x, al).empty() && (r == 1 || x != *v)) ++dirty;
    return r == 1 ? dirty <= 1 : dirty == 0;
}

std::pair<Cyc, int> Reducer::clear_initial(Cyc C, int v0, int r) {
    const int m = st_.q.m;
    std::unordered_set<std::string> seen;
    long guard = 0;
    for (;;) {
        ++guard;
        auto C2 = best_overlap(st_.q, C);
        std::optional<int> v;
        if (C2) v = anchor(st_.q, *C2, v0, r);
        if (!C2 || !v || guard > 8L * (m + 2) * long(comp_.size()) || seen.count(st_.key())) {
            Cyc oldC = C;
            int oldv = v0;
            fallback({}, [this, oldC, oldv, r](const State& s) { return init_cleared(s.q, oldC, oldv, r); }, "initial");
            seen.clear();
            guard = 0;
            continue;
        }
        C = *C2;
        v0 = *v;
        seen.insert(st_.key());
        auto P = positions(C, v0, false);
        auto al = cyc_arrows(C);
        std::vector<int> dirty;
        for (int j = 1; j <= m + 1; ++j)
            if (!ext(st_.q, P[j], al).empty()) dirty.push_back(j);
        if (dirty.empty()) return {C, v0};
        if (r == 1 && dirty.size() == 1 && ext(st_.q, v0, al).empty()) return {C, P[dirty[0]]};
        int u = P[dirty[0]];
        auto E = ext(st_.q, u, al);
        std::vector<Move> mvs;
        std::optional<int> w;
        bool has_in = false;
        for (auto [a, b] : E) {
            if (b == u) has_in = true;
            if (a == u && !w) w = b;
        }
        if (has_in) {
            mvs.push_back(mu(u, 1));
        } else {
            auto ch = chain_out(st_.q, u, *w);
            if (ch.size() >= 3) mvs.push_back(rr(ch));
            mvs.push_back(mu(*w, 1));
            mvs.push_back(mu(*w, -1));
        }
        if (!try_moves(mvs)) guard = std::numeric_limits<long>::max() / 2;
    }
}

Cyc Reducer::clear_cycle(int v0, Cyc Cset, const std::vector<int>& idxs, bool forward, bool dual,
                         const std::set<int>& protected_set, const PairSet& prefix_arrows,
                         const std::vector<Cyc>& exclude, const std::string& tag) {
    const int m = st_.q.m;
    std::vector<int> done;
    for (int i : idxs) {
        std::unordered_set<std::string> seen;
        long guard = 0;
        for (;;) {
            ++guard;
            auto C = find_cycle(st_.q, v0, Cset, exclude);
            if (!C) throw InvariantFailure("reduction lost track of the current cycle");
            Cset = *C;
            auto P = positions(Cset, v0, forward);
            auto allowed = cyc_arrows(Cset);
            allowed.insert(prefix_arrows.begin(), prefix_arrows.end());
            auto todo = done;
            todo.push_back(i);
            std::vector<int> dirty;
            for (int j : todo)
                if (!ext(st_.q, P[j], allowed).empty()) dirty.push_back(j);
            if (dirty.empty()) break;
            if (seen.count(st_.key()) || guard > 4L * (m + 2)) {
                Cyc oldC = Cset;
                auto goal = [this, v0, oldC, exclude, forward, prefix_arrows, todo](const State& s) {
                    auto C2 = find_cycle(s.q, v0, oldC, exclude);
                    if (!C2) return false;
                    auto P2 = positions(*C2, v0, forward);
                    auto al = cyc_arrows(*C2);
                    al.insert(prefix_arrows.begin(), prefix_arrows.end());
                    for (int jj : todo)
                        if (!ext(s.q, P2[jj], al).empty()) return false;
                    return true;
                };
                auto prot = protected_set;
                prot.insert(v0);
                fallback(prot, goal, tag);
                seen.clear();
                guard = 0;
                continue;
            }
            seen.insert(st_.key());
            int u = P[dirty[0]];
            auto E = ext(st_.q, u, allowed);
            std::optional<int> in_src, out_tgt;
            for (auto [a, b] : E) {
                if (b == u && !in_src) in_src = a;
                if (a == u && !out_tgt) out_tgt = b;
            }
            std::vector<Move> mvs;
            if (!dual) {
                if (in_src) {
                    mvs.push_back(mu(u, 1));
                } else {
                    int w = *out_tgt;
                    auto ch = chain_out(st_.q, u, w);
                    if (ch.size() >= 3) mvs.push_back(rr(ch));
                    mvs.push_back(mu(w, 1));
                    mvs.push_back(mu(w, -1));
                }
            } else {
                if (out_tgt) {
                    mvs.push_back(mu(u, -1));
                } else {
                    int x = *in_src;
                    auto ch = chain_into(st_.q, u, x);
                    if (ch.size() >= 3) mvs.push_back(rr(ch));
                    mvs.push_back(mu(x, -1));
                    mvs.push_back(mu(x, 1));
                }
            }
            std::vector<Move> ok;
            for (const auto& mv : mvs)
                if (mv.kind == MoveRecord::Kind::RelRem || (!protected_set.count(mv.v) && mv.v != v0)) ok.push_back(mv);
            if (!try_moves(ok)) guard = std::numeric_limits<long>::max() / 2;
        }
        done.push_back(i);
    }
    return Cset;
}

void Reducer::run() {
    const int m = st_.q.m;
    auto cyc = cycles();
    const int r = int(cyc.size());
    std::set<int> protected_set;
    PairSet prefix_arrows;
    std::vector<Cyc> prefix;
    std::optional<int> root;
    if (r >= 1) {
        set_phase("initial");
        std::vector<Cyc> order = cyc;
        std::sort(order.begin(), order.end(), [](Cyc a, Cyc b) {
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            return a < b;
        });
        std::optional<Cyc> init;
        int v0 = -1;
        for (const auto& C : order) {
            auto h = attach_vertex(st_.q, C, cyc);
            if (h.size() > 1) continue;
            if (!h.empty()) {
                v0 = *h.begin();
            } else {
                auto al = cyc_arrows(C);
                std::map<int, int> cnt;
                for (const auto& a : st_.q.arrows) {
                    if (al.count({a.source, a.target})) continue;
                    for (int x : {a.source, a.target})
                        if (contains(C, x)) cnt[x]++;
                }
                v0 = C[0];
                for (int x : C)
                    if (cnt[x] > cnt[v0] || (cnt[x] == cnt[v0] && x < v0)) v0 = x;
            }
            init = C;
            break;
        }
        if (!init) throw InvariantFailure("no initial cycle found");
        auto [C, a0] = clear_initial(*init, v0, r);
        prefix.push_back(C);
        protected_set.insert(C.begin(), C.end());
        auto ca = cyc_arrows(C);
        prefix_arrows.insert(ca.begin(), ca.end());
        int vc = a0;
        const int c = m / 2 + 1;
        for (int k = 1; k < r; ++k) {
            set_phase("attach");
            const auto& q = st_.q;
            std::map<int, std::set<int>> adj;
            for (const auto& a : q.arrows) {
                adj[a.source].insert(a.target);
                adj[a.target].insert(a.source);
            }
            std::map<int, int> dist{{vc, 0}};
            std::deque<int> dq{vc};
            while (!dq.empty()) {
                int x = dq.front();
                dq.pop_front();
                for (int y : adj[x])
                    if (!dist.count(y)) {
                        dist[y] = dist[x] + 1;
                        dq.push_back(y);
                    }
            }
            auto in_prefix = [&prefix](const Cyc& D) {
                return std::any_of(prefix.begin(), prefix.end(), [&](const Cyc& P) { return same_set(D, P); });
            };
            auto dget = [&dist](int x) {
                auto it = dist.find(x);
                return it == dist.end() ? 1 << 20 : it->second;
            };
            std::optional<Cyc> D;
            std::pair<int, Cyc> dkey;
            for (const auto& E : cycles()) {
                if (in_prefix(E)) continue;
                int md = 1 << 30;
                for (int x : E) md = std::min(md, dget(x));
                Cyc s = E;
                std::sort(s.begin(), s.end());
                std::pair<int, Cyc> key{md, s};
                if (!D || key < dkey) {
                    D = E;
                    dkey = key;
                }
            }
            if (!D) throw InvariantFailure("next cycle not found");
            int w = (*D)[0];
            for (int x : *D)
                if (std::make_pair(dget(x), x) < std::make_pair(dget(w), w)) w = x;
            Cyc Dset = *D;
            long guard = 0;
            std::unordered_set<std::string> seen;
            auto shares_vc = [this, vc, prefix](const QuiverWithRelations& qq) {
                for (const auto& E : full_cycles(qq, compset_)) {
                    if (!contains(E, vc)) continue;
                    if (std::any_of(prefix.begin(), prefix.end(), [&](const Cyc& P) { return same_set(E, P); }))
                        continue;
                    return true;
                }
                return false;
            };
            for (;;) {
                ++guard;
                if (shares_vc(st_.q)) break;
                auto Dc = find_cycle(st_.q, w, Dset, prefix);
                if (!Dc || seen.count(st_.key()) || guard > 4L * (m + 2) * long(comp_.size())) {
                    fallback(protected_set, [&shares_vc](const State& s) { return shares_vc(s.q); }, "attach");
                    seen.clear();
                    guard = 0;
                    continue;
                }
                seen.insert(st_.key());
                Dset = *Dc;
                auto allowed = cyc_arrows(*Dc);
                allowed.insert(prefix_arrows.begin(), prefix_arrows.end());
                auto E = ext(st_.q, w, allowed);
                if (E.empty()) {
                    guard = std::numeric_limits<long>::max() / 2;
                    continue;
                }
                auto far = [&](const Pair& a) { return dget(a.second == w ? a.first : a.second); };
                std::stable_sort(E.begin(), E.end(),
                                 [&](const Pair& x, const Pair& y) { return std::make_pair(far(x), x) < std::make_pair(far(y), y); });
                auto a = E[0];
                std::vector<Move> mv;
                if (a.second == w) {
                    auto ch = chain_into(st_.q, w, a.first);
                    size_t t = ch.size() - 2;
                    mv.assign(t + 1, mu(w, 1));
                } else {
                    auto ch = chain_out(st_.q, w, a.second);
                    size_t t = ch.size() - 2;
                    mv.assign(t + 1, mu(w, -1));
                }
                for (const auto& x : mv)
                    if (!apply(x)) {
                        guard = std::numeric_limits<long>::max() / 2;
                        break;
                    }
            }
            Cyc Ck;
            for (const auto& E : cycles())
                if (contains(E, vc) && !in_prefix(E)) {
                    Ck = E;
                    break;
                }
            if (m + 1 > c) {
                set_phase("A");
                std::vector<int> idx;
                for (int j = m + 1; j > c; --j) idx.push_back(j);
                Ck = clear_cycle(vc, Ck, idx, true, false, protected_set, prefix_arrows, prefix, "A");
            }
            if (c > 1) {
                set_phase("B");
                std::vector<int> idx;
                for (int j = 1; j < c; ++j) idx.push_back(j);
                Ck = clear_cycle(vc, Ck, idx, true, true, protected_set, prefix_arrows, prefix, "B");
            }
            std::vector<int> idx;
            for (int j = 1; j <= m + 1; ++j)
                if (j != c) idx.push_back(j);
            auto clean = [this, vc, idx, prefix, prefix_arrows](const QuiverWithRelations& qq, const Cyc& old) {
                auto C2 = find_cycle(qq, vc, old, prefix);
                if (!C2) return false;
                auto P2 = positions(*C2, vc, true);
                auto al = cyc_arrows(*C2);
                al.insert(prefix_arrows.begin(), prefix_arrows.end());
                for (int j : idx)
                    if (!ext(qq, P2[j], al).empty()) return false;
                return true;
            };
            if (!clean(st_.q, Ck)) {
                Cyc old = Ck;
                fallback(protected_set, [&clean, old](const State& s) { return clean(s.q, old); }, "AB");
                auto f = find_cycle(st_.q, vc, Ck, prefix);
                if (!f) throw InvariantFailure("reduction lost track of the current cycle");
                Ck = *f;
            }
            prefix.push_back(Ck);
            protected_set.insert(Ck.begin(), Ck.end());
            auto ka = cyc_arrows(Ck);
            prefix_arrows.insert(ka.begin(), ka.end());
            vc = positions(Ck, vc, true)[c];
        }
        root = vc;
    }
    set_phase("tail");
    tail_phase(root, protected_set, false);
}

bool Reducer::sweep_leaf(const std::set<int>& tvset, const std::set<int>& prot, std::optional<int> only_leaf) {
    auto ti = tail_info(st_.q, tvset);
    const size_t before = ti.rels.size();
    std::map<int, std::set<int>> adj;
    for (auto [a, b] : ti.arr) {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    std::map<int, std::array<int, 3>> relmid;
    for (auto t : ti.rels) relmid[t[1]] = t;
    std::vector<int> leaves;
    for (int v : ti.tv)
        if (adj[v].size() == 1 && !prot.count(v) && (!only_leaf || v == *only_leaf)) leaves.push_back(v);
    for (int e : leaves) {
        int prev = std::numeric_limits<int>::min(), cur = e;
        std::vector<int> path{e};
        while (!relmid.count(cur)) {
            std::vector<int> nx;
            for (int y : adj[cur])
                if (y != prev) nx.push_back(y);
            if (nx.size() != 1) break;
            prev = cur;
            cur = nx[0];
            path.push_back(cur);
        }
        if (!relmid.count(cur)) continue;
        const int x = cur;
        const auto t = relmid[x];
        if (prot.count(x)) continue;
        for (size_t cnt = 0; cnt < path.size(); ++cnt)
            for (auto [kx, ky] : {std::pair{1, -1}, std::pair{-1, 1}}) {
                State save = st_;
                size_t nsteps = steps_.size();
                bool ok = true;
                for (size_t i = 0; i < cnt && ok; ++i) ok = apply(mu(x, kx));
                if (ok)
                    for (int y : {t[0], t[2]}) {
                        if (prot.count(y)) continue;
                        State s2 = st_;
                        size_t n2 = steps_.size();
                        if (apply(mu(y, ky)) && tail_info(st_.q, tvset).rels.size() < before) return true;
                        st_ = s2;
                        steps_.resize(n2);
                    }
                st_ = save;
                steps_.resize(nsteps);
            }
    }
    return false;
}

void Reducer::tail_phase(std::optional<int> root, const std::set<int>& protected_set, bool linearize_only) {
    std::set<int> tvset;
    for (int v : comp_)
        if (!protected_set.count(v)) tvset.insert(v);
    if (root) tvset.insert(*root);
    auto prot = protected_set;
    if (root) prot.insert(*root);
    for (int guard = 0;; ++guard) {
        if (guard > 200) throw InvariantFailure("tail phase did not settle");
        auto ts = tail_state(st_.q, tvset, root);
        if (ts.nr) {
            if (linearize_only) throw RejectedMove("relations present in the tail");
            if (!sweep_leaf(tvset, prot, std::nullopt)) {
                int b = ts.nr;
                fallback(prot, [tvset, root, b](const State& s) { return tail_state(s.q, tvset, root).nr < b; },
                         "tail-relation");
            }
            continue;
        }
        if (ts.nw == 0) return;
        if (!ts.path) throw InvariantFailure("cycle-free part is not a path");
        auto ti = tail_info(st_.q, tvset);
        PairSet A(ti.arr.begin(), ti.arr.end());
        std::vector<Move> cands;
        std::vector<int> ends = root ? std::vector<int>{*root} : ti.tv;
        for (int e : ends) {
            auto P = path_from(ti.arr, e);
            if (P.size() != ti.tv.size()) continue;
            std::vector<size_t> w;
            for (size_t i = 1; i < P.size(); ++i)
                if (A.count({P[i], P[i - 1]})) w.push_back(i);
            if (int(w.size()) == ts.nw && !prot.count(P[w.back()])) cands.push_back(mu(P[w.back()], -1));
        }
        if (!try_moves(cands)) {
            int b = ts.nw;
            fallback(prot,
                     [tvset, root, b](const State& s) {
                         auto x = tail_state(s.q, tvset, root);
                         return x.nr == 0 && x.nw < b;
                     },
                     "linearize");
        }
    }
}

NormalFormSpec spec_of(const QuiverWithRelations& comp) {
    return {comp.vertex_count, full_relation_cycles(comp).full_count(), comp.m};
}

ReductionTrace finish(Reducer& R, const std::vector<int>& comp, bool ran) {
    ReductionTrace tr;
    tr.component = comp;
    tr.steps = R.steps();
    tr.fallbacks = R.fallbacks();
    tr.final = induced_subquiver(R.state().q, comp);
    tr.target = spec_of(tr.final);
    auto iso = iso_quivers(tr.final, build_normal_form(tr.target));
    if (!iso)
        throw InvariantFailure(ran ? "reduction ended away from the normal form"
                                   : "component is not in normal form");
    tr.iso = *iso;
    return tr;
}

ReductionTrace reduce_state(std::optional<PolygonParams> p, State st, const std::vector<int>& comp,
                            const ReduceOptions& opt) {
    auto sub = induced_subquiver(st.q, comp);
    auto spec = spec_of(sub);
    long cap = opt.cap ? *opt.cap : default_step_cap(spec.s, spec.m);
    Reducer R(p, std::move(st), comp, cap);
    if (iso_quivers(sub, build_normal_form(spec))) return finish(R, comp, false);
    R.run();
    return finish(R, comp, true);
}

std::vector<int> component_containing(const QuiverWithRelations& q, int v) {
    for (auto& block : component_partition(q))
        if (std::find(block.begin(), block.end(), v) != block.end()) return block;
    throw InvalidInput("no such vertex " + std::to_string(v));
}

}  // namespace

ReductionTrace reduce(const Dissection& t, int component, const ReduceOptions& opt) {
    auto q = quiver_of(t);
    auto parts = component_partition(q);
    if (component < 0 || component >= int(parts.size())) throw InvalidInput("no such component");
    return reduce_state(t.params, State{t.diagonals, q}, parts[component], opt);
}

ReductionTrace reduce(const QuiverWithRelations& q, const ReduceOptions& opt) {
    auto parts = component_partition(q);
    if (parts.size() != 1) throw InvalidInput("reduce expects a connected quiver");
    return reduce_state(std::nullopt, State{std::nullopt, q}, parts[0], opt);
}

QuiverWithRelations replay(const Dissection& t, const ReductionTrace& trace) {
    std::optional<std::vector<Diagonal>> labels = t.diagonals;
    auto q = quiver_of(t);
    for (const auto& s : trace.steps) {
        if (s.kind == MoveRecord::Kind::RelRem) {
            q = remove_relation_chain(q, s.site);
            labels.reset();
            continue;
        }
        if (s.site.size() != 1 || s.site[0] < 0 || s.site[0] >= q.vertex_count)
            throw InvalidInput("bad move site in trace");
        const int v = s.site[0];
        const bool plus = s.kind == MoveRecord::Kind::Plus;
        if (s.geometric) {
            if (!labels) throw InvalidInput("geometric step after leaving the dissection class");
            auto lm = geometric_mutation_labeled(t.params, *labels, v, plus ? 1 : -1);
            labels = lm.labels;
            q = lm.quiver;
        } else {
            q = plus ? tilting_mutation_plus(q, v) : tilting_mutation_minus(q, v);
            labels.reset();
        }
    }
    return induced_subquiver(q, trace.component);
}

std::vector<MoveRecord> linearize_tail(const QuiverWithRelations& q, const std::vector<int>& tail,
                                       std::optional<int> root) {
    if (tail.empty()) return {};
    auto comp = component_containing(q, tail[0]);
    std::set<int> keep(tail.begin(), tail.end());
    for (auto [x, y] : q.relations)
        if (keep.count(q.arrows[x].source) && keep.count(q.arrows[x].target) && keep.count(q.arrows[y].target))
            throw InvalidInput("tail carries relations; remove them first");
    if (root) keep.erase(*root);
    std::set<int> protected_set;
    for (int v : comp)
        if (!keep.count(v)) protected_set.insert(v);
    auto spec = spec_of(induced_subquiver(q, comp));
    Reducer R(std::nullopt, State{std::nullopt, q}, comp, default_step_cap(spec.s, spec.m));
    R.set_phase("tail");
    R.tail_phase(root, protected_set, true);
    return R.steps();
}

std::vector<MoveRecord> remove_tail_relation(const QuiverWithRelations& q, int endpoint) {
    auto comp = component_containing(q, endpoint);
    std::set<int> protected_set, tvset;
    for (const auto& c : full_relation_cycles(q).cycles)
        if (c.full_relations)
            for (int v : c.vertices(q)) protected_set.insert(v);
    for (int v : comp)
        if (!protected_set.count(v)) tvset.insert(v);
    if (!tvset.count(endpoint)) throw InvalidInput("endpoint lies on a cycle");
    int deg = 0;
    for (const auto& a : q.arrows)
        if ((a.source == endpoint && tvset.count(a.target)) || (a.target == endpoint && tvset.count(a.source))) ++deg;
    if (deg != 1) throw InvalidInput("endpoint is not a leaf of the cycle-free part");
    auto spec = spec_of(induced_subquiver(q, comp));
    Reducer R(std::nullopt, State{std::nullopt, q}, comp, default_step_cap(spec.s, spec.m));
    R.set_phase("tail");
    if (!R.sweep_leaf(tvset, protected_set, endpoint)) return {};
    return R.steps();
}

QuiverWithRelations apply_moves(const QuiverWithRelations& q, const std::vector<MoveRecord>& moves) {
    auto r = q;
    for (const auto& s : moves) {
        if (s.kind == MoveRecord::Kind::RelRem)
            r = remove_relation_chain(r, s.site);
        else if (s.kind == MoveRecord::Kind::Plus)
            r = tilting_mutation_plus(r, s.site.at(0));
        else
            r = tilting_mutation_minus(r, s.site.at(0));
    }
    return r;
}

bool derived_equivalent(const QuiverWithRelations& a, const QuiverWithRelations& b) {
    if (a.m != b.m) throw InvalidInput("quivers of different levels");
    if (component_partition(a).size() != 1 || component_partition(b).size() != 1)
        throw InvalidInput("derived_equivalent expects connected quivers");
    auto ia = derived_invariant(a), ib = derived_invariant(b);
    if (!(ia == ib)) return false;
    if (ia.snf != ib.snf) throw InvariantFailure("equal (s, r) but different Smith forms");
    return true;
}

}  // namespace mcw
