// Independent reference implementations used only by the tests.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "mcw/homology.hpp"

namespace oracle {

using mcw::Diagonal;
using mcw::IntMatrix;
using mcw::QuiverWithRelations;

// A polygon with k corners splits into (m+2)-gons, by search over a root face.
inline bool dissectable(int k, int m, std::map<int, bool>& memo) {
    if (k == 2) return true;
    if (k < m + 2) return false;
    if (k == m + 2) return true;
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    // the face on the root edge picks corners 0 = c_0 < ... < c_{m+1} = k-1
    bool ok = false;
    std::vector<int> gaps;
    std::function<void(int, int)> rec = [&](int placed, int last) {
        if (ok) return;
        if (placed == m + 1) {
            if (last == k - 1 && std::all_of(gaps.begin(), gaps.end(), [&](int g) { return dissectable(g, m, memo); }))
                ok = true;
            return;
        }
        for (int next = last + 1; next <= k - 1; ++next) {
            if (placed + 1 == m + 1 && next != k - 1) continue;
            gaps.push_back(next - last + 1);
            rec(placed + 1, next);
            gaps.pop_back();
        }
    };
    rec(0, 0);
    return memo[k] = ok;
}

inline bool allowable(Diagonal d, int N, int m) {
    std::map<int, bool> memo;
    return dissectable(d.b - d.a + 1, m, memo) && dissectable(N - (d.b - d.a) + 1, m, memo);
}

inline bool crossing(Diagonal x, Diagonal y) {
    return (x.a < y.a && y.a < x.b && x.b < y.b) || (y.a < x.a && x.a < y.b && y.b < x.b);
}

// number of (m+2)-angulations of a k-gon through the face on a root edge
inline std::uint64_t angulations(int k, int m, std::map<int, std::uint64_t>& memo) {
    if (k == 2) return 1;
    if (k < m + 2) return 0;
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    std::uint64_t total = 0;
    std::vector<int> gaps;
    std::function<void(int, int)> rec = [&](int placed, int last) {
        if (placed == m + 1) {
            if (last != k - 1) return;
            std::uint64_t prod = 1;
            for (int g : gaps) prod *= angulations(g, m, memo);
            total += prod;
            return;
        }
        for (int next = last + 1; next <= k - 1; ++next) {
            if (placed + 1 == m + 1 && next != k - 1) continue;
            gaps.push_back(next - last + 1);
            rec(placed + 1, next);
            gaps.pop_back();
        }
    };
    rec(0, 0);
    return memo[k] = total;
}

// face-rooted generation of every dissection of the polygon on corners[0..]
inline std::vector<std::vector<Diagonal>> generate(const std::vector<int>& corners, int m) {
    const int k = int(corners.size());
    if (k == 2) return {{}};
    if (k < m + 2) return {};
    std::vector<std::vector<Diagonal>> out;
    std::vector<int> pick{0};
    std::function<void(int)> rec = [&](int last) {
        if (int(pick.size()) == m + 2) {
            if (last != k - 1) return;
            std::vector<std::vector<std::vector<Diagonal>>> parts;
            std::vector<Diagonal> own;
            for (size_t i = 0; i + 1 < pick.size(); ++i) {
                std::vector<int> sub(corners.begin() + pick[i], corners.begin() + pick[i + 1] + 1);
                auto g = generate(sub, m);
                if (g.empty()) return;
                parts.push_back(g);
                if (sub.size() > 2) own.push_back({sub.front(), sub.back()});
            }
            std::vector<std::vector<Diagonal>> acc{own};
            for (const auto& alts : parts) {
                std::vector<std::vector<Diagonal>> next;
                for (const auto& a : acc)
                    for (const auto& b : alts) {
                        auto c = a;
                        c.insert(c.end(), b.begin(), b.end());
                        next.push_back(c);
                    }
                acc = std::move(next);
            }
            for (auto& a : acc) out.push_back(a);
            return;
        }
        for (int next = last + 1; next <= k - 1; ++next) {
            if (int(pick.size()) + 1 == m + 2 && next != k - 1) continue;
            pick.push_back(next);
            rec(next);
            pick.pop_back();
        }
    };
    rec(0);
    return out;
}

inline std::vector<std::vector<Diagonal>> all_dissections(int n, int m) {
    const int N = (n + 1) * m + 2;
    std::vector<int> corners(N);
    std::iota(corners.begin(), corners.end(), 0);
    auto res = generate(corners, m);
    // the root face uses edge (0, N-1) which is a boundary edge, not a diagonal
    for (auto& d : res) {
        d.erase(std::remove_if(d.begin(), d.end(), [&](Diagonal x) { return x.a == 0 && x.b == N - 1; }), d.end());
        std::sort(d.begin(), d.end());
    }
    std::sort(res.begin(), res.end());
    return res;
}

// every n-subset of allowable diagonals, pairwise non-crossing
inline std::uint64_t raw_count(int n, int m) {
    const int N = (n + 1) * m + 2;
    std::vector<Diagonal> al;
    for (int a = 0; a < N; ++a)
        for (int b = a + 2; b < N; ++b)
            if (!(a == 0 && b == N - 1) && allowable({a, b}, N, m)) al.push_back({a, b});
    std::uint64_t count = 0;
    std::vector<int> idx;
    std::function<void(int)> rec = [&](int from) {
        if (int(idx.size()) == n) {
            ++count;
            return;
        }
        for (int i = from; i < int(al.size()); ++i) {
            bool ok = true;
            for (int j : idx)
                if (crossing(al[i], al[j])) ok = false;
            if (!ok) continue;
            idx.push_back(i);
            rec(i + 1);
            idx.pop_back();
        }
    };
    rec(0);
    return count;
}

// quiver from faces found by testing every (m+2)-subset of corners
inline QuiverWithRelations face_quiver(int n, int m, const std::vector<Diagonal>& labels) {
    const int N = (n + 1) * m + 2;
    std::map<std::pair<int, int>, int> index;
    for (size_t i = 0; i < labels.size(); ++i) index[{labels[i].a, labels[i].b}] = int(i);
    auto side = [&](int x, int y) -> std::optional<int> {
        if (x > y) std::swap(x, y);
        if (y - x == 1 || (x == 0 && y == N - 1)) return -1;
        auto it = index.find({x, y});
        if (it == index.end()) return std::nullopt;
        return it->second;
    };
    QuiverWithRelations q;
    q.m = m;
    q.vertex_count = int(labels.size());
    for (auto d : labels) q.vertex_labels.push_back(d);
    std::vector<int> pick;
    std::vector<std::vector<int>> faces;
    std::function<void(int)> rec = [&](int from) {
        if (int(pick.size()) == m + 2) {
            for (int i = 0; i < m + 2; ++i)
                if (!side(pick[i], pick[(i + 1) % (m + 2)])) return;
            faces.push_back(pick);
            return;
        }
        for (int v = from; v < N; ++v) {
            if (!pick.empty() && !side(pick.back(), v)) continue;
            pick.push_back(v);
            rec(v + 1);
            pick.pop_back();
        }
    };
    rec(0);
    for (const auto& f : faces) {
        const int L = m + 2;
        std::vector<int> s(L), arrow(L, -1);
        for (int i = 0; i < L; ++i) s[i] = *side(f[i], f[(i + 1) % L]);
        for (int i = 0; i < L; ++i) {
            int prev = s[(i - 1 + L) % L];
            if (s[i] >= 0 && prev >= 0) arrow[i] = q.add_arrow(s[i], prev);
        }
        for (int i = 0; i < L; ++i) {
            int a = arrow[(i + 1) % L], b = arrow[i];
            if (a >= 0 && b >= 0) q.relations.insert({a, b});
        }
    }
    return q;
}

inline bool gentle(const QuiverWithRelations& q) {
    for (int v = 0; v < q.vertex_count; ++v)
        if (q.in_arrows(v).size() > 2 || q.out_arrows(v).size() > 2) return false;
    for (const auto& b : q.arrows) {
        int zero_in = 0, nonzero_in = 0, zero_out = 0, nonzero_out = 0;
        for (int a : q.in_arrows(b.source)) (q.is_relation(a, b.id) ? zero_in : nonzero_in)++;
        for (int c : q.out_arrows(b.target)) (q.is_relation(b.id, c) ? zero_out : nonzero_out)++;
        if (zero_in > 1 || nonzero_in > 1 || zero_out > 1 || nonzero_out > 1) return false;
    }
    return true;
}

// simple oriented cycles as arrow lists; full when every consecutive pair is a relation
struct Cycles {
    std::vector<std::vector<int>> all;
    std::vector<bool> full;
};
inline Cycles cycles(const QuiverWithRelations& q) {
    Cycles c;
    std::vector<int> path;
    std::vector<char> used(q.vertex_count, 0);
    for (int s = 0; s < q.vertex_count; ++s) {
        std::function<void(int)> dfs = [&](int v) {
            for (int a : q.out_arrows(v)) {
                int t = q.arrows[a].target;
                if (t == s) {
                    path.push_back(a);
                    c.all.push_back(path);
                    bool f = true;
                    for (size_t i = 0; i < path.size(); ++i)
                        f = f && q.is_relation(path[i], path[(i + 1) % path.size()]);
                    c.full.push_back(f);
                    path.pop_back();
                } else if (t > s && !used[t]) {
                    used[t] = 1;
                    path.push_back(a);
                    dfs(t);
                    path.pop_back();
                    used[t] = 0;
                }
            }
        };
        used[s] = 1;
        dfs(s);
        used[s] = 0;
    }
    return c;
}

inline int full_cycle_count(const QuiverWithRelations& q) {
    auto c = cycles(q);
    return int(std::count(c.full.begin(), c.full.end(), true));
}

// every path as an arrow word; zero when some consecutive pair is a relation
inline IntMatrix cartan(const QuiverWithRelations& q) {
    IntMatrix C(q.vertex_count);
    std::vector<std::vector<int>> words;
    for (const auto& a : q.arrows) words.push_back({a.id});
    for (int v = 0; v < q.vertex_count; ++v) C(v, v) = 1;
    for (size_t len = 1; !words.empty() && len <= q.arrows.size() + 2; ++len) {
        std::vector<std::vector<int>> next;
        for (const auto& w : words) {
            C(q.arrows[w.front()].source, q.arrows[w.back()].target) += 1;
            for (int b : q.out_arrows(q.arrows[w.back()].target))
                if (!q.is_relation(w.back(), b)) {
                    auto x = w;
                    x.push_back(b);
                    next.push_back(x);
                }
        }
        words = std::move(next);
    }
    return C;
}

inline std::int64_t det(std::vector<std::vector<std::int64_t>> a) {
    const size_t n = a.size();
    if (n == 0) return 1;
    if (n == 1) return a[0][0];
    std::int64_t s = 0;
    for (size_t j = 0; j < n; ++j) {
        if (a[0][j] == 0) continue;
        std::vector<std::vector<std::int64_t>> minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<std::int64_t> row;
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(a[i][k]);
            minor.push_back(row);
        }
        s += (j % 2 ? -1 : 1) * a[0][j] * det(minor);
    }
    return s;
}

// invariant factors from gcds of k x k minors
inline std::vector<std::int64_t> snf(const IntMatrix& M) {
    const int n = M.size;
    std::vector<std::int64_t> dk{1};
    for (int k = 1; k <= n; ++k) {
        std::int64_t g = 0;
        std::vector<int> rows, cols;
        std::function<void(int, std::vector<int>&, const std::function<void()>&)> choose =
            [&](int from, std::vector<int>& acc, const std::function<void()>& f) {
                if (int(acc.size()) == k) return f();
                for (int i = from; i < n; ++i) {
                    acc.push_back(i);
                    choose(i + 1, acc, f);
                    acc.pop_back();
                }
            };
        choose(0, rows, [&] {
            choose(0, cols, [&] {
                std::vector<std::vector<std::int64_t>> sub;
                for (int r : rows) {
                    std::vector<std::int64_t> row;
                    for (int c : cols) row.push_back(M(r, c));
                    sub.push_back(row);
                }
                g = std::gcd(g, std::llabs(det(sub)));
            });
        });
        dk.push_back(g);
    }
    std::vector<std::int64_t> out;
    for (int k = 1; k <= n; ++k) out.push_back(dk[k - 1] == 0 ? 0 : dk[k] / dk[k - 1]);
    return out;
}

inline std::vector<std::int64_t> snf_of_diagonal(int n, int two, int zero) {
    std::vector<std::int64_t> d(n, 1);
    for (int i = 0; i < two; ++i) d[n - zero - two + i] = 2;
    for (int i = 0; i < zero; ++i) d[n - zero + i] = 0;
    return d;
}

inline std::set<std::array<int, 3>> labeled_relations(const QuiverWithRelations& q, const std::vector<int>& f) {
    std::set<std::array<int, 3>> r;
    for (auto [x, y] : q.relations) r.insert({f[q.arrows[x].source], f[q.arrows[x].target], f[q.arrows[y].target]});
    return r;
}

// a vertex bijection by trying every permutation
inline std::optional<std::vector<int>> iso(const QuiverWithRelations& a, const QuiverWithRelations& b) {
    if (a.vertex_count != b.vertex_count || a.arrows.size() != b.arrows.size() ||
        a.relations.size() != b.relations.size())
        return std::nullopt;
    std::set<std::pair<int, int>> bar;
    for (const auto& x : b.arrows) bar.insert({x.source, x.target});
    std::vector<int> id(b.vertex_count);
    std::iota(id.begin(), id.end(), 0);
    auto brel = labeled_relations(b, id);
    std::vector<int> p(a.vertex_count);
    std::iota(p.begin(), p.end(), 0);
    do {
        bool ok = true;
        for (const auto& x : a.arrows)
            if (!bar.count({p[x.source], p[x.target]})) {
                ok = false;
                break;
            }
        if (ok && labeled_relations(a, p) == brel) return p;
    } while (std::next_permutation(p.begin(), p.end()));
    return std::nullopt;
}

inline IntMatrix alternating_sum(const std::vector<mcw::GradedProjective>& T, const IntMatrix& C) {
    const int k = int(T.size());
    IntMatrix R(k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            for (const auto& [r, us] : T[i])
                for (const auto& [d, vs] : T[j])
                    for (int u : us)
                        for (int v : vs) R(i, j) += ((r - d) % 2 == 0 ? 1 : -1) * C(u, v);
    return R;
}

inline std::vector<std::vector<int>> partition(const QuiverWithRelations& q) {
    std::vector<int> root(q.vertex_count);
    std::iota(root.begin(), root.end(), 0);
    std::function<int(int)> find = [&](int x) { return root[x] == x ? x : root[x] = find(root[x]); };
    for (const auto& a : q.arrows) root[find(a.source)] = find(a.target);
    std::map<int, std::vector<int>> g;
    for (int v = 0; v < q.vertex_count; ++v) g[find(v)].push_back(v);
    std::vector<std::vector<int>> out;
    for (auto& [r, vs] : g) out.push_back(vs);
    std::sort(out.begin(), out.end());
    return out;
}

inline QuiverWithRelations induced(const QuiverWithRelations& q, const std::vector<int>& vs) {
    std::map<int, int> pos;
    for (size_t i = 0; i < vs.size(); ++i) pos[vs[i]] = int(i);
    QuiverWithRelations s;
    s.m = q.m;
    s.vertex_count = int(vs.size());
    std::map<int, int> amap;
    for (const auto& a : q.arrows)
        if (pos.count(a.source) && pos.count(a.target)) amap[a.id] = s.add_arrow(pos[a.source], pos[a.target]);
    for (auto [x, y] : q.relations)
        if (amap.count(x) && amap.count(y)) s.relations.insert({amap[x], amap[y]});
    return s;
}

// longest run of consecutive relations whose arrows do not all lie on one full cycle
inline int longest_relation_run(const QuiverWithRelations& q) {
    auto c = cycles(q);
    std::set<std::pair<int, int>> on_cycle;
    for (size_t i = 0; i < c.all.size(); ++i)
        if (c.full[i])
            for (size_t k = 0; k < c.all[i].size(); ++k)
                on_cycle.insert({c.all[i][k], c.all[i][(k + 1) % c.all[i].size()]});
    int best = 0;
    std::function<void(int, int)> walk = [&](int a, int len) {
        best = std::max(best, len);
        if (len > int(q.arrows.size())) return;
        for (auto [x, y] : q.relations)
            if (x == a && !on_cycle.count({x, y})) walk(y, len + 1);
    };
    for (auto [x, y] : q.relations)
        if (!on_cycle.count({x, y})) walk(y, 1);
    return best;
}

}  // namespace oracle
