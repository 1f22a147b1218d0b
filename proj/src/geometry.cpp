#include "mcw/geometry.hpp"

#include <algorithm>
#include <map>

namespace mcw {

PolygonParams PolygonParams::make(int n, int m) {
    if (n < 1 || m < 1) throw InvalidInput("n and m must be positive");
    if (n > 64 || m > 64) throw InvalidInput("polygon parameters out of range");
    return PolygonParams{n, m, (n + 1) * m + 2};
}

bool is_valid_diagonal(Diagonal d, int N) {
    if (d.a < 0 || d.b < 0 || d.a >= N || d.b >= N) return false;
    if (d.a >= d.b) return false;
    return d.b - d.a >= 2 && d.a + N - d.b >= 2;
}

Diagonal make_diagonal(int a, int b, int N) {
    Diagonal d{std::min(a, b), std::max(a, b)};
    if (!is_valid_diagonal(d, N))
        throw InvalidInput("d(" + std::to_string(a) + "," + std::to_string(b) + ") is not a diagonal of the " +
                           std::to_string(N) + "-gon");
    return d;
}

bool is_allowable(Diagonal d, const PolygonParams& p) {
    if (!is_valid_diagonal(d, p.N)) throw InvalidInput(to_string(d) + " is not a valid diagonal");
    // both pieces have vertex count = 2 mod m
    return (d.b - d.a) % p.m == 1 % p.m;
}

bool crosses(Diagonal d1, Diagonal d2) {
    if (d1.a == d2.a || d1.a == d2.b || d1.b == d2.a || d1.b == d2.b) return false;
    bool in1 = d1.a < d2.a && d2.a < d1.b;
    bool in2 = d1.a < d2.b && d2.b < d1.b;
    return in1 != in2;
}

std::string to_string(Diagonal d) { return "d(" + std::to_string(d.a) + "," + std::to_string(d.b) + ")"; }

int Dissection::index_of(Diagonal d) const {
    auto it = std::lower_bound(diagonals.begin(), diagonals.end(), d);
    if (it == diagonals.end() || *it != d) return -1;
    return int(it - diagonals.begin());
}

Dissection make_dissection(const PolygonParams& p, std::vector<Diagonal> diagonals) {
    std::sort(diagonals.begin(), diagonals.end());
    return Dissection{p, std::move(diagonals)};
}

Diagnostics validate_dissection(const Dissection& t) {
    const auto& p = t.params;
    if (p.N != (p.n + 1) * p.m + 2) return Diagnostics::fail("polygon: N != (n+1)m+2");
    const auto& D = t.diagonals;
    for (size_t i = 0; i < D.size(); ++i) {
        if (!is_valid_diagonal(D[i], p.N)) return Diagnostics::fail("diagonal: " + to_string(D[i]) + " is not valid");
        if (!is_allowable(D[i], p)) return Diagnostics::fail("allowability: " + to_string(D[i]) + " is not m-allowable");
        if (i > 0 && !(D[i - 1] < D[i])) return Diagnostics::fail("order: diagonals not sorted or repeated");
    }
    for (size_t i = 0; i < D.size(); ++i)
        for (size_t j = i + 1; j < D.size(); ++j)
            if (crosses(D[i], D[j]))
                return Diagnostics::fail("crossing: " + to_string(D[i]) + " crosses " + to_string(D[j]));
    if (int(D.size()) != p.n)
        return Diagnostics::fail("cardinality: " + std::to_string(D.size()) + " diagonals, expected " +
                                 std::to_string(p.n));
    for (const auto& f : faces(t))
        if (int(f.corners.size()) != p.m + 2)
            return Diagnostics::fail("face shape: face with " + std::to_string(f.corners.size()) + " corners");
    return Diagnostics::pass();
}

std::vector<Face> faces_of(const PolygonParams& p, const std::vector<Diagonal>& diagonals) {
    std::vector<std::vector<int>> polys(1);
    for (int i = 0; i < p.N; ++i) polys[0].push_back(i);
    for (Diagonal d : diagonals) {
        bool split = false;
        for (size_t k = 0; k < polys.size() && !split; ++k) {
            auto& poly = polys[k];
            auto ia = std::find(poly.begin(), poly.end(), d.a);
            auto ib = std::find(poly.begin(), poly.end(), d.b);
            if (ia == poly.end() || ib == poly.end()) continue;
            size_t i = ia - poly.begin(), j = ib - poly.begin();
            if (j - i < 2 || i + poly.size() - j < 2) continue;
            std::vector<int> inner(poly.begin() + i, poly.begin() + j + 1);
            std::vector<int> outer(poly.begin(), poly.begin() + i + 1);
            outer.insert(outer.end(), poly.begin() + j, poly.end());
            poly = std::move(inner);
            polys.push_back(std::move(outer));
            split = true;
        }
        if (!split) throw InvalidInput("faces: " + to_string(d) + " does not split a region");
    }
    std::map<Diagonal, int> index;
    for (size_t i = 0; i < diagonals.size(); ++i) index[diagonals[i]] = int(i);
    std::sort(polys.begin(), polys.end());
    std::vector<Face> out;
    for (auto& poly : polys) {
        Face f;
        f.corners = poly;
        size_t k = poly.size();
        for (size_t i = 0; i < k; ++i) {
            int u = poly[i], v = poly[(i + 1) % k];
            Side s{u, v, -1};
            int lo = std::min(u, v), hi = std::max(u, v);
            bool edge = hi - lo == 1 || (lo == 0 && hi == p.N - 1);
            if (!edge) {
                auto it = index.find(Diagonal{lo, hi});
                if (it == index.end()) throw InvariantFailure("faces: side is neither edge nor diagonal");
                s.diagonal = it->second;
            }
            f.sides.push_back(s);
        }
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<Face> faces(const Dissection& t) { return faces_of(t.params, t.diagonals); }

std::uint64_t fuss_catalan(int n, int m) {
    // (1/(n+1)) C((m+1)(n+1), n)
    unsigned __int128 c = 1;
    std::uint64_t top = std::uint64_t(m + 1) * std::uint64_t(n + 1);
    for (int i = 0; i < n; ++i) {
        c = c * (top - i) / (i + 1);
        if (c >> 100) throw CapExceeded("fuss_catalan overflow");
    }
    c /= std::uint64_t(n + 1);
    if (c >> 63) throw CapExceeded("fuss_catalan overflow");
    return std::uint64_t(c);
}

static std::vector<Diagonal> allowable_diagonals(const PolygonParams& p) {
    std::vector<Diagonal> out;
    for (int a = 0; a < p.N; ++a)
        for (int b = a + 2; b < p.N; ++b) {
            Diagonal d{a, b};
            if (is_valid_diagonal(d, p.N) && is_allowable(d, p)) out.push_back(d);
        }
    return out;
}

void enumerate_dissections(const PolygonParams& p, const std::function<void(const Dissection&)>& emit,
                           std::uint64_t cap) {
    if (fuss_catalan(p.n, p.m) > cap)
        throw CapExceeded("enumeration of " + std::to_string(fuss_catalan(p.n, p.m)) +
                          " dissections exceeds the cap of " + std::to_string(cap));
    const auto D = allowable_diagonals(p);
    const int total = int(D.size());
    std::vector<int> chosen;
    Dissection t{p, {}};
    std::function<void(int)> rec = [&](int from) {
        if (int(chosen.size()) == p.n) {
            t.diagonals.clear();
            for (int i : chosen) t.diagonals.push_back(D[i]);
            emit(t);
            return;
        }
        for (int i = from; i + (p.n - int(chosen.size())) <= total; ++i) {
            bool ok = true;
            for (int j : chosen)
                if (crosses(D[i], D[j])) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(i);
            rec(i + 1);
            chosen.pop_back();
        }
    };
    rec(0);
}

std::vector<Dissection> all_dissections(const PolygonParams& p, std::uint64_t cap) {
    std::vector<Dissection> out;
    enumerate_dissections(p, [&](const Dissection& t) { out.push_back(t); }, cap);
    return out;
}

namespace {

struct UnionRegion {
    std::vector<int> corners;  // ascending
    int pa = 0, pb = 0;        // positions of d's endpoints
};

UnionRegion union_region(const PolygonParams& p, const std::vector<Diagonal>& diagonals, Diagonal d) {
    int di = -1;
    for (size_t i = 0; i < diagonals.size(); ++i)
        if (diagonals[i] == d) di = int(i);
    if (di < 0) throw InvalidInput(to_string(d) + " is not in the dissection");
    std::vector<int> corners;
    int touching = 0;
    for (const auto& f : faces_of(p, diagonals)) {
        bool has = std::any_of(f.sides.begin(), f.sides.end(), [&](const Side& s) { return s.diagonal == di; });
        if (!has) continue;
        ++touching;
        corners.insert(corners.end(), f.corners.begin(), f.corners.end());
    }
    if (touching != 2) throw InvariantFailure("rotation: diagonal does not border two faces");
    std::sort(corners.begin(), corners.end());
    corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
    UnionRegion u;
    u.corners = corners;
    u.pa = int(std::find(corners.begin(), corners.end(), d.a) - corners.begin());
    u.pb = int(std::find(corners.begin(), corners.end(), d.b) - corners.begin());
    return u;
}

}  // namespace

std::vector<Diagonal> rotation_targets(const PolygonParams& p, const std::vector<Diagonal>& diagonals, Diagonal d) {
    auto u = union_region(p, diagonals, d);
    const int L = int(u.corners.size());
    if (L != 2 * p.m + 2) throw InvariantFailure("rotation: union region is not a (2m+2)-gon");
    std::vector<Diagonal> rest;
    for (Diagonal e : diagonals)
        if (e != d) rest.push_back(e);
    // candidate chords of the region, kept if the substitution validates
    std::vector<std::pair<int, Diagonal>> found;
    for (int i = 0; i < L; ++i)
        for (int j = i + 2; j < L; ++j) {
            if (i == 0 && j == L - 1) continue;
            Diagonal c{u.corners[i], u.corners[j]};
            if (c == d || !is_valid_diagonal(c, p.N) || !is_allowable(c, p)) continue;
            auto trial = rest;
            trial.push_back(c);
            if (!validate_dissection(make_dissection(p, trial))) continue;
            int k = ((i - u.pa) % L + L) % L;
            if (k < 1 || k > p.m) k = ((j - u.pa) % L + L) % L;
            found.push_back({k, c});
        }
    std::sort(found.begin(), found.end());
    if (int(found.size()) != p.m) throw InvariantFailure("rotation: expected m targets");
    std::vector<Diagonal> out;
    for (auto& [k, c] : found) out.push_back(c);
    return out;
}

std::vector<Diagonal> rotation_targets(const Dissection& t, Diagonal d) {
    return rotation_targets(t.params, t.diagonals, d);
}

Diagonal rotation_closed_form(const Dissection& t, Diagonal d, int k) {
    auto u = union_region(t.params, t.diagonals, d);
    const int L = int(u.corners.size());
    int x = u.corners[(u.pa + k) % L], y = u.corners[(u.pb + k) % L];
    return Diagonal{std::min(x, y), std::max(x, y)};
}

Diagonal move_target(const PolygonParams& p, const std::vector<Diagonal>& diagonals, Diagonal d, int k) {
    if (k != 1 && k != -1) throw InvalidInput("move step must be +1 or -1");
    auto u = union_region(p, diagonals, d);
    const int L = int(u.corners.size());
    if (L != 2 * p.m + 2) throw InvariantFailure("rotation: union region is not a (2m+2)-gon");
    // +1 turns both ends one corner anticlockwise, -1 is the m-fold turn
    const int step = k == 1 ? 1 : p.m;
    int x = u.corners[(u.pa + step) % L], y = u.corners[(u.pb + step) % L];
    Diagonal c{std::min(x, y), std::max(x, y)};
    if (!is_allowable(c, p)) throw InvariantFailure("rotation: target " + to_string(c) + " is not allowable");
    return c;
}

Dissection apply_move(const Dissection& t, Diagonal d, int k) {
    if (k == 0) return t;
    int step = k > 0 ? 1 : -1;
    Dissection cur = t;
    for (int i = 0; i < std::abs(k); ++i) {
        Diagonal nd = move_target(cur.params, cur.diagonals, d, step);
        for (auto& e : cur.diagonals)
            if (e == d) e = nd;
        std::sort(cur.diagonals.begin(), cur.diagonals.end());
        d = nd;
    }
    return cur;
}

}  // namespace mcw
