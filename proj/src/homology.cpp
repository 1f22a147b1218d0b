#include "mcw/homology.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>

namespace mcw {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw CapExceeded("integer overflow");
    return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw CapExceeded("integer overflow");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw CapExceeded("integer overflow");
    return r;
}

// row_i -= f * row_j
void row_sub(IntMatrix& m, int i, int j, std::int64_t f) {
    for (int c = 0; c < m.size; ++c) m(i, c) = checked_sub(m(i, c), checked_mul(f, m(j, c)));
}

void col_sub(IntMatrix& m, int i, int j, std::int64_t f) {
    for (int r = 0; r < m.size; ++r) m(r, i) = checked_sub(m(r, i), checked_mul(f, m(r, j)));
}

void swap_rows(IntMatrix& m, int i, int j) { std::swap(m.rows[i], m.rows[j]); }

void swap_cols(IntMatrix& m, int i, int j) {
    for (auto& row : m.rows) std::swap(row[i], row[j]);
}

}  // namespace

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix c(a.size);
    for (int i = 0; i < a.size; ++i)
        for (int k = 0; k < a.size; ++k) {
            if (a(i, k) == 0) continue;
            for (int j = 0; j < a.size; ++j) c(i, j) = checked_add(c(i, j), checked_mul(a(i, k), b(k, j)));
        }
    return c;
}

IntMatrix permute(const IntMatrix& m, const std::vector<int>& p) {
    IntMatrix r(m.size);
    for (int i = 0; i < m.size; ++i)
        for (int j = 0; j < m.size; ++j) r(p[i], p[j]) = m(i, j);
    return r;
}

std::int64_t determinant(const IntMatrix& m) {
    // Bareiss fraction-free elimination
    const int n = m.size;
    if (n == 0) return 1;
    std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = m(i, j);
    __int128 prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    __int128 d = a[n - 1][n - 1] * sign;
    if (d > INT64_MAX || d < INT64_MIN) throw CapExceeded("determinant overflow");
    return std::int64_t(d);
}

IntMatrix cartan(const QuiverWithRelations& q) {
    const int n = q.vertex_count;
    IntMatrix C(n);
    std::vector<std::vector<int>> out(n);
    for (const auto& a : q.arrows) out[a.source].push_back(a.id);
    const size_t limit = q.arrows.size() + 1;
    for (int i = 0; i < n; ++i) {
        C(i, i) += 1;
        std::vector<std::pair<int, size_t>> stack;
        for (int a : out[i]) stack.push_back({a, 1});
        while (!stack.empty()) {
            auto [a, len] = stack.back();
            stack.pop_back();
            if (len > limit) throw InvariantFailure("cartan: oriented cycle without relations");
            int t = q.arrows[a].target;
            C(i, t) += 1;
            for (int b : out[t])
                if (!q.is_relation(a, b)) stack.push_back({b, len + 1});
        }
    }
    return C;
}

SmithResult smith_normal_form(const IntMatrix& M, std::optional<std::uint64_t> seed) {
    const int n = M.size;
    IntMatrix D = M, U = IntMatrix::identity(n), V = IntMatrix::identity(n);
    std::mt19937_64 rng(seed.value_or(0));
    auto pick_pivot = [&](int t, int& pi, int& pj) {
        std::int64_t best = 0;
        std::vector<std::pair<int, int>> ties;
        for (int i = t; i < n; ++i)
            for (int j = t; j < n; ++j) {
                std::int64_t v = std::llabs(D(i, j));
                if (v == 0) continue;
                if (best == 0 || v < best) {
                    best = v;
                    ties.clear();
                }
                if (v == best) ties.push_back({i, j});
            }
        if (ties.empty()) return false;
        auto choice = seed ? ties[rng() % ties.size()] : ties.front();
        pi = choice.first;
        pj = choice.second;
        return true;
    };
    for (int t = 0; t < n; ++t) {
        int pi, pj;
        if (!pick_pivot(t, pi, pj)) break;
        for (;;) {
            swap_rows(D, t, pi);
            swap_rows(U, t, pi);
            swap_cols(D, t, pj);
            swap_cols(V, t, pj);
            bool again = false;
            for (int i = t + 1; i < n; ++i) {
                std::int64_t f = D(i, t) / D(t, t);
                if (f) {
                    row_sub(D, i, t, f);
                    row_sub(U, i, t, f);
                }
                if (D(i, t) != 0) again = true;
            }
            for (int j = t + 1; j < n; ++j) {
                std::int64_t f = D(t, j) / D(t, t);
                if (f) {
                    col_sub(D, j, t, f);
                    col_sub(V, j, t, f);
                }
                if (D(t, j) != 0) again = true;
            }
            if (!again) {
                // the pivot must divide the rest of the block
                for (int i = t + 1; i < n && !again; ++i)
                    for (int j = t + 1; j < n; ++j)
                        if (D(i, j) % D(t, t) != 0) {
                            row_sub(D, t, i, -1);
                            row_sub(U, t, i, -1);
                            again = true;
                            break;
                        }
                if (!again) break;
            }
            // restart with the smallest entry of row t / column t
            pi = t;
            pj = t;
            std::int64_t best = std::llabs(D(t, t));
            for (int i = t + 1; i < n; ++i)
                if (D(i, t) != 0 && std::llabs(D(i, t)) < best) {
                    best = std::llabs(D(i, t));
                    pi = i;
                    pj = t;
                }
            for (int j = t + 1; j < n; ++j)
                if (D(t, j) != 0 && std::llabs(D(t, j)) < best) {
                    best = std::llabs(D(t, j));
                    pi = t;
                    pj = j;
                }
        }
        if (D(t, t) < 0) {
            for (int c = 0; c < n; ++c) {
                D(t, c) = -D(t, c);
                U(t, c) = -U(t, c);
            }
        }
    }
    SmithResult res;
    for (int i = 0; i < n; ++i) res.diag.push_back(D(i, i));
    res.U = std::move(U);
    res.V = std::move(V);
    res.D = std::move(D);
    return res;
}

IntMatrix bh_diagonal(const QuiverWithRelations& q) {
    int oc = 0, ec = 0;
    for (const auto& c : full_relation_cycles(q).cycles)
        if (c.full_relations) (c.arrows.size() % 2 ? oc : ec)++;
    IntMatrix d = IntMatrix::identity(q.vertex_count);
    int i = 0;
    for (int k = 0; k < oc && i < q.vertex_count; ++k, ++i) d(i, i) = 2;
    for (int k = 0; k < ec && i < q.vertex_count; ++k, ++i) d(i, i) = 0;
    return d;
}

DerivedInvariant derived_invariant(const QuiverWithRelations& q) {
    DerivedInvariant inv;
    inv.s = q.vertex_count;
    for (const auto& c : full_relation_cycles(q).cycles)
        if (c.full_relations) (c.arrows.size() % 2 ? inv.oc : inv.ec)++;
    inv.r = inv.oc + inv.ec;
    inv.snf = smith_normal_form(cartan(q)).diag;
    if (inv.snf != smith_normal_form(bh_diagonal(q)).diag)
        throw InvariantFailure("Smith form of the Cartan matrix differs from the diagonal form");
    return inv;
}

IntMatrix happel_hom_dims(const std::vector<GradedProjective>& complexes, const IntMatrix& C) {
    const int k = int(complexes.size());
    IntMatrix R(k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            std::int64_t s = 0;
            for (const auto& [r, us] : complexes[i])
                for (const auto& [d, vs] : complexes[j]) {
                    std::int64_t sign = ((r - d) % 2 == 0) ? 1 : -1;
                    for (int u : us)
                        for (int v : vs) s += sign * C(u, v);
                }
            R(i, j) = s;
        }
    return R;
}

}  // namespace mcw
