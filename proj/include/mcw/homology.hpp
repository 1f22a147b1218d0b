#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mcw/algebra.hpp"

namespace mcw {

struct IntMatrix {
    int size = 0;
    std::vector<std::vector<std::int64_t>> rows;

    IntMatrix() = default;
    explicit IntMatrix(int n) : size(n), rows(n, std::vector<std::int64_t>(n, 0)) {}
    static IntMatrix identity(int n);
    std::int64_t& operator()(int i, int j) { return rows[i][j]; }
    std::int64_t operator()(int i, int j) const { return rows[i][j]; }
    bool operator==(const IntMatrix&) const = default;
};

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
// rows and columns permuted simultaneously: result(p[i], p[j]) = m(i, j)
IntMatrix permute(const IntMatrix& m, const std::vector<int>& p);
std::int64_t determinant(const IntMatrix& m);

IntMatrix cartan(const QuiverWithRelations& q);

struct SmithResult {
    std::vector<std::int64_t> diag;  // d_1 | d_2 | ..., zeros last
    IntMatrix U, V, D;               // U * M * V = D
};
// seed, when given, randomizes the choice among equally small pivots
SmithResult smith_normal_form(const IntMatrix& M, std::optional<std::uint64_t> seed = std::nullopt);

IntMatrix bh_diagonal(const QuiverWithRelations& q);

struct DerivedInvariant {
    int s = 0;
    int r = 0;
    std::vector<std::int64_t> snf;
    int oc = 0;
    int ec = 0;
    // equality is on (s, r)
    bool operator==(const DerivedInvariant& o) const { return s == o.s && r == o.r; }
    bool same_record(const DerivedInvariant& o) const {
        return s == o.s && r == o.r && snf == o.snf && oc == o.oc && ec == o.ec;
    }
};
DerivedInvariant derived_invariant(const QuiverWithRelations& q);

// degree -> projective terms (vertex indices, repeats allowed)
using GradedProjective = std::map<int, std::vector<int>>;
IntMatrix happel_hom_dims(const std::vector<GradedProjective>& complexes, const IntMatrix& C);

}  // namespace mcw
