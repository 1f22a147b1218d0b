#pragma once

#include <array>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "mcw/geometry.hpp"

namespace mcw {

struct Arrow {
    int source = 0;
    int target = 0;
    int id = 0;
    bool operator==(const Arrow&) const = default;
};

// relations holds pairs (alpha, beta) of arrow ids with target(alpha) = source(beta);
// the path alpha then beta is zero.
struct QuiverWithRelations {
    int m = 1;
    int vertex_count = 0;
    std::vector<std::optional<Diagonal>> vertex_labels;
    std::vector<Arrow> arrows;
    std::set<std::pair<int, int>> relations;

    bool operator==(const QuiverWithRelations&) const = default;

    int add_arrow(int s, int t);
    int arrow_between(int s, int t) const;  // -1 if none
    std::vector<int> in_arrows(int v) const;
    std::vector<int> out_arrows(int v) const;
    bool is_relation(int a, int b) const { return relations.count({a, b}) > 0; }
    bool has_relation(int s, int mid, int t) const;  // by vertex triple
    // (s, mid, t) vertex triples of all relations, sorted
    std::vector<std::array<int, 3>> relation_triples() const;
};

// Same vertex set, arrows and relation triples; arrow ids may differ.
bool same_labeled(const QuiverWithRelations& a, const QuiverWithRelations& b);

Diagnostics check_well_formed(const QuiverWithRelations& q);
// well formed and free of 2-cycles
Diagnostics check_simple(const QuiverWithRelations& q);

// Vertex i corresponds to labels[i]; labels need not be sorted.
QuiverWithRelations quiver_of_labeled(const PolygonParams& p, const std::vector<Diagonal>& labels);
QuiverWithRelations quiver_of(const Dissection& t);

struct GentleReport {
    bool ok = true;
    int vertex = -1;
    std::string reason;
    explicit operator bool() const { return ok; }
};
GentleReport is_gentle(const QuiverWithRelations& q);

struct Component {
    QuiverWithRelations quiver;
    std::vector<int> vertices;  // component vertex i is vertices[i] in the parent
};
std::vector<Component> components(const QuiverWithRelations& q);
// partition of the vertex set, each block ascending, blocks ordered by first vertex
std::vector<std::vector<int>> component_partition(const QuiverWithRelations& q);
QuiverWithRelations induced_subquiver(const QuiverWithRelations& q, const std::vector<int>& vertices);
QuiverWithRelations opposite(const QuiverWithRelations& q);

struct Cycle {
    std::vector<int> arrows;  // consecutive arrows, closed
    bool full_relations = false;
    std::vector<int> vertices(const QuiverWithRelations& q) const;
};
struct CycleReport {
    std::vector<Cycle> cycles;
    int full_count() const;
};
CycleReport full_relation_cycles(const QuiverWithRelations& q);
// every oriented cycle has length m+2 and full relations
Diagnostics check_cycle_shape(const QuiverWithRelations& q);

int max_relation_chain(const QuiverWithRelations& q);

// Bijection f with f[v] the image in q2 of vertex v of q1.
std::optional<std::vector<int>> iso_quivers(const QuiverWithRelations& q1, const QuiverWithRelations& q2);

}  // namespace mcw
