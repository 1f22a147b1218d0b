#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mcw/mutation.hpp"

namespace mcw {

struct NormalFormSpec {
    int s = 1;
    int r = 0;
    int m = 1;
};
// r chained (m+2)-cycles use r(m+1)+1 vertices; the rest form the tail
Diagnostics feasible(const NormalFormSpec& spec);
QuiverWithRelations build_normal_form(const NormalFormSpec& spec);

enum class VertexRole { Connector, A, B };
std::string role_name(VertexRole r);
// cycle lists the vertices of a full-relation cycle of q along its orientation,
// starting at the connector 0; the next connector sits at position floor(m/2)+1.
std::map<int, VertexRole> classify_vertices(const QuiverWithRelations& q, const std::vector<int>& cycle);

struct ReductionTrace {
    std::vector<int> component;  // vertices of the full quiver
    std::vector<MoveRecord> steps;
    QuiverWithRelations final;   // induced on component, in component order
    std::vector<int> iso;        // final vertex i -> normal form vertex iso[i]
    NormalFormSpec target;
    int fallbacks = 0;           // searches used when the scripted moves stalled
};

struct ReduceOptions {
    std::optional<long> cap;  // default 50 s (m+2), or MCW_CAP
};
long default_step_cap(int s, int m);

// component indexes components(quiver_of(t))
ReductionTrace reduce(const Dissection& t, int component, const ReduceOptions& opt = {});
// algebra-level reduction of a connected quiver
ReductionTrace reduce(const QuiverWithRelations& q, const ReduceOptions& opt = {});

// Replays the steps from the dissection and returns the final component quiver.
QuiverWithRelations replay(const Dissection& t, const ReductionTrace& trace);

// tail: relation-free path; root: attachment end that is never mutated
std::vector<MoveRecord> linearize_tail(const QuiverWithRelations& q, const std::vector<int>& tail,
                                       std::optional<int> root = std::nullopt);
// one relation fewer on the branch behind the leaf endpoint, or an empty list
std::vector<MoveRecord> remove_tail_relation(const QuiverWithRelations& q, int endpoint);
// applies a move list produced above at algebra level
QuiverWithRelations apply_moves(const QuiverWithRelations& q, const std::vector<MoveRecord>& moves);

bool derived_equivalent(const QuiverWithRelations& a, const QuiverWithRelations& b);

}  // namespace mcw
