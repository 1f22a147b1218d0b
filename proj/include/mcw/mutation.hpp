#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcw/homology.hpp"

namespace mcw {

struct RejectedMove : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MutationContext {
    int mut = -1;
    // index t pairs in_t with out_t when the composition through mut is nonzero
    std::vector<int> in_vertices, in_arrows;
    std::vector<int> out_vertices, out_arrows;
    std::vector<std::optional<int>> pre_vertices, pre_arrows;    // per in_t: eta_t with (eta_t, i_t) zero
    std::vector<std::optional<int>> post_vertices, post_arrows;  // per out_t: zeta_t with (o_t, zeta_t) zero
};
MutationContext mutation_context(const QuiverWithRelations& q, int mut);

// Unchecked algebra-level mutations (vertex ids are kept).
QuiverWithRelations mutate_plus_raw(const QuiverWithRelations& q, int mut);
QuiverWithRelations mutate_minus_raw(const QuiverWithRelations& q, int mut);

// The tilting complex is defined (an arrow into / out of mut) and the result is a
// simple quiver.
bool plus_applicable(const QuiverWithRelations& q, int mut);
bool minus_applicable(const QuiverWithRelations& q, int mut);
// applicability plus unchanged component partition and full-cycle count
Diagnostics plus_preserves(const QuiverWithRelations& q, int mut);
Diagnostics minus_preserves(const QuiverWithRelations& q, int mut);

// Checked versions; throw RejectedMove.
QuiverWithRelations tilting_mutation_plus(const QuiverWithRelations& q, int mut);
QuiverWithRelations tilting_mutation_minus(const QuiverWithRelations& q, int mut);

// One complex per vertex, for happel_hom_dims.
std::vector<GradedProjective> plus_complexes(const QuiverWithRelations& q, int mut);
std::vector<GradedProjective> minus_complexes(const QuiverWithRelations& q, int mut);

struct GeometricResult {
    Dissection dissection;
    QuiverWithRelations quiver;  // vertices indexed by the new sorted diagonal list
    Diagonal moved;
};
GeometricResult geometric_mutation(const Dissection& t, Diagonal d, int k);

// Labeled variant: labels[v] is the diagonal of vertex v, and vertex ids are kept.
struct LabeledMove {
    std::vector<Diagonal> labels;
    QuiverWithRelations quiver;
};
LabeledMove geometric_mutation_labeled(const PolygonParams& p, const std::vector<Diagonal>& labels, int vertex,
                                       int k);

// Component partition and number of full-relation cycles both unchanged.
bool preserves_invariant(const Dissection& t, Diagonal d, int k);
bool preserves_invariant(const QuiverWithRelations& before, const QuiverWithRelations& after);

// chain vertices 0 -> 1 -> ... -> q_end
Diagnostics relation_chain_ok(const QuiverWithRelations& q, const std::vector<int>& chain);
QuiverWithRelations remove_relation_chain(const QuiverWithRelations& q, const std::vector<int>& chain);
std::vector<GradedProjective> relation_chain_complexes(const QuiverWithRelations& q, const std::vector<int>& chain);
// the maximal chain continuing the arrow a through consecutive relations
std::vector<int> relation_chain_from(const QuiverWithRelations& q, int arrow);

struct MoveRecord {
    enum class Kind { Plus, Minus, RelRem };
    Kind kind = Kind::Plus;
    std::vector<int> site;  // mutation vertex, or the chain
    bool geometric = false;
    std::optional<Diagonal> from, to;  // diagonal before/after for geometric moves
    std::string phase;
    DerivedInvariant before, after;
};
std::string kind_name(MoveRecord::Kind k);

// The tilting mutation matching the geometric move (mut, k). For m = 1 the flip has
// no direction, so the other one is used when the k-th is not applicable.
std::optional<MoveRecord::Kind> algebra_counterpart(const QuiverWithRelations& q, int mut, int k);
QuiverWithRelations tilting_mutation(const QuiverWithRelations& q, MoveRecord::Kind kind, int mut);
std::vector<GradedProjective> tilting_complexes(const QuiverWithRelations& q, MoveRecord::Kind kind, int mut);
// preserves_invariant and an algebra counterpart exists
bool admissible_move(const Dissection& t, Diagonal d, int k);
MoveRecord::Kind kind_from_name(const std::string& s);

}  // namespace mcw
