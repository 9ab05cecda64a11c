// structure.hpp
// Computational-basis projection boxes of symbolic blocks and the structural
// strong-nonlocality conditions: connectedness of the box intersection graph,
// projection-inclusion (PI/UPI) covers, breadth-first set sequences, and the
// four-condition check run per bipartition.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sqn/construction.hpp"

namespace sqn {

// Axis-aligned box of computational-basis index tuples: one sorted index set
// per party (all parties; restriction to a party subset happens per query).
struct ProjectionBox {
    std::vector<std::vector<int>> sets;
    int owner = -1;

    int parties() const { return static_cast<int>(sets.size()); }
    bool contains_point(const std::vector<int>& point, const std::vector<int>& parties) const;
    long long size_on(const std::vector<int>& parties) const;
};

// Per-party index sets from the label rule: Zero -> {0}, AlphaSpread ->
// {0..d-2}, BetaSpread -> {1..d-1}, Top -> {d-1}.
ProjectionBox block_box(const SymbolicBlock& block, const std::vector<int>& dims,
                        int owner);
std::vector<ProjectionBox> set_boxes(const StateSet& set);

// Intersection restricted to the given parties; empty optional when empty.
std::optional<std::vector<std::vector<int>>> box_intersection(
    const ProjectionBox& a, const ProjectionBox& b, const std::vector<int>& parties);

struct ConnectivityReport {
    bool connected = false;
    // ids on one side of an empty-overlap bipartition when disconnected
    std::vector<int> witness;
};

// Graph connectivity of pairwise box intersection on the given parties.
ConnectivityReport is_connected(const std::vector<ProjectionBox>& boxes,
                                const std::vector<int>& x_parties);

struct PIRecord {
    int target = -1;
    std::vector<int> members;
    bool upi = false;
    int upi_witness = -1;  // member meeting the target box in exactly one point
};

// Searches for a projection-inclusion cover of the target block on X: the
// members' X-boxes jointly contain the target's X-box and their complement
// boxes share a common point.  Prefers UPI covers; deterministic order.
std::optional<PIRecord> find_pi(int target, const std::vector<int>& x_parties,
                                const std::vector<ProjectionBox>& boxes,
                                const std::vector<int>& dims,
                                const std::vector<BlockClass>& classes = {});

struct SetSequence {
    std::vector<std::vector<int>> groups;
    std::vector<int> leftover;  // ids never reached by the layering

    bool exhaustive() const { return leftover.empty(); }
};

// G1 = all blocks possessing a UPI cover; each later group collects the
// unassigned blocks whose X-box meets the previous group.  Throws when no
// block has a UPI cover.
SetSequence build_set_sequence(const std::vector<ProjectionBox>& boxes,
                               const std::vector<int>& x_parties,
                               const std::vector<int>& dims,
                               const std::vector<BlockClass>& classes = {});

struct ConditionReport {
    bool basis_tails_covered = false;  // i)
    bool pi_for_every_block = false;   // ii)
    bool sequence_linked = false;      // iii)
    bool connected = false;            // iv)

    std::vector<int> x_parties;
    std::string detail;  // first failure witness, human-readable

    // semantics of the tail condition as evaluated here
    static constexpr const char* tail_semantics =
        "basis tails compared to the reachable-box union by set containment";

    bool all() const {
        return basis_tails_covered && pi_for_every_block && sequence_linked && connected;
    }
};

// Runs the four structural conditions on party subset X.  Containments are
// evaluated as set containments; the X basis is enumerated row-major in
// ascending party order.
ConditionReport check_conditions(const std::vector<ProjectionBox>& boxes,
                                 const std::vector<int>& x_parties,
                                 const std::vector<int>& dims,
                                 const std::vector<BlockClass>& classes = {});

struct StructuralVerdict {
    bool certified = false;
    std::vector<ConditionReport> per_party;  // X_i = all parties except i
};

StructuralVerdict strong_nonlocality_structural(const StateSet& set);

struct TilingReport {
    bool disjoint = false;
    bool covers_complement = false;  // union == full cube minus middle box
    long long covered_cells = 0;
    long long middle_cells = 0;
    std::string detail;

    bool ok() const { return disjoint && covers_complement; }
};

// Exact set arithmetic over the full index cube: every cell outside the
// middle box {1..d-2}^n lies in exactly one block box, middle cells in none.
TilingReport verify_tiling(const StateSet& set);

}  // namespace sqn
