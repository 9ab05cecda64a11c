// construction.hpp
// Symbolic construction of the orthogonal product families.  A family is a
// list of blocks, one per (class, index-subset Q) pair; each block compresses
// prod_{t in Q}(d_t - 1) product states into per-party symbolic labels that
// follow a two-row recursion over the parties.

#pragma once

#include <string>
#include <vector>

#include "sqn/states.hpp"

namespace sqn {

enum class BlockClass { C, D };
enum class Parity { Odd, Even };

// Per-party entry of a block: a fixed basis label or a full spread family.
enum class PartyLabel { Zero, Top, AlphaSpread, BetaSpread };

inline bool is_spread(PartyLabel l) {
    return l == PartyLabel::AlphaSpread || l == PartyLabel::BetaSpread;
}
// "zero-like" labels sit on the lower levels, "top-like" on the upper ones;
// the recursion only looks at this bit of the previous party.
inline bool is_zero_like(PartyLabel l) {
    return l == PartyLabel::Zero || l == PartyLabel::AlphaSpread;
}

struct SubsetSpec {
    std::vector<int> q;  // sorted, 1-based party indices
    BlockClass cls = BlockClass::C;

    bool contains(int party) const;
    bool operator==(const SubsetSpec&) const = default;
};

struct SymbolicBlock {
    SubsetSpec spec;
    std::vector<PartyLabel> labels;  // one per party

    int parties() const { return static_cast<int>(labels.size()); }
    long long expansion_size(const std::vector<int>& dims) const;
    bool operator==(const SymbolicBlock&) const = default;
};

enum class Family { E, O, F, Derived };

struct StateSet {
    std::string name;
    std::vector<int> dims;
    Family family = Family::Derived;
    std::vector<SymbolicBlock> blocks;

    int parties() const { return static_cast<int>(dims.size()); }
};

const char* family_name(Family f);

// All subsets of {1..n} with the requested parity, ordered by size then
// lexicographically; 2^{n-1} of them.
std::vector<std::vector<int>> enumerate_subsets(int n, Parity parity);

// Applies the per-party recursion for the given (class, Q).
SymbolicBlock build_block(const SubsetSpec& spec, const std::vector<int>& dims);

// Cartesian expansion over the spread parties, lexicographic in the
// spread-index tuples.  block_id is recorded in each state's origin.
std::vector<ProductState> expand_block(const SymbolicBlock& block,
                                       const std::vector<int>& dims, int block_id);

StateSet build_e(int n);                          // all-qutrit, even n >= 2
StateSet build_f(const std::vector<int>& dims);   // even party count, d_i >= 3
StateSet build_o(const std::vector<int>& dims);   // odd party count >= 3

// prod d_i - prod (d_i - 2)
long long cardinality(const std::vector<int>& dims);

// Expansion of every block in canonical block order.
std::vector<ProductState> expand_set(const StateSet& set);

// Canonical block order: class C before D, then Q by size then lexicographic.
void canonicalize(StateSet& set);
bool subset_less(const std::vector<int>& a, const std::vector<int>& b);

// Class as read off a block's first-party label (Zero/Alpha -> C, Top/Beta
// -> D); used to re-derive classes after party surgery.
BlockClass class_of_first_label(PartyLabel first);

}  // namespace sqn
