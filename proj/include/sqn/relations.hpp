// relations.hpp
// Surgery on symbolic state sets: subsystem removal, the 0<->top /
// alpha<->beta relabeling, cyclic party permutations, and canonical set
// equality.

#pragma once

#include "sqn/construction.hpp"

namespace sqn {

// Keeps only the blocks whose Q contains party i, deletes party i from the
// labels and from Q, and renumbers higher parties down by one.  Block
// classes are re-derived from the new first party.
StateSet strip_subsystem(const StateSet& set, int party);

// Swaps Zero<->Top and AlphaSpread<->BetaSpread on every party with current
// index strictly greater than pivot.  Involution; Q is unchanged.
StateSet relabel_flip(const StateSet& set, int pivot);

// Subsystem removal followed by the relabeling on all surviving parties
// that sat above the removed one (post-strip indices >= party, i.e. the
// pre-strip "j > i" rule).
StateSet strip_flip(const StateSet& set, int party);

// Rotates the parties so that original party j comes first.
StateSet cyclic_permute(const StateSet& set, int j);

// Multiset equality of canonicalized symbolic blocks.
bool set_equal(const StateSet& a, const StateSet& b);

}  // namespace sqn
