// fixtures.hpp
// Shared test fixtures: compact block literals and the 5-qutrit reference
// family with its two reduction stages, transcribed by hand.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sqn/construction.hpp"

namespace sqn::test {

// labels as one char per party: Z(ero), T(op), A(lpha), B(eta)
inline SymbolicBlock make_block(char cls, const std::vector<int>& q,
                                const std::string& labels) {
    SymbolicBlock block;
    block.spec.cls = cls == 'C' ? BlockClass::C : BlockClass::D;
    block.spec.q = q;
    for (char c : labels) {
        switch (c) {
            case 'Z': block.labels.push_back(PartyLabel::Zero); break;
            case 'T': block.labels.push_back(PartyLabel::Top); break;
            case 'A': block.labels.push_back(PartyLabel::AlphaSpread); break;
            case 'B': block.labels.push_back(PartyLabel::BetaSpread); break;
            default: throw std::invalid_argument("make_block: bad label char");
        }
    }
    return block;
}

inline StateSet make_set(std::vector<int> dims, std::vector<SymbolicBlock> blocks,
                         Family family = Family::Derived) {
    StateSet set;
    set.name = "fixture";
    set.dims = std::move(dims);
    set.family = family;
    set.blocks = std::move(blocks);
    canonicalize(set);
    return set;
}

// the 32 blocks of the 5-qutrit reference family, hand-transcribed
inline StateSet reference_o5() {
    return make_set({3, 3, 3, 3, 3},
                    {
                        make_block('C', {}, "ZZZZZ"),
                        make_block('C', {1, 2}, "ABTTT"),
                        make_block('C', {1, 3}, "AZBTT"),
                        make_block('C', {1, 4}, "AZZBT"),
                        make_block('C', {1, 5}, "AZZZB"),
                        make_block('C', {2, 3}, "ZBAZZ"),
                        make_block('C', {2, 4}, "ZBTAZ"),
                        make_block('C', {2, 5}, "ZBTTA"),
                        make_block('C', {3, 4}, "ZZBAZ"),
                        make_block('C', {3, 5}, "ZZBTA"),
                        make_block('C', {4, 5}, "ZZZBA"),
                        make_block('C', {1, 2, 3, 4}, "ABABT"),
                        make_block('C', {1, 2, 3, 5}, "ABAZB"),
                        make_block('C', {1, 2, 4, 5}, "ABTAB"),
                        make_block('C', {1, 3, 4, 5}, "AZBAB"),
                        make_block('C', {2, 3, 4, 5}, "ZBABA"),
                        make_block('D', {}, "TTTTT"),
                        make_block('D', {1, 2}, "BAZZZ"),
                        make_block('D', {1, 3}, "BTAZZ"),
                        make_block('D', {1, 4}, "BTTAZ"),
                        make_block('D', {1, 5}, "BTTTA"),
                        make_block('D', {2, 3}, "TABTT"),
                        make_block('D', {2, 4}, "TAZBT"),
                        make_block('D', {2, 5}, "TAZZB"),
                        make_block('D', {3, 4}, "TTABT"),
                        make_block('D', {3, 5}, "TTAZB"),
                        make_block('D', {4, 5}, "TTTAB"),
                        make_block('D', {1, 2, 3, 4}, "BABAZ"),
                        make_block('D', {1, 2, 3, 5}, "BABTA"),
                        make_block('D', {1, 2, 4, 5}, "BAZBA"),
                        make_block('D', {1, 3, 4, 5}, "BTABA"),
                        make_block('D', {2, 3, 4, 5}, "TABAB"),
                    },
                    Family::O);
}

// the 16 blocks left after removing the 5th subsystem (the 4-party family)
inline StateSet reference_e4() {
    return make_set({3, 3, 3, 3},
                    {
                        make_block('C', {1}, "AZZZ"),
                        make_block('C', {2}, "ZBTT"),
                        make_block('C', {3}, "ZZBT"),
                        make_block('C', {4}, "ZZZB"),
                        make_block('C', {1, 2, 3}, "ABAZ"),
                        make_block('C', {1, 2, 4}, "ABTA"),
                        make_block('C', {1, 3, 4}, "AZBA"),
                        make_block('C', {2, 3, 4}, "ZBAB"),
                        make_block('D', {1}, "BTTT"),
                        make_block('D', {2}, "TAZZ"),
                        make_block('D', {3}, "TTAZ"),
                        make_block('D', {4}, "TTTA"),
                        make_block('D', {1, 2, 3}, "BABT"),
                        make_block('D', {1, 2, 4}, "BAZB"),
                        make_block('D', {1, 3, 4}, "BTAB"),
                        make_block('D', {2, 3, 4}, "TABA"),
                    },
                    Family::E);
}

// the 8 blocks after the second removal (the 3-qutrit reference family)
inline StateSet reference_o3() {
    return make_set({3, 3, 3},
                    {
                        make_block('C', {}, "ZZZ"),
                        make_block('C', {1, 2}, "ABT"),
                        make_block('C', {1, 3}, "AZB"),
                        make_block('C', {2, 3}, "ZBA"),
                        make_block('D', {}, "TTT"),
                        make_block('D', {1, 2}, "BAZ"),
                        make_block('D', {1, 3}, "BTA"),
                        make_block('D', {2, 3}, "TAB"),
                    },
                    Family::O);
}

}  // namespace sqn::test
