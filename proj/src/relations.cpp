#include "sqn/relations.hpp"

#include <algorithm>
#include <stdexcept>

namespace sqn {

namespace {

PartyLabel flipped(PartyLabel l) {
    switch (l) {
        case PartyLabel::Zero: return PartyLabel::Top;
        case PartyLabel::Top: return PartyLabel::Zero;
        case PartyLabel::AlphaSpread: return PartyLabel::BetaSpread;
        case PartyLabel::BetaSpread: return PartyLabel::AlphaSpread;
    }
    return l;
}

void rederive_classes(StateSet& set) {
    for (auto& block : set.blocks)
        block.spec.cls = class_of_first_label(block.labels.front());
}

}  // namespace

StateSet strip_subsystem(const StateSet& set, int party) {
    const int n = set.parties();
    if (party < 1 || party > n)
        throw std::invalid_argument("strip_subsystem: party index out of range");

    StateSet out;
    out.name = set.name + "-strip" + std::to_string(party);
    out.family = Family::Derived;
    out.dims = set.dims;
    out.dims.erase(out.dims.begin() + (party - 1));

    for (const auto& block : set.blocks) {
        if (!block.spec.contains(party)) continue;  // fixed factor at party i: drop
        SymbolicBlock nb;
        nb.labels = block.labels;
        nb.labels.erase(nb.labels.begin() + (party - 1));
        for (int p : block.spec.q)
            if (p != party) nb.spec.q.push_back(p > party ? p - 1 : p);
        nb.spec.cls = class_of_first_label(nb.labels.front());
        out.blocks.push_back(std::move(nb));
    }
    canonicalize(out);
    return out;
}

StateSet relabel_flip(const StateSet& set, int pivot) {
    StateSet out = set;
    out.name = set.name + "-flip" + std::to_string(pivot);
    out.family = Family::Derived;
    for (auto& block : out.blocks)
        for (int t = pivot; t < static_cast<int>(block.labels.size()); ++t)
            block.labels[static_cast<std::size_t>(t)] =
                flipped(block.labels[static_cast<std::size_t>(t)]);
    rederive_classes(out);
    canonicalize(out);
    return out;
}

StateSet strip_flip(const StateSet& set, int party) {
    // parties above the removed one now sit at post-strip indices >= party
    return relabel_flip(strip_subsystem(set, party), party - 1);
}

StateSet cyclic_permute(const StateSet& set, int j) {
    const int n = set.parties();
    if (j < 1 || j > n)
        throw std::invalid_argument("cyclic_permute: party index out of range");

    StateSet out;
    out.name = set.name + "-rot" + std::to_string(j);
    out.family = Family::Derived;
    out.dims.resize(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
        out.dims[static_cast<std::size_t>(t)] =
            set.dims[static_cast<std::size_t>((t + j - 1) % n)];

    for (const auto& block : set.blocks) {
        SymbolicBlock nb;
        nb.labels.resize(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t)
            nb.labels[static_cast<std::size_t>(t)] =
                block.labels[static_cast<std::size_t>((t + j - 1) % n)];
        for (int p : block.spec.q)
            nb.spec.q.push_back((p - j + n) % n + 1);
        std::sort(nb.spec.q.begin(), nb.spec.q.end());
        nb.spec.cls = class_of_first_label(nb.labels.front());
        out.blocks.push_back(std::move(nb));
    }
    canonicalize(out);
    return out;
}

bool set_equal(const StateSet& a, const StateSet& b) {
    if (a.dims != b.dims) return false;
    if (a.blocks.size() != b.blocks.size()) return false;
    StateSet ca = a, cb = b;
    canonicalize(ca);
    canonicalize(cb);
    for (std::size_t i = 0; i < ca.blocks.size(); ++i)
        if (!(ca.blocks[i] == cb.blocks[i])) return false;
    return true;
}

}  // namespace sqn
