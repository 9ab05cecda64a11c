#include "sqn/construction.hpp"

#include <algorithm>
#include <stdexcept>

namespace sqn {

bool SubsetSpec::contains(int party) const {
    return std::binary_search(q.begin(), q.end(), party);
}

long long SymbolicBlock::expansion_size(const std::vector<int>& dims) const {
    long long size = 1;
    for (int t = 0; t < parties(); ++t)
        if (is_spread(labels[static_cast<std::size_t>(t)]))
            size *= dims[static_cast<std::size_t>(t)] - 1;
    return size;
}

const char* family_name(Family f) {
    switch (f) {
        case Family::E: return "E";
        case Family::O: return "O";
        case Family::F: return "F";
        case Family::Derived: return "derived";
    }
    return "?";
}

bool subset_less(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<std::vector<int>> enumerate_subsets(int n, Parity parity) {
    if (n < 2) throw std::invalid_argument("enumerate_subsets: n must be >= 2");
    if (n > 30) throw std::invalid_argument("enumerate_subsets: n too large");
    std::vector<std::vector<int>> out;
    const unsigned want = parity == Parity::Odd ? 1u : 0u;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if ((static_cast<unsigned>(__builtin_popcount(mask)) & 1u) != want) continue;
        std::vector<int> q;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) q.push_back(i + 1);
        out.push_back(std::move(q));
    }
    std::sort(out.begin(), out.end(), subset_less);
    return out;
}

SymbolicBlock build_block(const SubsetSpec& spec, const std::vector<int>& dims) {
    const int n = static_cast<int>(dims.size());
    for (int d : dims)
        if (d < 3) throw std::invalid_argument("build_block: dimensions must be >= 3");
    for (int p : spec.q)
        if (p < 1 || p > n) throw std::invalid_argument("build_block: subset out of range");

    SymbolicBlock block;
    block.spec = spec;
    block.labels.resize(static_cast<std::size_t>(n));

    // party 1: class picks the side, membership picks fixed vs spread
    if (spec.cls == BlockClass::C)
        block.labels[0] = spec.contains(1) ? PartyLabel::AlphaSpread : PartyLabel::Zero;
    else
        block.labels[0] = spec.contains(1) ? PartyLabel::BetaSpread : PartyLabel::Top;

    // parties 2..n: previous zero-like goes Zero/Beta, top-like goes Top/Alpha
    for (int t = 2; t <= n; ++t) {
        const PartyLabel prev = block.labels[static_cast<std::size_t>(t) - 2];
        const bool member = spec.contains(t);
        if (is_zero_like(prev))
            block.labels[static_cast<std::size_t>(t) - 1] =
                member ? PartyLabel::BetaSpread : PartyLabel::Zero;
        else
            block.labels[static_cast<std::size_t>(t) - 1] =
                member ? PartyLabel::AlphaSpread : PartyLabel::Top;
    }
    return block;
}

std::vector<ProductState> expand_block(const SymbolicBlock& block,
                                       const std::vector<int>& dims, int block_id) {
    const int n = block.parties();
    if (static_cast<int>(dims.size()) != n)
        throw std::invalid_argument("expand_block: dims size mismatch");

    std::vector<int> spread_parties;  // 0-based
    for (int t = 0; t < n; ++t)
        if (is_spread(block.labels[static_cast<std::size_t>(t)])) spread_parties.push_back(t);

    std::vector<ProductState> out;
    std::vector<int> tuple(spread_parties.size(), 0);
    while (true) {
        ProductState s;
        s.factors.reserve(static_cast<std::size_t>(n));
        std::size_t pos = 0;
        for (int t = 0; t < n; ++t) {
            const PartyLabel l = block.labels[static_cast<std::size_t>(t)];
            const int d = dims[static_cast<std::size_t>(t)];
            LocalLabel ll;
            switch (l) {
                case PartyLabel::Zero: ll = LocalLabel::zero(); break;
                case PartyLabel::Top: ll = LocalLabel::top(); break;
                case PartyLabel::AlphaSpread: ll = LocalLabel::alpha(tuple[pos++]); break;
                case PartyLabel::BetaSpread: ll = LocalLabel::beta(tuple[pos++]); break;
            }
            s.factors.push_back(local_vector(ll, d));
        }
        s.origin = ProductState::Origin{block_id, tuple};
        out.push_back(std::move(s));

        // advance the tuple lexicographically (last position fastest)
        int k = static_cast<int>(tuple.size()) - 1;
        while (k >= 0) {
            const int d = dims[static_cast<std::size_t>(spread_parties[static_cast<std::size_t>(k)])];
            if (++tuple[static_cast<std::size_t>(k)] <= d - 2) break;
            tuple[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return out;
}

BlockClass class_of_first_label(PartyLabel first) {
    return is_zero_like(first) ? BlockClass::C : BlockClass::D;
}

void canonicalize(StateSet& set) {
    std::sort(set.blocks.begin(), set.blocks.end(),
              [](const SymbolicBlock& a, const SymbolicBlock& b) {
                  if (a.spec.cls != b.spec.cls) return a.spec.cls == BlockClass::C;
                  return subset_less(a.spec.q, b.spec.q);
              });
}

namespace {

StateSet build_family(const std::vector<int>& dims, Parity parity, Family tag,
                      std::string name) {
    StateSet set;
    set.name = std::move(name);
    set.dims = dims;
    set.family = tag;
    const int n = static_cast<int>(dims.size());
    for (BlockClass cls : {BlockClass::C, BlockClass::D})
        for (const auto& q : enumerate_subsets(n, parity))
            set.blocks.push_back(build_block(SubsetSpec{q, cls}, dims));
    canonicalize(set);
    return set;
}

}  // namespace

StateSet build_f(const std::vector<int>& dims) {
    const int n = static_cast<int>(dims.size());
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("build_f: party count must be even and >= 2");
    return build_family(dims, Parity::Odd, Family::F, "F");
}

StateSet build_e(int n) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("build_e: n must be even and >= 2");
    StateSet set = build_family(std::vector<int>(static_cast<std::size_t>(n), 3),
                                Parity::Odd, Family::E, "E");
    return set;
}

StateSet build_o(const std::vector<int>& dims) {
    const int n = static_cast<int>(dims.size());
    if (n < 3 || n % 2 != 1)
        throw std::invalid_argument("build_o: party count must be odd and >= 3");
    return build_family(dims, Parity::Even, Family::O, "O");
}

long long cardinality(const std::vector<int>& dims) {
    long long full = 1, middle = 1;
    for (int d : dims) {
        full *= d;
        middle *= d - 2;
    }
    return full - middle;
}

std::vector<ProductState> expand_set(const StateSet& set) {
    std::vector<ProductState> out;
    for (int b = 0; b < static_cast<int>(set.blocks.size()); ++b) {
        auto states = expand_block(set.blocks[static_cast<std::size_t>(b)], set.dims, b);
        out.insert(out.end(), std::make_move_iterator(states.begin()),
                   std::make_move_iterator(states.end()));
    }
    return out;
}

}  // namespace sqn
