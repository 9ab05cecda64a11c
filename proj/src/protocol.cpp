#include "sqn/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

namespace sqn {

namespace {

// level group: 0 = bottom level, 1 = interior, 2 = top level
int level_group(int level, int d) {
    if (level == 0) return 0;
    if (level == d - 1) return 2;
    return 1;
}

std::vector<int> group_set(PartyLabel l) {
    switch (l) {
        case PartyLabel::Zero: return {0};
        case PartyLabel::AlphaSpread: return {0, 1};
        case PartyLabel::BetaSpread: return {1, 2};
        case PartyLabel::Top: return {2};
    }
    return {};
}

std::vector<int> party_index_set(PartyLabel l, int d) {
    switch (l) {
        case PartyLabel::Zero: return {0};
        case PartyLabel::Top: return {d - 1};
        case PartyLabel::AlphaSpread: {
            std::vector<int> out;
            for (int i = 0; i <= d - 2; ++i) out.push_back(i);
            return out;
        }
        case PartyLabel::BetaSpread: {
            std::vector<int> out;
            for (int i = 1; i <= d - 1; ++i) out.push_back(i);
            return out;
        }
    }
    return {};
}

std::vector<int> shifted_mod3(const std::vector<int>& set, int offset) {
    std::vector<int> out;
    out.reserve(set.size());
    for (int g : set) out.push_back((g + offset) % 3);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

RegisterLayout RegisterLayout::for_parties(const std::vector<int>& party_dims) {
    RegisterLayout layout;
    layout.n = static_cast<int>(party_dims.size());
    layout.dims = party_dims;
    layout.dims.insert(layout.dims.end(), static_cast<std::size_t>(2 * (layout.n - 1)), 3);
    layout.strides.assign(layout.dims.size(), 1);
    for (int r = static_cast<int>(layout.dims.size()) - 2; r >= 0; --r)
        layout.strides[static_cast<std::size_t>(r)] =
            layout.strides[static_cast<std::size_t>(r) + 1] *
            static_cast<uint64_t>(layout.dims[static_cast<std::size_t>(r) + 1]);
    return layout;
}

uint64_t RegisterLayout::pack(const std::vector<int>& coords) const {
    uint64_t idx = 0;
    for (std::size_t r = 0; r < coords.size(); ++r)
        idx += static_cast<uint64_t>(coords[r]) * strides[r];
    return idx;
}

int RegisterLayout::coord(uint64_t index, int reg) const {
    return static_cast<int>((index / strides[static_cast<std::size_t>(reg)]) %
                            static_cast<uint64_t>(dims[static_cast<std::size_t>(reg)]));
}

double SparseVec::norm_sq() const {
    double acc = 0;
    for (const auto& [idx, amp] : terms) acc += std::norm(amp);
    return acc;
}

void SparseVec::sort_and_merge(double drop_below) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<uint64_t, cx>> merged;
    for (const auto& [idx, amp] : terms) {
        if (!merged.empty() && merged.back().first == idx)
            merged.back().second += amp;
        else
            merged.emplace_back(idx, amp);
    }
    if (drop_below > 0) {
        std::erase_if(merged, [&](const auto& t) { return std::abs(t.second) <= drop_below; });
    }
    terms = std::move(merged);
}

ProtocolState attach_entanglement(const ProductState& s, std::size_t max_terms) {
    const int n = s.parties();
    if (n < 2) throw std::invalid_argument("attach_entanglement: need at least two parties");
    ProtocolState ps;
    ps.layout = RegisterLayout::for_parties(s.dims());

    // support of the product state, one coordinate vector per nonzero term
    std::vector<std::pair<std::vector<int>, cx>> support{{{}, cx{1.0, 0.0}}};
    for (const auto& f : s.factors) {
        std::vector<std::pair<std::vector<int>, cx>> next;
        for (const auto& [coords, amp] : support)
            for (int k = 0; k < f.dim; ++k) {
                const cx a = f.amps[static_cast<std::size_t>(k)];
                if (a == cx{0.0, 0.0}) continue;
                auto c = coords;
                c.push_back(k);
                next.emplace_back(std::move(c), amp * a);
            }
        support = std::move(next);
        if (support.size() * static_cast<std::size_t>(std::pow(3.0, n - 1)) > max_terms)
            throw std::length_error("attach_entanglement: sparse term cap exceeded");
    }

    const int pairs = n - 1;
    std::vector<int> coords(static_cast<std::size_t>(ps.layout.registers()), 0);
    std::vector<int> anc(static_cast<std::size_t>(pairs), 0);
    for (const auto& [pc, amp] : support) {
        std::fill(anc.begin(), anc.end(), 0);
        while (true) {
            for (int i = 0; i < n; ++i) coords[static_cast<std::size_t>(i)] = pc[static_cast<std::size_t>(i)];
            for (int j = 1; j <= pairs; ++j) {
                coords[static_cast<std::size_t>(ps.layout.alice_reg(j))] = anc[static_cast<std::size_t>(j - 1)];
                coords[static_cast<std::size_t>(ps.layout.partner_reg(j))] = anc[static_cast<std::size_t>(j - 1)];
            }
            ps.vec.terms.emplace_back(ps.layout.pack(coords), amp);
            int k = pairs - 1;
            while (k >= 0 && ++anc[static_cast<std::size_t>(k)] == 3) {
                anc[static_cast<std::size_t>(k)] = 0;
                --k;
            }
            if (k < 0) break;
        }
    }
    ps.vec.sort_and_merge();
    return ps;
}

void MeasurementSpec::verify_completeness() const {
    // walk the acting cube; every point must lie in exactly one outcome
    const std::vector<int>& extent = extents;
    std::vector<int> point(registers.size(), 0);
    while (true) {
        int hits = 0;
        for (const auto& out : outcomes) {
            bool inside = false;
            for (const auto& box : out.boxes) {
                bool all = true;
                for (std::size_t k = 0; k < box.size(); ++k)
                    if (!std::binary_search(box[k].begin(), box[k].end(),
                                            point[k])) {
                        all = false;
                        break;
                    }
                if (all) {
                    inside = true;
                    break;
                }
            }
            if (inside) ++hits;
        }
        if (hits != 1)
            throw std::logic_error("MeasurementSpec: outcomes do not partition the acting cube (" +
                                   name + ")");
        int k = static_cast<int>(point.size()) - 1;
        while (k >= 0 &&
               ++point[static_cast<std::size_t>(k)] == extent[static_cast<std::size_t>(k)]) {
            point[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }
}

MeasurementSpec party_group_measurement(int j, int d, const RegisterLayout& layout) {
    if (d < 3) throw std::invalid_argument("party_group_measurement: dimension must be >= 3");
    MeasurementSpec spec;
    spec.name = "group-correlate party " + std::to_string(j + 1);
    spec.registers = {layout.party_reg(j + 1), layout.partner_reg(j)};
    spec.extents = {d, 3};

    std::vector<int> middle;
    for (int l = 1; l <= d - 2; ++l) middle.push_back(l);
    for (int o = 0; o < 3; ++o) {
        OutcomeProjector out;
        out.label = "M" + std::to_string(j) + std::to_string(o + 1);
        out.boxes = {{{0}, {o}},
                     {middle, {(1 + o) % 3}},
                     {{d - 1}, {(2 + o) % 3}}};
        spec.outcomes.push_back(std::move(out));
    }
    spec.verify_completeness();
    return spec;
}

MeasurementSpec block_measurement(const StateSet& set, const std::vector<int>& offsets,
                                  const RegisterLayout& layout) {
    const int n = set.parties();
    if (static_cast<int>(offsets.size()) != n - 1)
        throw std::invalid_argument("block_measurement: need one offset per shared pair");
    for (int o : offsets)
        if (o < 0 || o > 2) throw std::invalid_argument("block_measurement: offset out of range");

    MeasurementSpec spec;
    spec.name = "block identification";
    spec.registers.push_back(layout.party_reg(1));
    spec.extents.push_back(set.dims[0]);
    for (int j = 1; j <= n - 1; ++j) {
        spec.registers.push_back(layout.alice_reg(j));
        spec.extents.push_back(3);
    }

    for (std::size_t b = 0; b < set.blocks.size(); ++b) {
        const auto& block = set.blocks[b];
        OutcomeProjector out;
        out.label = std::string(block.spec.cls == BlockClass::C ? "C" : "D") + "-block" +
                    std::to_string(b);
        std::vector<std::vector<int>> box;
        box.push_back(party_index_set(block.labels[0], set.dims[0]));
        for (int j = 1; j <= n - 1; ++j)
            box.push_back(shifted_mod3(group_set(block.labels[static_cast<std::size_t>(j)]),
                                       offsets[static_cast<std::size_t>(j - 1)]));
        out.boxes = {std::move(box)};
        spec.outcomes.push_back(std::move(out));
    }

    // remainder: interior levels of party 1, shifted interior group on each pair
    OutcomeProjector rest;
    rest.label = "remainder";
    std::vector<std::vector<int>> box;
    std::vector<int> middle;
    for (int l = 1; l <= set.dims[0] - 2; ++l) middle.push_back(l);
    box.push_back(middle);
    for (int j = 1; j <= n - 1; ++j)
        box.push_back({(1 + offsets[static_cast<std::size_t>(j - 1)]) % 3});
    rest.boxes = {std::move(box)};
    spec.outcomes.push_back(std::move(rest));

    spec.verify_completeness();
    return spec;
}

std::vector<MeasurementBranch> apply_measurement(const ProtocolState& ps,
                                                 const MeasurementSpec& spec) {
    const double norm = ps.vec.norm_sq();
    if (norm <= 0) throw std::invalid_argument("apply_measurement: zero state");
    std::vector<MeasurementBranch> branches;
    for (std::size_t o = 0; o < spec.outcomes.size(); ++o) {
        MeasurementBranch br;
        br.outcome = static_cast<int>(o);
        br.state.layout = ps.layout;
        for (const auto& [idx, amp] : ps.vec.terms) {
            bool inside = false;
            for (const auto& box : spec.outcomes[o].boxes) {
                bool all = true;
                for (std::size_t k = 0; k < spec.registers.size(); ++k) {
                    const int c = ps.layout.coord(idx, spec.registers[k]);
                    if (!std::binary_search(box[k].begin(), box[k].end(), c)) {
                        all = false;
                        break;
                    }
                }
                if (all) {
                    inside = true;
                    break;
                }
            }
            if (inside) br.state.vec.terms.emplace_back(idx, amp);
        }
        if (br.state.vec.terms.empty()) continue;
        br.probability = br.state.vec.norm_sq() / norm;
        branches.push_back(std::move(br));
    }
    return branches;
}

EbitLedger ebit_costs(const std::vector<int>& dims) {
    EbitLedger ledger;
    const int n = static_cast<int>(dims.size());
    ledger.consumed = (n - 1) * std::log2(3.0);
    double log_all = 0;
    int dmax = 0;
    for (int d : dims) {
        log_all += std::log2(static_cast<double>(d));
        dmax = std::max(dmax, d);
    }
    ledger.teleport_baseline = log_all - std::log2(static_cast<double>(dmax));
    return ledger;
}

namespace {

// rank-one projector |w><w| (x identity elsewhere) on a register subset;
// returns relative probability and the post state
std::pair<double, ProtocolState> apply_rank_one(
    const ProtocolState& ps, const std::vector<int>& regs,
    const std::vector<std::pair<std::vector<int>, cx>>& pattern) {
    // normalize the pattern
    double pnorm = 0;
    for (const auto& [c, a] : pattern) pnorm += std::norm(a);
    pnorm = std::sqrt(pnorm);

    std::unordered_map<uint64_t, cx> pattern_by_offset;  // packed offset -> amp
    for (const auto& [c, a] : pattern) {
        uint64_t off = 0;
        for (std::size_t k = 0; k < regs.size(); ++k)
            off += static_cast<uint64_t>(c[k]) *
                   ps.layout.strides[static_cast<std::size_t>(regs[k])];
        pattern_by_offset[off] = a / pnorm;
    }

    // group terms by the coordinates outside the measured registers
    std::map<uint64_t, cx> overlap;  // rest index -> <w|psi>_rest
    for (const auto& [idx, amp] : ps.vec.terms) {
        uint64_t off = 0;
        for (int r : regs)
            off += static_cast<uint64_t>(ps.layout.coord(idx, r)) *
                   ps.layout.strides[static_cast<std::size_t>(r)];
        const auto it = pattern_by_offset.find(off);
        if (it == pattern_by_offset.end()) continue;
        overlap[idx - off] += std::conj(it->second) * amp;
    }

    ProtocolState post;
    post.layout = ps.layout;
    double kept = 0;
    for (const auto& [rest, ov] : overlap) {
        if (ov == cx{0.0, 0.0}) continue;
        kept += std::norm(ov);
        for (const auto& [off, a] : pattern_by_offset)
            post.vec.terms.emplace_back(rest + off, a * ov);
    }
    post.vec.sort_and_merge();
    return {kept / ps.vec.norm_sq(), std::move(post)};
}

// readout patterns for the spread index of one party of the identified block
std::vector<std::vector<std::pair<std::vector<int>, cx>>> readout_patterns(
    const StateSet& set, const SymbolicBlock& block, int party,
    const std::vector<int>& offsets) {
    const int d = set.dims[static_cast<std::size_t>(party - 1)];
    const PartyLabel label = block.labels[static_cast<std::size_t>(party - 1)];
    std::vector<std::vector<std::pair<std::vector<int>, cx>>> out;

    for (int k = 0; k <= d - 2; ++k) {
        std::vector<std::pair<std::vector<int>, cx>> pattern;
        if (party == 1) {
            for (int u = 0; u <= d - 2; ++u) {
                const int level = label == PartyLabel::AlphaSpread ? u : u + 1;
                pattern.push_back({{level}, root_of_unity(d - 1, static_cast<long long>(k) * u)});
            }
        } else {
            const int o = offsets[static_cast<std::size_t>(party - 2)];
            for (int u = 0; u <= d - 2; ++u) {
                const int level = label == PartyLabel::AlphaSpread ? u : u + 1;
                const int anc = (level_group(level, d) + o) % 3;
                pattern.push_back(
                    {{level, anc, anc}, root_of_unity(d - 1, static_cast<long long>(k) * u)});
            }
        }
        out.push_back(std::move(pattern));
    }
    return out;
}

std::vector<int> readout_registers(const RegisterLayout& layout, int party) {
    if (party == 1) return {layout.party_reg(1)};
    const int j = party - 1;
    return {layout.party_reg(party), layout.alice_reg(j), layout.partner_reg(j)};
}

struct LeafContext {
    const StateSet* set;
    const std::vector<ProductState>* states;
    int state_id;
    EbitLedger ebits;
    std::vector<ProtocolTranscript>* out;
};

// identify the block and read the spread indices on one fully-branched leaf
void finish_leaf(const LeafContext& ctx, const ProtocolState& ps,
                 const std::vector<int>& offsets, double prob_so_far,
                 std::vector<std::pair<std::string, std::size_t>> snapshots,
                 std::mt19937_64* rng) {
    const StateSet& set = *ctx.set;
    ProtocolTranscript t;
    t.state_id = ctx.state_id;
    t.branch_offsets = offsets;
    t.ebits = ctx.ebits;
    t.within_block_method = "roots-of-unity readout over the block support";
    t.snapshots = std::move(snapshots);

    const MeasurementSpec alice = block_measurement(set, offsets, ps.layout);
    auto branches = apply_measurement(ps, alice);
    // selection is exact on computational boxes; only true hits survive
    std::erase_if(branches, [](const MeasurementBranch& b) { return b.probability <= 1e-12; });
    const int remainder_outcome = static_cast<int>(set.blocks.size());
    for (const auto& b : branches)
        if (b.outcome == remainder_outcome)
            throw ProtocolFailure("remainder outcome fired", t);
    if (branches.size() != 1)
        throw ProtocolFailure("block identification not unique", t);

    const int block_id = branches.front().outcome;
    const SymbolicBlock& block = set.blocks[static_cast<std::size_t>(block_id)];
    t.identified_block = block_id;
    t.identified_class = block.spec.cls;
    t.identified_q = block.spec.q;
    double prob = prob_so_far * branches.front().probability;
    ProtocolState cur = std::move(branches.front().state);
    t.snapshots.emplace_back("block identification", cur.vec.terms.size());

    // per spread party, project onto the d-1 orthogonal readout vectors
    for (int party = 1; party <= set.parties(); ++party) {
        if (!is_spread(block.labels[static_cast<std::size_t>(party - 1)])) continue;
        const auto regs = readout_registers(cur.layout, party);
        const auto patterns = readout_patterns(set, block, party, offsets);
        std::vector<std::pair<double, ProtocolState>> results;
        std::vector<double> probs;
        for (const auto& pattern : patterns) {
            results.push_back(apply_rank_one(cur, regs, pattern));
            probs.push_back(results.back().first);
        }
        int chosen = -1;
        if (rng) {
            std::discrete_distribution<int> dist(probs.begin(), probs.end());
            chosen = dist(*rng);
        } else {
            // exhaustive: on product inputs exactly one index survives
            for (std::size_t k = 0; k < probs.size(); ++k)
                if (probs[k] > 1e-9) {
                    if (chosen != -1)
                        throw ProtocolFailure("ambiguous readout at party " +
                                                  std::to_string(party), t);
                    chosen = static_cast<int>(k);
                }
            if (chosen == -1) throw ProtocolFailure("readout found no index", t);
        }
        t.identified_tuple.push_back(chosen);
        prob *= probs[static_cast<std::size_t>(chosen)];
        cur = std::move(results[static_cast<std::size_t>(chosen)].second);
        t.snapshots.emplace_back("readout party " + std::to_string(party),
                                 cur.vec.terms.size());
    }

    t.probability = prob;
    const auto& origin = (*ctx.states)[static_cast<std::size_t>(ctx.state_id)].origin;
    t.success = origin && origin->block == t.identified_block &&
                origin->tuple == t.identified_tuple;
    if (!t.success) throw ProtocolFailure("state misidentified", t);
    ctx.out->push_back(std::move(t));
}

}  // namespace

std::vector<ProtocolTranscript> run_protocol(const StateSet& set, int state_id,
                                             BranchPolicy policy, uint64_t seed,
                                             int trials) {
    const auto states = expand_set(set);
    if (state_id < 0 || state_id >= static_cast<int>(states.size()))
        throw std::out_of_range("run_protocol: state id out of range");
    const int n = set.parties();

    std::vector<ProtocolTranscript> out;
    LeafContext ctx{&set, &states, state_id, ebit_costs(set.dims), &out};

    const ProtocolState initial = attach_entanglement(states[static_cast<std::size_t>(state_id)]);

    if (policy == BranchPolicy::Exhaustive) {
        // depth-first over the n-1 group measurements
        struct Node {
            ProtocolState state;
            std::vector<int> offsets;
            double prob;
            std::vector<std::pair<std::string, std::size_t>> snapshots;
        };
        std::vector<Node> stack;
        stack.push_back({initial, {}, 1.0, {{"initial", initial.vec.terms.size()}}});
        while (!stack.empty()) {
            Node node = std::move(stack.back());
            stack.pop_back();
            const int j = static_cast<int>(node.offsets.size()) + 1;
            if (j > n - 1) {
                finish_leaf(ctx, node.state, node.offsets, node.prob, node.snapshots, nullptr);
                continue;
            }
            const MeasurementSpec spec = party_group_measurement(
                j, set.dims[static_cast<std::size_t>(j)], node.state.layout);
            for (auto& br : apply_measurement(node.state, spec)) {
                Node next;
                next.state = std::move(br.state);
                next.offsets = node.offsets;
                next.offsets.push_back(br.outcome);
                next.prob = node.prob * br.probability;
                next.snapshots = node.snapshots;
                next.snapshots.emplace_back(spec.name + " outcome " +
                                                std::to_string(br.outcome + 1),
                                            next.state.vec.terms.size());
                stack.push_back(std::move(next));
            }
        }
        return out;
    }

    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        ProtocolState cur = initial;
        std::vector<int> offsets;
        double prob = 1.0;
        std::vector<std::pair<std::string, std::size_t>> snapshots{
            {"initial", cur.vec.terms.size()}};
        for (int j = 1; j <= n - 1; ++j) {
            const MeasurementSpec spec = party_group_measurement(
                j, set.dims[static_cast<std::size_t>(j)], cur.layout);
            auto branches = apply_measurement(cur, spec);
            std::vector<double> probs;
            for (const auto& br : branches) probs.push_back(br.probability);
            std::discrete_distribution<int> dist(probs.begin(), probs.end());
            auto& chosen = branches[static_cast<std::size_t>(dist(rng))];
            offsets.push_back(chosen.outcome);
            prob *= chosen.probability;
            cur = std::move(chosen.state);
            snapshots.emplace_back(spec.name + " outcome " + std::to_string(offsets.back() + 1),
                                   cur.vec.terms.size());
        }
        finish_leaf(ctx, cur, offsets, prob, std::move(snapshots), &rng);
    }
    return out;
}

}  // namespace sqn
