#include "sqn/structure.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sqn {

namespace {

std::vector<int> label_index_set(PartyLabel l, int d) {
    std::vector<int> out;
    switch (l) {
        case PartyLabel::Zero: out = {0}; break;
        case PartyLabel::Top: out = {d - 1}; break;
        case PartyLabel::AlphaSpread:
            for (int i = 0; i <= d - 2; ++i) out.push_back(i);
            break;
        case PartyLabel::BetaSpread:
            for (int i = 1; i <= d - 1; ++i) out.push_back(i);
            break;
    }
    return out;
}

std::vector<int> sorted_intersection(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// packed row-major index of a point restricted to `parties` (0-based ids)
long long pack_point(const std::vector<int>& point, const std::vector<int>& parties,
                     const std::vector<int>& dims) {
    long long idx = 0;
    for (std::size_t k = 0; k < parties.size(); ++k)
        idx = idx * dims[static_cast<std::size_t>(parties[k])] + point[k];
    return idx;
}

// enumerate packed indices of a box restricted to `parties`
void box_points(const ProjectionBox& box, const std::vector<int>& parties,
                const std::vector<int>& dims, std::vector<long long>& out) {
    out.clear();
    std::vector<std::size_t> pos(parties.size(), 0);
    if (parties.empty()) return;
    for (int p : parties)
        if (box.sets[static_cast<std::size_t>(p)].empty()) return;
    std::vector<int> point(parties.size());
    while (true) {
        for (std::size_t k = 0; k < parties.size(); ++k)
            point[k] = box.sets[static_cast<std::size_t>(parties[k])][pos[k]];
        out.push_back(pack_point(point, parties, dims));
        int k = static_cast<int>(parties.size()) - 1;
        while (k >= 0) {
            if (++pos[static_cast<std::size_t>(k)] <
                box.sets[static_cast<std::size_t>(parties[static_cast<std::size_t>(k)])].size())
                break;
            pos[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }
}

bool boxes_intersect_on(const ProjectionBox& a, const ProjectionBox& b,
                        const std::vector<int>& parties) {
    for (int p : parties) {
        if (sorted_intersection(a.sets[static_cast<std::size_t>(p)],
                                b.sets[static_cast<std::size_t>(p)])
                .empty())
            return false;
    }
    return true;
}

long long intersection_size_on(const ProjectionBox& a, const ProjectionBox& b,
                               const std::vector<int>& parties) {
    long long size = 1;
    for (int p : parties) {
        size *= static_cast<long long>(sorted_intersection(
                                           a.sets[static_cast<std::size_t>(p)],
                                           b.sets[static_cast<std::size_t>(p)])
                                           .size());
        if (size == 0) return 0;
    }
    return size;
}

std::vector<int> to_zero_based(const std::vector<int>& one_based, int n, const char* who) {
    std::vector<int> out;
    out.reserve(one_based.size());
    for (int p : one_based) {
        if (p < 1 || p > n) throw std::invalid_argument(std::string(who) + ": party out of range");
        out.push_back(p - 1);
    }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        throw std::invalid_argument(std::string(who) + ": duplicate party");
    return out;
}

std::vector<int> complement_of(const std::vector<int>& x0, int n) {
    std::vector<int> out;
    for (int p = 0; p < n; ++p)
        if (!std::binary_search(x0.begin(), x0.end(), p)) out.push_back(p);
    return out;
}

}  // namespace

bool ProjectionBox::contains_point(const std::vector<int>& point,
                                   const std::vector<int>& parties) const {
    for (std::size_t k = 0; k < parties.size(); ++k)
        if (!std::binary_search(sets[static_cast<std::size_t>(parties[k])].begin(),
                                sets[static_cast<std::size_t>(parties[k])].end(), point[k]))
            return false;
    return true;
}

long long ProjectionBox::size_on(const std::vector<int>& parties) const {
    long long size = 1;
    for (int p : parties) size *= static_cast<long long>(sets[static_cast<std::size_t>(p)].size());
    return size;
}

ProjectionBox block_box(const SymbolicBlock& block, const std::vector<int>& dims, int owner) {
    ProjectionBox box;
    box.owner = owner;
    box.sets.reserve(block.labels.size());
    for (int t = 0; t < block.parties(); ++t)
        box.sets.push_back(label_index_set(block.labels[static_cast<std::size_t>(t)],
                                           dims[static_cast<std::size_t>(t)]));
    return box;
}

std::vector<ProjectionBox> set_boxes(const StateSet& set) {
    std::vector<ProjectionBox> out;
    out.reserve(set.blocks.size());
    for (int b = 0; b < static_cast<int>(set.blocks.size()); ++b)
        out.push_back(block_box(set.blocks[static_cast<std::size_t>(b)], set.dims, b));
    return out;
}

std::optional<std::vector<std::vector<int>>> box_intersection(
    const ProjectionBox& a, const ProjectionBox& b, const std::vector<int>& parties) {
    std::vector<std::vector<int>> out;
    out.reserve(parties.size());
    for (int p : parties) {
        auto s = sorted_intersection(a.sets[static_cast<std::size_t>(p)],
                                     b.sets[static_cast<std::size_t>(p)]);
        if (s.empty()) return std::nullopt;
        out.push_back(std::move(s));
    }
    return out;
}

ConnectivityReport is_connected(const std::vector<ProjectionBox>& boxes,
                                const std::vector<int>& x_parties) {
    ConnectivityReport report;
    if (boxes.empty()) throw std::invalid_argument("is_connected: no boxes");
    const int n = boxes.front().parties();
    const std::vector<int> x0 = to_zero_based(x_parties, n, "is_connected");

    const int m = static_cast<int>(boxes.size());
    std::vector<int> component(static_cast<std::size_t>(m), -1);
    std::vector<int> stack{0};
    component[0] = 0;
    while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        for (int other = 0; other < m; ++other) {
            if (component[static_cast<std::size_t>(other)] != -1) continue;
            if (boxes_intersect_on(boxes[static_cast<std::size_t>(cur)],
                                   boxes[static_cast<std::size_t>(other)], x0)) {
                component[static_cast<std::size_t>(other)] = 0;
                stack.push_back(other);
            }
        }
    }
    report.connected = std::find(component.begin(), component.end(), -1) == component.end();
    if (!report.connected) {
        for (int b = 0; b < m; ++b)
            if (component[static_cast<std::size_t>(b)] == 0) report.witness.push_back(b);
    }
    return report;
}

namespace {

// validity of a candidate member list as a PI cover of `target` on X
bool valid_cover(int target, const std::vector<int>& members,
                 const std::vector<ProjectionBox>& boxes, const std::vector<int>& x0,
                 const std::vector<int>& xbar) {
    if (members.empty()) return false;
    // common intersection on the complement
    std::vector<std::vector<int>> common;
    for (int p : xbar) common.push_back(boxes[static_cast<std::size_t>(members[0])]
                                            .sets[static_cast<std::size_t>(p)]);
    for (std::size_t k = 1; k < members.size(); ++k)
        for (std::size_t j = 0; j < xbar.size(); ++j) {
            common[j] = sorted_intersection(
                common[j], boxes[static_cast<std::size_t>(members[k])]
                               .sets[static_cast<std::size_t>(xbar[j])]);
            if (common[j].empty()) return false;
        }
    // coverage of the target's X box
    std::vector<int> point(x0.size());
    std::vector<std::size_t> pos(x0.size(), 0);
    // walk the target box directly to keep per-point party values at hand
    while (true) {
        for (std::size_t k = 0; k < x0.size(); ++k)
            point[k] = boxes[static_cast<std::size_t>(target)]
                           .sets[static_cast<std::size_t>(x0[k])][pos[k]];
        bool covered = false;
        for (int mbr : members)
            if (boxes[static_cast<std::size_t>(mbr)].contains_point(point, x0)) {
                covered = true;
                break;
            }
        if (!covered) return false;
        int k = static_cast<int>(x0.size()) - 1;
        while (k >= 0) {
            if (++pos[static_cast<std::size_t>(k)] <
                boxes[static_cast<std::size_t>(target)]
                    .sets[static_cast<std::size_t>(x0[static_cast<std::size_t>(k)])]
                    .size())
                break;
            pos[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return true;
}

int upi_member(int target, const std::vector<int>& members,
               const std::vector<ProjectionBox>& boxes, const std::vector<int>& x0) {
    for (int mbr : members)
        if (intersection_size_on(boxes[static_cast<std::size_t>(target)],
                                 boxes[static_cast<std::size_t>(mbr)], x0) == 1)
            return mbr;
    return -1;
}

}  // namespace

std::optional<PIRecord> find_pi(int target, const std::vector<int>& x_parties,
                                const std::vector<ProjectionBox>& boxes,
                                const std::vector<int>& dims,
                                const std::vector<BlockClass>& classes) {
    const int n = static_cast<int>(dims.size());
    const std::vector<int> x0 = to_zero_based(x_parties, n, "find_pi");
    const std::vector<int> xbar = complement_of(x0, n);
    const int m = static_cast<int>(boxes.size());

    std::vector<std::vector<int>> candidates;

    // natural covers: by class, then by complement level
    if (static_cast<int>(classes.size()) == m) {
        for (BlockClass cls : {BlockClass::C, BlockClass::D}) {
            std::vector<int> members;
            for (int b = 0; b < m; ++b)
                if (b != target && classes[static_cast<std::size_t>(b)] == cls)
                    members.push_back(b);
            candidates.push_back(std::move(members));
        }
    }
    if (!xbar.empty() && xbar.size() <= 10) {
        // corner assignments over the complement: each coordinate 0 or d-1
        const std::size_t combos = 1ull << xbar.size();
        for (std::size_t c = 0; c < combos; ++c) {
            std::vector<int> corner(xbar.size());
            for (std::size_t j = 0; j < xbar.size(); ++j)
                corner[j] = (c & (1ull << j)) ? dims[static_cast<std::size_t>(xbar[j])] - 1 : 0;
            std::vector<int> members;
            for (int b = 0; b < m; ++b)
                if (b != target &&
                    boxes[static_cast<std::size_t>(b)].contains_point(corner, xbar))
                    members.push_back(b);
            candidates.push_back(std::move(members));
        }
    }

    std::optional<PIRecord> best;
    auto consider = [&](const std::vector<int>& members) {
        if (!valid_cover(target, members, boxes, x0, xbar))
            return best && best->upi;
        const int witness = upi_member(target, members, boxes, x0);
        PIRecord rec{target, members, witness >= 0, witness};
        const bool improves =
            !best || (rec.upi && !best->upi) ||
            (rec.upi == best->upi && rec.members.size() < best->members.size());
        if (improves) best = std::move(rec);
        return best->upi;
    };
    for (const auto& members : candidates)
        if (consider(members)) return best;
    if (best) return best;

    // bounded fallback: unions of up to 8 other blocks, increasing size
    std::vector<int> others;
    for (int b = 0; b < m; ++b)
        if (b != target) others.push_back(b);
    long long budget = 200000;
    const int max_take = std::min<int>(8, static_cast<int>(others.size()));
    for (int take = 1; take <= max_take && budget > 0; ++take) {
        std::vector<int> idx(static_cast<std::size_t>(take));
        std::iota(idx.begin(), idx.end(), 0);
        while (budget-- > 0) {
            std::vector<int> members;
            for (int k : idx) members.push_back(others[static_cast<std::size_t>(k)]);
            if (consider(members)) return best;
            int k = take - 1;
            while (k >= 0 && idx[static_cast<std::size_t>(k)] ==
                                 static_cast<int>(others.size()) - take + k)
                --k;
            if (k < 0) break;
            ++idx[static_cast<std::size_t>(k)];
            for (int j = k + 1; j < take; ++j)
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j) - 1] + 1;
        }
        if (best) break;  // smallest covers first
    }
    return best;
}

SetSequence build_set_sequence(const std::vector<ProjectionBox>& boxes,
                               const std::vector<int>& x_parties,
                               const std::vector<int>& dims,
                               const std::vector<BlockClass>& classes) {
    const int n = static_cast<int>(dims.size());
    const std::vector<int> x0 = to_zero_based(x_parties, n, "build_set_sequence");
    const int m = static_cast<int>(boxes.size());

    SetSequence seq;
    std::vector<char> assigned(static_cast<std::size_t>(m), 0);
    std::vector<int> first;
    for (int b = 0; b < m; ++b) {
        auto pi = find_pi(b, x_parties, boxes, dims, classes);
        if (pi && pi->upi) {
            first.push_back(b);
            assigned[static_cast<std::size_t>(b)] = 1;
        }
    }
    if (first.empty())
        throw std::runtime_error("build_set_sequence: no block has a UPI cover");
    seq.groups.push_back(std::move(first));

    while (true) {
        std::vector<int> next;
        for (int b = 0; b < m; ++b) {
            if (assigned[static_cast<std::size_t>(b)]) continue;
            for (int prev : seq.groups.back()) {
                if (boxes_intersect_on(boxes[static_cast<std::size_t>(b)],
                                       boxes[static_cast<std::size_t>(prev)], x0)) {
                    next.push_back(b);
                    break;
                }
            }
        }
        if (next.empty()) break;
        for (int b : next) assigned[static_cast<std::size_t>(b)] = 1;
        seq.groups.push_back(std::move(next));
    }
    for (int b = 0; b < m; ++b)
        if (!assigned[static_cast<std::size_t>(b)]) seq.leftover.push_back(b);
    return seq;
}

namespace {

// condition i): every basis tail {i..d_X-1} sits inside the union of X-boxes
// of the blocks whose complement box meets V_i
bool check_basis_tails(const std::vector<ProjectionBox>& boxes, const std::vector<int>& x0,
                       const std::vector<int>& xbar, const std::vector<int>& dims,
                       std::string& detail) {
    long long d_x = 1;
    for (int p : x0) d_x *= dims[static_cast<std::size_t>(p)];

    const int m = static_cast<int>(boxes.size());
    std::vector<std::vector<long long>> x_points(static_cast<std::size_t>(m));
    std::vector<std::vector<long long>> xbar_points(static_cast<std::size_t>(m));
    for (int b = 0; b < m; ++b) {
        box_points(boxes[static_cast<std::size_t>(b)], x0, dims, x_points[static_cast<std::size_t>(b)]);
        box_points(boxes[static_cast<std::size_t>(b)], xbar, dims,
                   xbar_points[static_cast<std::size_t>(b)]);
        std::sort(x_points[static_cast<std::size_t>(b)].begin(),
                  x_points[static_cast<std::size_t>(b)].end());
        std::sort(xbar_points[static_cast<std::size_t>(b)].begin(),
                  xbar_points[static_cast<std::size_t>(b)].end());
    }

    for (long long i = 0; i + 1 < d_x; ++i) {
        // V_i: union of complement boxes of blocks whose X box contains i
        std::set<long long> v_i;
        for (int b = 0; b < m; ++b)
            if (std::binary_search(x_points[static_cast<std::size_t>(b)].begin(),
                                   x_points[static_cast<std::size_t>(b)].end(), i))
                v_i.insert(xbar_points[static_cast<std::size_t>(b)].begin(),
                           xbar_points[static_cast<std::size_t>(b)].end());
        // S~: union of X boxes of blocks whose complement box meets V_i
        std::vector<char> s_tilde(static_cast<std::size_t>(d_x), 0);
        for (int b = 0; b < m; ++b) {
            bool meets = false;
            for (long long pt : xbar_points[static_cast<std::size_t>(b)])
                if (v_i.count(pt)) {
                    meets = true;
                    break;
                }
            if (meets)
                for (long long pt : x_points[static_cast<std::size_t>(b)])
                    s_tilde[static_cast<std::size_t>(pt)] = 1;
        }
        for (long long j = i; j < d_x; ++j)
            if (!s_tilde[static_cast<std::size_t>(j)]) {
                std::ostringstream os;
                os << "condition i fails at tail " << i << ": basis point " << j
                   << " not reached";
                detail = os.str();
                return false;
            }
    }
    return true;
}

bool contained_in(const std::vector<std::vector<int>>& inner,
                  const std::vector<std::vector<int>>& outer) {
    for (std::size_t k = 0; k < inner.size(); ++k)
        if (!is_subset(inner[k], outer[k])) return false;
    return true;
}

}  // namespace

ConditionReport check_conditions(const std::vector<ProjectionBox>& boxes,
                                 const std::vector<int>& x_parties,
                                 const std::vector<int>& dims,
                                 const std::vector<BlockClass>& classes) {
    ConditionReport report;
    report.x_parties = x_parties;
    if (boxes.empty()) throw std::invalid_argument("check_conditions: no boxes");
    const int n = static_cast<int>(dims.size());
    const std::vector<int> x0 = to_zero_based(x_parties, n, "check_conditions");
    const std::vector<int> xbar = complement_of(x0, n);
    const int m = static_cast<int>(boxes.size());

    report.basis_tails_covered = check_basis_tails(boxes, x0, xbar, dims, report.detail);

    std::vector<std::optional<PIRecord>> pi(static_cast<std::size_t>(m));
    report.pi_for_every_block = true;
    for (int b = 0; b < m; ++b) {
        pi[static_cast<std::size_t>(b)] = find_pi(b, x_parties, boxes, dims, classes);
        if (!pi[static_cast<std::size_t>(b)]) {
            report.pi_for_every_block = false;
            if (report.detail.empty())
                report.detail = "condition ii fails: block " + std::to_string(b) +
                                " has no PI cover";
        }
    }

    const auto conn = is_connected(boxes, x_parties);
    report.connected = conn.connected;
    if (!conn.connected && report.detail.empty())
        report.detail = "condition iv fails: " + std::to_string(conn.witness.size()) +
                        " blocks form an isolated group";

    report.sequence_linked = false;
    if (report.pi_for_every_block) {
        try {
            const SetSequence seq = build_set_sequence(boxes, x_parties, dims, classes);
            bool ok = seq.exhaustive();
            if (!ok && report.detail.empty())
                report.detail = "condition iii fails: layering left " +
                                std::to_string(seq.leftover.size()) + " blocks unreached";
            for (std::size_t x = 0; ok && x + 1 < seq.groups.size(); ++x) {
                for (int t : seq.groups[x + 1]) {
                    bool linked = false;
                    // prefer a nonvacuous witness: member intersecting the target
                    for (bool allow_vacuous : {false, true}) {
                        for (int mbr : pi[static_cast<std::size_t>(t)]->members) {
                            auto t_m = box_intersection(boxes[static_cast<std::size_t>(t)],
                                                        boxes[static_cast<std::size_t>(mbr)], x0);
                            if (!t_m) {
                                if (!allow_vacuous) continue;
                                linked = true;  // empty intersection: contained in anything
                                break;
                            }
                            for (int s : seq.groups[x]) {
                                auto t_s = box_intersection(boxes[static_cast<std::size_t>(t)],
                                                            boxes[static_cast<std::size_t>(s)], x0);
                                if (t_s && contained_in(*t_m, *t_s)) {
                                    linked = true;
                                    break;
                                }
                            }
                            if (linked) break;
                        }
                        if (linked) break;
                    }
                    if (!linked) {
                        ok = false;
                        if (report.detail.empty())
                            report.detail = "condition iii fails at block " + std::to_string(t);
                        break;
                    }
                }
            }
            report.sequence_linked = ok;
        } catch (const std::runtime_error& e) {
            if (report.detail.empty()) report.detail = e.what();
        }
    }
    return report;
}

StructuralVerdict strong_nonlocality_structural(const StateSet& set) {
    StructuralVerdict verdict;
    const auto boxes = set_boxes(set);
    std::vector<BlockClass> classes;
    classes.reserve(set.blocks.size());
    for (const auto& b : set.blocks) classes.push_back(b.spec.cls);

    verdict.certified = true;
    for (int i = 1; i <= set.parties(); ++i) {
        std::vector<int> x;
        for (int p = 1; p <= set.parties(); ++p)
            if (p != i) x.push_back(p);
        verdict.per_party.push_back(check_conditions(boxes, x, set.dims, classes));
        if (!verdict.per_party.back().all()) verdict.certified = false;
    }
    return verdict;
}

TilingReport verify_tiling(const StateSet& set) {
    TilingReport report;
    const auto boxes = set_boxes(set);
    const int n = set.parties();
    long long cube = 1;
    for (int d : set.dims) cube *= d;

    std::vector<int> all_parties(static_cast<std::size_t>(n));
    std::iota(all_parties.begin(), all_parties.end(), 0);

    report.disjoint = true;
    report.covers_complement = true;
    std::vector<int> point(static_cast<std::size_t>(n), 0);
    for (long long cell = 0; cell < cube; ++cell) {
        long long rest = cell;
        for (int t = n - 1; t >= 0; --t) {
            point[static_cast<std::size_t>(t)] =
                static_cast<int>(rest % set.dims[static_cast<std::size_t>(t)]);
            rest /= set.dims[static_cast<std::size_t>(t)];
        }
        bool middle = true;
        for (int t = 0; t < n; ++t)
            if (point[static_cast<std::size_t>(t)] < 1 ||
                point[static_cast<std::size_t>(t)] > set.dims[static_cast<std::size_t>(t)] - 2) {
                middle = false;
                break;
            }
        int hits = 0;
        for (const auto& box : boxes)
            if (box.contains_point(point, all_parties)) ++hits;
        if (middle) {
            ++report.middle_cells;
            if (hits != 0) {
                report.covers_complement = false;
                if (report.detail.empty()) report.detail = "middle cell covered";
            }
        } else {
            if (hits == 0) {
                report.covers_complement = false;
                if (report.detail.empty()) report.detail = "cell uncovered";
            } else if (hits > 1) {
                report.disjoint = false;
                if (report.detail.empty()) report.detail = "cell covered twice";
            } else {
                ++report.covered_cells;
            }
        }
    }
    return report;
}

}  // namespace sqn
