// protocol.hpp
// Entanglement-assisted discrimination protocol: party 1 (Alice) shares one
// 3x3 maximally entangled pair with each remaining party, the other parties
// correlate their level group (bottom / middle / top) into the shared pairs,
// Alice projects onto per-block index boxes to identify the block, and a
// roots-of-unity readout recovers the state inside the block.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqn/construction.hpp"
#include "sqn/states.hpp"

namespace sqn {

// Registers in packing order: parties 1..n, then Alice ancillas a_1..a_{n-1},
// then the far-side ancillas b_1..b_{n-1} (ancillas are qutrits).
struct RegisterLayout {
    int n = 0;
    std::vector<int> dims;      // all registers
    std::vector<uint64_t> strides;

    static RegisterLayout for_parties(const std::vector<int>& party_dims);

    int registers() const { return static_cast<int>(dims.size()); }
    int party_reg(int i) const { return i - 1; }            // i is 1-based
    int alice_reg(int j) const { return n + j - 1; }        // j in 1..n-1
    int partner_reg(int j) const { return 2 * n + j - 2; }  // j in 1..n-1

    uint64_t pack(const std::vector<int>& coords) const;
    int coord(uint64_t index, int reg) const;
};

struct SparseVec {
    std::vector<std::pair<uint64_t, cx>> terms;  // sorted by index

    double norm_sq() const;
    void sort_and_merge(double drop_below = 0.0);
};

struct ProtocolState {
    RegisterLayout layout;
    SparseVec vec;
};

ProtocolState attach_entanglement(const ProductState& s,
                                  std::size_t max_terms = 1000000);

// One labeled diagonal projector: a union of per-register index boxes.
struct OutcomeProjector {
    std::string label;
    std::vector<std::vector<std::vector<int>>> boxes;  // [box][acting register]
};

struct MeasurementSpec {
    std::string name;
    std::vector<int> registers;  // acting register ids
    std::vector<int> extents;    // acting register dimensions
    std::vector<OutcomeProjector> outcomes;
    double completeness_residual = 0.0;  // exact partition check over the acting cube

    // sum of projectors == identity on the acting registers; throws on overlap
    void verify_completeness() const;
};

// Measurement a party j performs on (its register, its shared ancilla):
// outcome o correlates the ancilla with the level group shifted by o.
MeasurementSpec party_group_measurement(int j, int d, const RegisterLayout& layout);

// Alice's block-identifying measurement for the given branch offsets; one
// projector per block plus the middle-box remainder.
MeasurementSpec block_measurement(const StateSet& set, const std::vector<int>& offsets,
                                  const RegisterLayout& layout);

struct MeasurementBranch {
    int outcome = -1;
    double probability = 0.0;
    ProtocolState state;
};

// Born-rule application on the (possibly unnormalized) state; probabilities
// are relative to the input norm and zero-probability branches are omitted.
std::vector<MeasurementBranch> apply_measurement(const ProtocolState& ps,
                                                 const MeasurementSpec& spec);

struct EbitLedger {
    double consumed = 0.0;           // (n-1) * log2(3)
    double teleport_baseline = 0.0;  // log2 of the dim product without the largest
};

EbitLedger ebit_costs(const std::vector<int>& dims);

struct ProtocolTranscript {
    int state_id = -1;
    std::vector<int> branch_offsets;      // per-party outcome offsets in {0,1,2}
    int identified_block = -1;
    BlockClass identified_class = BlockClass::C;
    std::vector<int> identified_q;
    std::vector<int> identified_tuple;    // spread indices, ascending party order
    double probability = 0.0;             // product of branch probabilities
    bool success = false;
    EbitLedger ebits;
    std::string within_block_method;      // flags the readout completion used
    std::vector<std::pair<std::string, std::size_t>> snapshots;  // round, term count
};

struct ProtocolFailure : std::runtime_error {
    ProtocolTranscript transcript;
    ProtocolFailure(const std::string& what, ProtocolTranscript t)
        : std::runtime_error(what), transcript(std::move(t)) {}
};

enum class BranchPolicy { Exhaustive, Sampled };

// Runs the protocol on one state of the set.  Exhaustive traverses every
// branch combination; Sampled draws `trials` seeded runs.  Throws
// ProtocolFailure on any misidentification.
std::vector<ProtocolTranscript> run_protocol(const StateSet& set, int state_id,
                                             BranchPolicy policy, uint64_t seed = 0,
                                             int trials = 500);

}  // namespace sqn
