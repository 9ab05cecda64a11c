// certifier.hpp
// Numerical triviality oracle for orthogonality-preserving measurements on a
// party subset X.  Each ordered state pair whose complement-side inner
// product is nonzero forces <x_k|E|x_l> = 0; the solver computes the
// nullspace of the real-linearized constraint rows over the D_X^2 real
// parameters of a Hermitian E and decides whether only multiples of the
// identity survive.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqn/construction.hpp"
#include "sqn/states.hpp"

namespace sqn {

// Sparse real row over the Hermitian parameter vector
// (D diagonal entries, then Re upper triangle, then Im upper triangle).
struct ConstraintRow {
    std::vector<std::pair<int, double>> entries;          // sorted by param index
    std::vector<std::pair<int, int>> provenance;          // contributing state pairs
};

struct ConstraintSystem {
    std::vector<int> x_parties;   // 1-based
    std::vector<int> x_dims;
    long long dim_x = 0;          // product of x_dims
    int params = 0;               // dim_x^2
    std::vector<ConstraintRow> rows;

    std::size_t total_pairs = 0;
    std::size_t nonvacuous_pairs = 0;  // nonzero complement inner product
    std::size_t raw_rows = 0;          // nonzero real rows before dedup
};

// Throws std::length_error when dim_x exceeds cap (use the structural
// checker instead).
ConstraintSystem assemble_constraints(const std::vector<ProductState>& states,
                                      const std::vector<int>& x_parties,
                                      const std::vector<int>& dims,
                                      long long cap = 128,
                                      const Tolerance& tol = {});

enum class SpaceVerdict { Trivial, Nontrivial, Inconclusive };

struct HermitianSolutionSpace {
    int dimension = 0;
    std::vector<std::vector<double>> basis;  // orthonormal param vectors
    double residual = 0.0;                   // max |row . v| over basis
    double identity_residual = 0.0;          // max |row . vec(I)|
    double spectral_gap = 0.0;               // smallest kept / largest dropped sigma
    double sigma_max = 0.0;
    SpaceVerdict verdict = SpaceVerdict::Inconclusive;
    std::optional<std::vector<double>> witness;  // non-identity solution, if any
    std::string note;
};

// Rank-revealing nullspace of the constraint rows.  Singular values below
// rel_nullspace * sigma_max count as zero; a kept/dropped ratio under
// min_spectral_gap yields an inconclusive verdict.
HermitianSolutionSpace solve_nullspace(const ConstraintSystem& cs, const Tolerance& tol = {},
                                       double min_spectral_gap = 1e3);

// param vector -> dense row-major Hermitian matrix of size dim_x
std::vector<cx> param_to_matrix(const std::vector<double>& v, long long dim_x);

enum class PartyStatus { Trivial, Nontrivial, Inconclusive, Capped };

struct PartyCertificate {
    int party = 0;  // bipartition {party} vs the rest; X = the rest
    long long dim_x = 0;
    std::size_t total_pairs = 0;
    std::size_t nonvacuous_pairs = 0;
    std::size_t rows = 0;
    PartyStatus status = PartyStatus::Capped;
    HermitianSolutionSpace space;
};

enum class CertVerdict { Certified, Refuted, Inconclusive };

struct NumericalCertification {
    CertVerdict verdict = CertVerdict::Inconclusive;
    bool complete = false;  // false when some party was capped
    std::vector<PartyCertificate> parties;
    std::string note;
};

NumericalCertification certify_strong_nonlocality_numerical(const StateSet& set,
                                                            const Tolerance& tol = {},
                                                            long long cap = 128);

// Same oracle over an explicit state list (negative controls, fixtures).
NumericalCertification certify_states_numerical(const std::vector<ProductState>& states,
                                                const std::vector<int>& dims,
                                                const Tolerance& tol = {},
                                                long long cap = 128);

}  // namespace sqn
