// states.hpp
// Unnormalized multipartite product states over local qudits, the special
// local vectors used by the set constructions (roots-of-unity spreads over
// the lower or upper d-1 levels), inner products and dense tensor expansion.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sqn {

using cx = std::complex<double>;

// Shared numerical policy.  All fields strictly positive.
struct Tolerance {
    double abs_zero = 1e-10;      // |z| below this counts as zero
    double rel_nullspace = 1e-8;  // singular values below rel * sigma_max are null
    double completeness = 1e-12;  // measurement completeness residual

    void validate() const {
        if (abs_zero <= 0 || rel_nullspace <= 0 || completeness <= 0)
            throw std::invalid_argument("Tolerance: all fields must be positive");
    }
};

// omega(m, p) = exp(2*pi*i*p/m), exact at quarter turns so that qutrit
// amplitudes come out as {0, +-1} and d=5 spreads as {+-1, +-i}.
cx root_of_unity(int m, long long power);

enum class LabelKind { Zero, Top, Alpha, Beta };

// One local factor in symbolic form.  Alpha(k)/Beta(k) carry the spread
// index k in {0..d-2}; Zero/Top ignore it.
struct LocalLabel {
    LabelKind kind = LabelKind::Zero;
    int index = 0;

    static LocalLabel zero() { return {LabelKind::Zero, 0}; }
    static LocalLabel top() { return {LabelKind::Top, 0}; }
    static LocalLabel alpha(int k) { return {LabelKind::Alpha, k}; }
    static LocalLabel beta(int k) { return {LabelKind::Beta, k}; }

    bool operator==(const LocalLabel&) const = default;
};

// Unnormalized local vector, dim >= 3.
struct LocalVector {
    int dim = 0;
    std::vector<cx> amps;
};

// amplitudes per the label rule:
//   Zero     -> e_0
//   Top      -> e_{d-1}
//   Alpha(k) -> sum_u omega_{d-1}^{ku} e_u,      u in 0..d-2
//   Beta(k)  -> sum_u omega_{d-1}^{ku} e_{u+1},  u in 0..d-2
LocalVector local_vector(const LocalLabel& label, int d);

// Product state with one factor per party.  origin, when present, records
// which symbolic block and which spread-index tuple produced it.
struct ProductState {
    struct Origin {
        int block = -1;
        std::vector<int> tuple;
        bool operator==(const Origin&) const = default;
    };

    std::vector<LocalVector> factors;
    std::optional<Origin> origin;

    int parties() const { return static_cast<int>(factors.size()); }
    std::vector<int> dims() const;
};

// <a|b>, conjugate-linear in the first argument.
cx inner_product(const LocalVector& a, const LocalVector& b);

// Product of per-party inner products.  Throws on dimension mismatch.
cx inner_product(const ProductState& a, const ProductState& b);

// Kronecker expansion in party order, row-major index
// sum_t i_t * prod_{u>t} d_u.  Throws when the result exceeds cap entries.
std::vector<cx> tensor_expand(const ProductState& s, std::size_t cap = (1u << 24));

// Scales so the first nonzero amplitude is real positive (set-equality
// convention for unnormalized states).
LocalVector canonical_scaled(const LocalVector& v, double abs_zero = 1e-10);

// Equality up to the canonical scaling, factor by factor.
bool states_equal(const ProductState& a, const ProductState& b, double abs_zero = 1e-10);

}  // namespace sqn
