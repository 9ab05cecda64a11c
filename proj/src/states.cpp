#include "sqn/states.hpp"

#include <cmath>
#include <numbers>

namespace sqn {

cx root_of_unity(int m, long long power) {
    if (m <= 0) throw std::invalid_argument("root_of_unity: order must be positive");
    long long r = power % m;
    if (r < 0) r += m;
    // quarter turns are exact; everything else goes through polar
    if (r == 0) return {1.0, 0.0};
    if (4 * r == m) return {0.0, 1.0};
    if (2 * r == m) return {-1.0, 0.0};
    if (4 * r == 3LL * m) return {0.0, -1.0};
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / m;
    return {std::cos(angle), std::sin(angle)};
}

LocalVector local_vector(const LocalLabel& label, int d) {
    if (d < 3) throw std::invalid_argument("local_vector: dimension must be >= 3");
    LocalVector v;
    v.dim = d;
    v.amps.assign(static_cast<std::size_t>(d), cx{0.0, 0.0});
    switch (label.kind) {
        case LabelKind::Zero:
            v.amps[0] = 1.0;
            break;
        case LabelKind::Top:
            v.amps[static_cast<std::size_t>(d) - 1] = 1.0;
            break;
        case LabelKind::Alpha: {
            if (label.index < 0 || label.index > d - 2)
                throw std::invalid_argument("local_vector: alpha index out of range");
            for (int u = 0; u <= d - 2; ++u)
                v.amps[static_cast<std::size_t>(u)] =
                    root_of_unity(d - 1, static_cast<long long>(label.index) * u);
            break;
        }
        case LabelKind::Beta: {
            if (label.index < 0 || label.index > d - 2)
                throw std::invalid_argument("local_vector: beta index out of range");
            for (int u = 0; u <= d - 2; ++u)
                v.amps[static_cast<std::size_t>(u) + 1] =
                    root_of_unity(d - 1, static_cast<long long>(label.index) * u);
            break;
        }
    }
    return v;
}

std::vector<int> ProductState::dims() const {
    std::vector<int> out;
    out.reserve(factors.size());
    for (const auto& f : factors) out.push_back(f.dim);
    return out;
}

cx inner_product(const LocalVector& a, const LocalVector& b) {
    if (a.dim != b.dim) throw std::invalid_argument("inner_product: dimension mismatch");
    cx acc{0.0, 0.0};
    for (int i = 0; i < a.dim; ++i)
        acc += std::conj(a.amps[static_cast<std::size_t>(i)]) * b.amps[static_cast<std::size_t>(i)];
    return acc;
}

cx inner_product(const ProductState& a, const ProductState& b) {
    if (a.parties() != b.parties())
        throw std::invalid_argument("inner_product: party count mismatch");
    cx acc{1.0, 0.0};
    for (int t = 0; t < a.parties(); ++t)
        acc *= inner_product(a.factors[static_cast<std::size_t>(t)],
                             b.factors[static_cast<std::size_t>(t)]);
    return acc;
}

std::vector<cx> tensor_expand(const ProductState& s, std::size_t cap) {
    std::size_t total = 1;
    for (const auto& f : s.factors) {
        total *= static_cast<std::size_t>(f.dim);
        if (total > cap) throw std::length_error("tensor_expand: dimension cap exceeded");
    }
    std::vector<cx> out{cx{1.0, 0.0}};
    for (const auto& f : s.factors) {
        std::vector<cx> next(out.size() * static_cast<std::size_t>(f.dim));
        for (std::size_t i = 0; i < out.size(); ++i)
            for (int k = 0; k < f.dim; ++k)
                next[i * static_cast<std::size_t>(f.dim) + static_cast<std::size_t>(k)] =
                    out[i] * f.amps[static_cast<std::size_t>(k)];
        out = std::move(next);
    }
    return out;
}

LocalVector canonical_scaled(const LocalVector& v, double abs_zero) {
    for (const cx& a : v.amps) {
        if (std::abs(a) > abs_zero) {
            LocalVector out = v;
            const cx phase = std::conj(a) / std::abs(a);
            for (cx& x : out.amps) x *= phase;
            return out;
        }
    }
    throw std::invalid_argument("canonical_scaled: zero vector");
}

bool states_equal(const ProductState& a, const ProductState& b, double abs_zero) {
    if (a.parties() != b.parties()) return false;
    for (int t = 0; t < a.parties(); ++t) {
        const auto& fa = a.factors[static_cast<std::size_t>(t)];
        const auto& fb = b.factors[static_cast<std::size_t>(t)];
        if (fa.dim != fb.dim) return false;
        const LocalVector ca = canonical_scaled(fa, abs_zero);
        const LocalVector cb = canonical_scaled(fb, abs_zero);
        for (int i = 0; i < fa.dim; ++i)
            if (std::abs(ca.amps[static_cast<std::size_t>(i)] -
                         cb.amps[static_cast<std::size_t>(i)]) > abs_zero)
                return false;
    }
    return true;
}

}  // namespace sqn
