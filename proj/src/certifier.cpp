#include "sqn/certifier.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace sqn {

namespace {

// Hermitian parameter layout: D diagonal reals, then Re(E_pq) and Im(E_pq)
// for p < q in packed upper-triangle order.
struct ParamLayout {
    long long d;
    long long tri;  // d*(d-1)/2

    explicit ParamLayout(long long dim) : d(dim), tri(dim * (dim - 1) / 2) {}

    int diag(long long p) const { return static_cast<int>(p); }
    long long tri_index(long long p, long long q) const {  // requires p < q
        return p * d - p * (p + 1) / 2 + (q - p - 1);
    }
    int re(long long p, long long q) const { return static_cast<int>(d + tri_index(p, q)); }
    int im(long long p, long long q) const {
        return static_cast<int>(d + tri + tri_index(p, q));
    }
    int count() const { return static_cast<int>(d * d); }
};

// sparse X-side restriction of a product state: (packed index, amplitude)
std::vector<std::pair<long long, cx>> restrict_to(const ProductState& s,
                                                  const std::vector<int>& x0,
                                                  double abs_zero) {
    std::vector<std::pair<long long, cx>> acc{{0, cx{1.0, 0.0}}};
    for (int p : x0) {
        const auto& f = s.factors[static_cast<std::size_t>(p)];
        std::vector<std::pair<long long, cx>> next;
        next.reserve(acc.size() * static_cast<std::size_t>(f.dim));
        for (const auto& [idx, amp] : acc)
            for (int k = 0; k < f.dim; ++k) {
                const cx a = f.amps[static_cast<std::size_t>(k)];
                if (std::abs(a) <= abs_zero) continue;
                next.emplace_back(idx * f.dim + k, amp * a);
            }
        acc = std::move(next);
    }
    return acc;
}

// canonical form for dedup: unit norm, first entry positive
void canonicalize_row(std::vector<std::pair<int, double>>& entries) {
    double norm2 = 0;
    for (const auto& [idx, c] : entries) norm2 += c * c;
    const double scale = (entries.front().second < 0 ? -1.0 : 1.0) / std::sqrt(norm2);
    for (auto& [idx, c] : entries) c *= scale;
}

}  // namespace

ConstraintSystem assemble_constraints(const std::vector<ProductState>& states,
                                      const std::vector<int>& x_parties,
                                      const std::vector<int>& dims, long long cap,
                                      const Tolerance& tol) {
    tol.validate();
    const int n = static_cast<int>(dims.size());
    ConstraintSystem cs;
    cs.x_parties = x_parties;
    std::vector<int> x0;
    for (int p : x_parties) {
        if (p < 1 || p > n)
            throw std::invalid_argument("assemble_constraints: party out of range");
        x0.push_back(p - 1);
    }
    std::sort(x0.begin(), x0.end());
    cs.dim_x = 1;
    for (int p : x0) {
        cs.x_dims.push_back(dims[static_cast<std::size_t>(p)]);
        cs.dim_x *= dims[static_cast<std::size_t>(p)];
    }
    if (cs.dim_x > cap)
        throw std::length_error(
            "assemble_constraints: joint dimension " + std::to_string(cs.dim_x) +
            " exceeds cap " + std::to_string(cap) + "; use the structural checker");
    const ParamLayout layout(cs.dim_x);
    cs.params = layout.count();

    std::vector<int> xbar;
    for (int p = 0; p < n; ++p)
        if (!std::binary_search(x0.begin(), x0.end(), p)) xbar.push_back(p);

    std::vector<std::vector<std::pair<long long, cx>>> xside;
    xside.reserve(states.size());
    for (const auto& s : states) {
        if (s.dims() != dims)
            throw std::invalid_argument("assemble_constraints: state dims mismatch");
        xside.push_back(restrict_to(s, x0, tol.abs_zero));
    }

    std::map<std::vector<std::pair<int, double>>, std::size_t> seen;
    const std::size_t count = states.size();
    std::vector<double> re_row, im_row;  // scratch, indexed by param
    for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t l = k + 1; l < count; ++l) {
            ++cs.total_pairs;
            cx coeff{1.0, 0.0};
            for (int p : xbar)
                coeff *= inner_product(states[k].factors[static_cast<std::size_t>(p)],
                                       states[l].factors[static_cast<std::size_t>(p)]);
            if (std::abs(coeff) <= tol.abs_zero) continue;
            ++cs.nonvacuous_pairs;

            // <x_k|E|x_l> = sum conj(xk[p]) xl[q] E[p][q], two real rows
            std::map<int, double> re_entries, im_entries;
            for (const auto& [p, ak] : xside[k])
                for (const auto& [q, al] : xside[l]) {
                    const cx z = std::conj(ak) * al;
                    if (p == q) {
                        re_entries[layout.diag(p)] += z.real();
                        im_entries[layout.diag(p)] += z.imag();
                    } else if (p < q) {
                        // z*(a + ib)
                        re_entries[layout.re(p, q)] += z.real();
                        re_entries[layout.im(p, q)] -= z.imag();
                        im_entries[layout.re(p, q)] += z.imag();
                        im_entries[layout.im(p, q)] += z.real();
                    } else {
                        // z*(a - ib)
                        re_entries[layout.re(q, p)] += z.real();
                        re_entries[layout.im(q, p)] += z.imag();
                        im_entries[layout.re(q, p)] += z.imag();
                        im_entries[layout.im(q, p)] -= z.real();
                    }
                }
            for (const auto* part : {&re_entries, &im_entries}) {
                std::vector<std::pair<int, double>> entries;
                for (const auto& [idx, c] : *part)
                    if (std::abs(c) > tol.abs_zero) entries.emplace_back(idx, c);
                if (entries.empty()) continue;
                ++cs.raw_rows;
                canonicalize_row(entries);
                auto [it, inserted] = seen.emplace(std::move(entries), cs.rows.size());
                if (inserted) {
                    ConstraintRow row;
                    row.entries = it->first;
                    row.provenance = {{static_cast<int>(k), static_cast<int>(l)}};
                    cs.rows.push_back(std::move(row));
                } else {
                    cs.rows[it->second].provenance.emplace_back(static_cast<int>(k),
                                                                static_cast<int>(l));
                }
            }
        }
    }
    return cs;
}

std::vector<cx> param_to_matrix(const std::vector<double>& v, long long dim_x) {
    const ParamLayout layout(dim_x);
    if (static_cast<long long>(v.size()) != layout.count())
        throw std::invalid_argument("param_to_matrix: size mismatch");
    std::vector<cx> m(static_cast<std::size_t>(dim_x * dim_x));
    for (long long p = 0; p < dim_x; ++p)
        m[static_cast<std::size_t>(p * dim_x + p)] = v[static_cast<std::size_t>(layout.diag(p))];
    for (long long p = 0; p < dim_x; ++p)
        for (long long q = p + 1; q < dim_x; ++q) {
            const cx z{v[static_cast<std::size_t>(layout.re(p, q))],
                       v[static_cast<std::size_t>(layout.im(p, q))]};
            m[static_cast<std::size_t>(p * dim_x + q)] = z;
            m[static_cast<std::size_t>(q * dim_x + p)] = std::conj(z);
        }
    return m;
}

namespace {

double row_dot(const ConstraintRow& row, const Eigen::VectorXd& v) {
    double acc = 0;
    for (const auto& [idx, c] : row.entries) acc += c * v[idx];
    return acc;
}

Eigen::VectorXd identity_direction(long long dim_x) {
    const ParamLayout layout(dim_x);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(layout.count());
    for (long long p = 0; p < dim_x; ++p) v[layout.diag(p)] = 1.0;
    v.normalize();
    return v;
}

}  // namespace

HermitianSolutionSpace solve_nullspace(const ConstraintSystem& cs, const Tolerance& tol,
                                       double min_spectral_gap) {
    tol.validate();
    HermitianSolutionSpace out;
    const int params = cs.params;
    const Eigen::VectorXd ident = identity_direction(cs.dim_x);

    if (cs.rows.empty()) {
        out.dimension = params;
        out.spectral_gap = std::numeric_limits<double>::infinity();
        if (params <= 4096) {
            out.basis.reserve(static_cast<std::size_t>(params));
            for (int i = 0; i < params; ++i) {
                std::vector<double> e(static_cast<std::size_t>(params), 0.0);
                e[static_cast<std::size_t>(i)] = 1.0;
                out.basis.push_back(std::move(e));
            }
        }
        out.verdict = params == 1 ? SpaceVerdict::Trivial : SpaceVerdict::Nontrivial;
        if (out.verdict == SpaceVerdict::Nontrivial) {
            std::vector<double> w(static_cast<std::size_t>(params), 0.0);
            w[0] = 1.0;
            out.witness = std::move(w);
        }
        out.note = "no constraints";
        return out;
    }

    const int nrows = static_cast<int>(cs.rows.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nrows, params);
    for (int r = 0; r < nrows; ++r)
        for (const auto& [idx, c] : cs.rows[static_cast<std::size_t>(r)].entries)
            m(r, idx) = c;

    // full V so the nullspace columns are present even when rows < params
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();  // descending
    out.sigma_max = sv.size() > 0 ? sv[0] : 0.0;
    const double threshold = tol.rel_nullspace * out.sigma_max;

    int rank = 0;
    while (rank < sv.size() && sv[rank] >= threshold) ++rank;
    const int kernel_dim = params - rank;
    out.dimension = kernel_dim;

    const double smallest_kept = rank > 0 ? sv[rank - 1] : 0.0;
    const double largest_dropped = rank < sv.size() ? sv[rank] : 0.0;
    out.spectral_gap = largest_dropped > 0
                           ? smallest_kept / largest_dropped
                           : std::numeric_limits<double>::infinity();

    for (const auto& row : cs.rows)
        out.identity_residual = std::max(out.identity_residual, std::abs(row_dot(row, ident)));

    if (out.identity_residual > tol.rel_nullspace) {
        out.verdict = SpaceVerdict::Inconclusive;
        out.note = "identity violates the constraints; input set not orthogonal on the pairs used";
        return out;
    }

    if (kernel_dim > 0) {
        const Eigen::MatrixXd& v = svd.matrixV();
        out.basis.reserve(static_cast<std::size_t>(kernel_dim));
        for (int c = rank; c < params; ++c) {
            out.basis.emplace_back(v.col(c).data(), v.col(c).data() + params);
            for (const auto& row : cs.rows)
                out.residual = std::max(out.residual, std::abs(row_dot(row, v.col(c))));
        }

        if (kernel_dim > 1) {
            // witness orthogonal to the identity direction
            Eigen::Map<const Eigen::VectorXd> b0(out.basis[0].data(), params);
            Eigen::Map<const Eigen::VectorXd> b1(out.basis[1].data(), params);
            Eigen::VectorXd w = b0 - ident.dot(b0) * ident;
            if (w.norm() < 0.5) w = b1 - ident.dot(b1) * ident;
            if (w.norm() > 0) {
                w.normalize();
                out.witness = std::vector<double>(w.data(), w.data() + params);
            }
        }
    }

    if (std::isfinite(out.spectral_gap) && out.spectral_gap < min_spectral_gap) {
        out.verdict = SpaceVerdict::Inconclusive;
        out.note = "spectral gap below threshold";
        return out;
    }

    if (kernel_dim == 1) {
        const Eigen::Map<const Eigen::VectorXd> v0(out.basis[0].data(), params);
        const double off_identity = (v0 - ident.dot(v0) * ident).norm();
        if (off_identity <= tol.rel_nullspace) {
            out.verdict = SpaceVerdict::Trivial;
        } else {
            out.verdict = SpaceVerdict::Nontrivial;
            out.witness = out.basis[0];
            out.note = "one-dimensional space not spanned by the identity";
        }
    } else if (kernel_dim > 1) {
        out.verdict = SpaceVerdict::Nontrivial;
    } else {
        out.verdict = SpaceVerdict::Inconclusive;
        out.note = "empty solution space";
    }
    return out;
}

namespace {

NumericalCertification certify_impl(const std::vector<ProductState>& states,
                                    const std::vector<int>& dims, const Tolerance& tol,
                                    long long cap) {
    NumericalCertification cert;
    const int n = static_cast<int>(dims.size());
    bool any_nontrivial = false, any_inconclusive = false, any_capped = false;

    for (int i = 1; i <= n; ++i) {
        PartyCertificate pc;
        pc.party = i;
        std::vector<int> x;
        for (int p = 1; p <= n; ++p)
            if (p != i) x.push_back(p);
        pc.dim_x = 1;
        for (int p : x) pc.dim_x *= dims[static_cast<std::size_t>(p - 1)];
        if (pc.dim_x > cap) {
            pc.status = PartyStatus::Capped;
            any_capped = true;
            cert.parties.push_back(std::move(pc));
            continue;
        }
        const ConstraintSystem cs = assemble_constraints(states, x, dims, cap, tol);
        pc.total_pairs = cs.total_pairs;
        pc.nonvacuous_pairs = cs.nonvacuous_pairs;
        pc.rows = cs.rows.size();
        pc.space = solve_nullspace(cs, tol);
        switch (pc.space.verdict) {
            case SpaceVerdict::Trivial: pc.status = PartyStatus::Trivial; break;
            case SpaceVerdict::Nontrivial:
                pc.status = PartyStatus::Nontrivial;
                any_nontrivial = true;
                break;
            case SpaceVerdict::Inconclusive:
                pc.status = PartyStatus::Inconclusive;
                any_inconclusive = true;
                break;
        }
        cert.parties.push_back(std::move(pc));
    }

    cert.complete = !any_capped;
    if (any_nontrivial) {
        cert.verdict = CertVerdict::Refuted;
    } else if (any_inconclusive || any_capped) {
        cert.verdict = CertVerdict::Inconclusive;
        if (any_capped) cert.note = "some parties exceeded the dimension cap";
    } else {
        cert.verdict = CertVerdict::Certified;
    }
    return cert;
}

}  // namespace

NumericalCertification certify_strong_nonlocality_numerical(const StateSet& set,
                                                            const Tolerance& tol,
                                                            long long cap) {
    return certify_impl(expand_set(set), set.dims, tol, cap);
}

NumericalCertification certify_states_numerical(const std::vector<ProductState>& states,
                                                const std::vector<int>& dims,
                                                const Tolerance& tol, long long cap) {
    return certify_impl(states, dims, tol, cap);
}

}  // namespace sqn
