#pragma once

/*
 * Construction of complete sets of mutually unbiased measurements (MUMs).
 *
 * In dimension d the recipe is:
 *   1. the d^2-1 orthonormal SU(d) generators F_{n,b} (generalized
 *      Gell-Mann family: symmetric, antisymmetric, diagonal);
 *   2. a deterministic partition of them into d+1 groups of d-1;
 *   3. per group b the traceless operators
 *        F_n^(b) = F^(b) - (d+sqrt(d)) F_{n,b}   (n = 1..d-1)
 *        F_d^(b) = (1+sqrt(d)) F^(b)
 *      with F^(b) the sum of the group;
 *   4. measurement elements P_n^(b) = I/d + t F_n^(b), with t small enough
 *      that every element stays positive semidefinite.
 *
 * The efficiency of the resulting set is
 *      kappa = 1/d + t^2 (1+sqrt(d))^2 (d-1),
 * in (1/d, 1]; t = max_t(d) attains the top of the range allowed by
 * positivity, and for d = 2 that limit reproduces the projective Pauli
 * eigenbases (kappa = 1).
 *
 * Index conventions: basis states, measurement indices n and group indices b
 * are 1-based in documentation and error messages, 0-based in storage.
 *
 * Everything here is pure; MumSet values are immutable after construction
 * and safe to share across threads.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mumsep/errors.hpp"
#include "mumsep/opalg.hpp"

namespace mumsep {

// Default tolerance for verification reports (one order looser than the
// eigensolver target).
inline constexpr double kVerifyTol = 1e-9;

// Positivity slack when validating measurement elements.
inline constexpr double kPsdTol = 1e-10;

enum class GeneratorKind { symmetric = 0, antisymmetric = 1, diagonal = 2 };

struct GeneratorLabel {
    GeneratorKind kind;
    int n;  // 1-based
    int b;  // 1-based
};

// The d^2-1 orthonormal traceless Hermitian generators of SU(d).
struct GeneratorSet {
    int d = 0;
    std::vector<ComplexMatrix> ops;
    std::vector<GeneratorLabel> labels;
};

// A complete (or truncated) set of MUMs on dimension d.
struct MumSet {
    int d = 0;        // single-party dimension
    int M = 0;        // number of measurements (d+1 when complete)
    double t = 0.0;   // construction parameter
    double kappa = 0.0;  // efficiency, Tr(P_n^2)
    std::vector<std::vector<ComplexMatrix>> operators;  // [b][n], M x d
    std::vector<std::vector<ComplexMatrix>> f_ops;      // [b][n], underlying F_n^(b)
};

inline GeneratorSet su_generators(int d) {
    if (d < 2) throw dimension_error("su_generators: dimension must be >= 2, got " + std::to_string(d));
    GeneratorSet g;
    g.d = d;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int n = 1; n <= d; ++n) {
        for (int b = 1; b <= d; ++b) {
            if (n < b) {
                ComplexMatrix m(d);
                m(n - 1, b - 1) = inv_sqrt2;
                m(b - 1, n - 1) = inv_sqrt2;
                g.ops.push_back(std::move(m));
                g.labels.push_back({GeneratorKind::symmetric, n, b});
            } else if (b < n) {
                ComplexMatrix m(d);
                m(n - 1, b - 1) = cplx(0.0, inv_sqrt2);
                m(b - 1, n - 1) = cplx(0.0, -inv_sqrt2);
                g.ops.push_back(std::move(m));
                g.labels.push_back({GeneratorKind::antisymmetric, n, b});
            } else if (n <= d - 1) {
                ComplexMatrix m(d);
                const double scale = 1.0 / std::sqrt(static_cast<double>(n) * (n + 1));
                for (int k = 0; k < n; ++k) m(k, k) = scale;
                m(n, n) = -static_cast<double>(n) * scale;
                g.ops.push_back(std::move(m));
                g.labels.push_back({GeneratorKind::diagonal, n, b});
            }
        }
    }
    return g;
}

// Deterministic partition into d+1 groups of d-1: sort by (kind, n, b),
// chunk consecutively. Any partition works for the construction; fixing one
// keeps builds reproducible.
inline std::vector<std::vector<ComplexMatrix>> partition_generators(const GeneratorSet& g) {
    const int d = g.d;
    std::vector<int> order(g.ops.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        const GeneratorLabel &a = g.labels[x], &b = g.labels[y];
        if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        if (a.n != b.n) return a.n < b.n;
        return a.b < b.b;
    });
    std::vector<std::vector<ComplexMatrix>> groups(d + 1);
    for (int grp = 0; grp <= d; ++grp) {
        groups[grp].reserve(d - 1);
        for (int j = 0; j < d - 1; ++j) groups[grp].push_back(g.ops[order[grp * (d - 1) + j]]);
    }
    return groups;
}

// The (d+1) x d grid of traceless Hermitian operators behind the
// measurement elements.
inline std::vector<std::vector<ComplexMatrix>> build_f_operators(int d) {
    const auto groups = partition_generators(su_generators(d));
    const double sd = std::sqrt(static_cast<double>(d));
    std::vector<std::vector<ComplexMatrix>> f(d + 1);
    for (int b = 0; b <= d; ++b) {
        ComplexMatrix group_sum(d);
        for (const ComplexMatrix& op : groups[b]) group_sum = group_sum + op;
        f[b].reserve(d);
        for (int n = 0; n < d - 1; ++n) f[b].push_back(group_sum - (d + sd) * groups[b][n]);
        f[b].push_back((1.0 + sd) * group_sum);
    }
    return f;
}

inline double kappa_from_t(int d, double t) {
    if (t < 0.0) throw contract_error("kappa_from_t: t must be >= 0");
    const double sd = std::sqrt(static_cast<double>(d));
    return 1.0 / d + t * t * (1.0 + sd) * (1.0 + sd) * (d - 1);
}

namespace detail {

inline double max_t_for(const std::vector<std::vector<ComplexMatrix>>& f_ops, int d) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& group : f_ops)
        for (const ComplexMatrix& f : group) {
            const double lo = min_eigenvalue(f, 1e-12);
            if (lo < 0.0) best = std::min(best, (1.0 / d) / (-lo));
        }
    return best;
}

}  // namespace detail

// Largest t keeping every I/d + t F_n^(b) positive semidefinite:
// min over operators of (1/d) / |lambda_min|. Every F_n^(b) is traceless
// and nonzero, so a negative eigenvalue always exists.
inline double max_t(int d) {
    if (d < 2) throw dimension_error("max_t: dimension must be >= 2");
    return detail::max_t_for(build_f_operators(d), d);
}

// Builds the complete set of d+1 MUMs. Default t is max_t(d), the maximal
// efficiency the construction admits.
inline MumSet build_mums(int d, std::optional<double> t_opt = std::nullopt) {
    if (d < 2) throw dimension_error("build_mums: dimension must be >= 2, got " + std::to_string(d));
    MumSet s;
    s.d = d;
    s.M = d + 1;
    s.f_ops = build_f_operators(d);
    s.t = t_opt ? *t_opt : detail::max_t_for(s.f_ops, d);
    if (!(s.t > 0.0)) throw contract_error("build_mums: t must be positive, got " + std::to_string(s.t));
    s.kappa = kappa_from_t(d, s.t);

    const ComplexMatrix eye_over_d = (1.0 / d) * identity(d);
    s.operators.resize(d + 1);
    for (int b = 0; b <= d; ++b) {
        s.operators[b].reserve(d);
        for (int n = 0; n < d; ++n) {
            ComplexMatrix p = eye_over_d + s.t * s.f_ops[b][n];
            const double lo = min_eigenvalue(p, 1e-12);
            if (lo < -kPsdTol)
                throw positivity_error("build_mums: operator (b=" + std::to_string(b + 1) +
                                       ", n=" + std::to_string(n + 1) +
                                       ") has minimum eigenvalue " + std::to_string(lo) +
                                       "; t=" + std::to_string(s.t) + " exceeds max_t(" +
                                       std::to_string(d) + ")");
            s.operators[b].push_back(std::move(p));
        }
    }
    return s;
}

// Entrywise transpose of every element. Preserves all defining trace
// relations (Tr(A^T B^T) = Tr(AB)), hence t and kappa.
inline MumSet transpose_mums(const MumSet& s) {
    MumSet r = s;
    for (auto& group : r.operators)
        for (ComplexMatrix& p : group) p = transpose(p);
    for (auto& group : r.f_ops)
        for (ComplexMatrix& f : group) f = transpose(f);
    return r;
}

// Per-condition maximum absolute deviations for a MumSet.
struct MumVerification {
    double unit_trace = 0.0;       // |Tr(P) - 1|
    double hermiticity = 0.0;      // ||P - P^dag||_max
    double positivity = 0.0;       // max(0, -lambda_min)
    double completeness = 0.0;     // ||sum_n P_n^(b) - I||_max
    double trace_relations = 0.0;  // deviation from the defining pairwise traces
    double kappa_consistency = 0.0;  // |kappa - (1/d + t^2 (1+sqrt d)^2 (d-1))|
    bool kappa_in_range = false;     // 1/d < kappa <= 1

    bool pass(double tol) const {
        return unit_trace <= tol && hermiticity <= tol && positivity <= tol &&
               completeness <= tol && trace_relations <= tol && kappa_consistency <= tol &&
               kappa_in_range;
    }
};

// Checks unit trace, Hermiticity, positivity, completeness, the defining
// trace relations, the kappa(t) identity, and the kappa range. Failures are
// data, not errors.
inline MumVerification verify_mums(const MumSet& s, double tol = kVerifyTol) {
    MumVerification v;
    const int d = s.d;
    const ComplexMatrix eye = identity(d);

    for (int b = 0; b < s.M; ++b) {
        ComplexMatrix sum(d);
        for (int n = 0; n < d; ++n) {
            const ComplexMatrix& p = s.operators[b][n];
            v.unit_trace = std::max(v.unit_trace, std::abs(trace(p) - cplx(1.0, 0.0)));
            v.hermiticity = std::max(v.hermiticity, hermiticity_defect(p));
            // spectrum of the Hermitian part; the defect itself is reported above
            const ComplexMatrix hpart = 0.5 * (p + dagger(p));
            const double lo = min_eigenvalue(hpart, kHermitianTol);
            v.positivity = std::max(v.positivity, std::max(0.0, -lo));
            sum = sum + p;
        }
        v.completeness = std::max(v.completeness, max_abs_diff(sum, eye));
    }

    for (int b = 0; b < s.M; ++b)
        for (int n = 0; n < d; ++n)
            for (int b2 = 0; b2 < s.M; ++b2)
                for (int n2 = 0; n2 < d; ++n2) {
                    const cplx tp = trace_product(s.operators[b][n], s.operators[b2][n2]);
                    double expected;
                    if (b == b2 && n == n2) expected = s.kappa;
                    else if (b == b2) expected = (1.0 - s.kappa) / (d - 1);
                    else expected = 1.0 / d;
                    v.trace_relations = std::max(v.trace_relations, std::abs(tp - cplx(expected, 0.0)));
                }

    v.kappa_consistency = std::abs(s.kappa - kappa_from_t(d, std::max(s.t, 0.0)));
    v.kappa_in_range = s.kappa > 1.0 / d && s.kappa <= 1.0 + tol;
    return v;
}

// Deviations from the three structural conditions on the F grid:
// intra-group Gram structure, zero group sum, inter-group orthogonality.
struct FVerification {
    double intra_gram = 0.0;
    double sum_zero = 0.0;
    double inter_orthogonality = 0.0;

    bool pass(double tol) const {
        return intra_gram <= tol && sum_zero <= tol && inter_orthogonality <= tol;
    }
};

inline FVerification verify_f_conditions(const std::vector<std::vector<ComplexMatrix>>& f_ops,
                                         int d, double tol = kVerifyTol) {
    (void)tol;
    FVerification v;
    const double sd = std::sqrt(static_cast<double>(d));
    const double coeff = (1.0 + sd) * (1.0 + sd);
    const int M = static_cast<int>(f_ops.size());
    for (int b = 0; b < M; ++b) {
        ComplexMatrix sum(d);
        for (int n = 0; n < d; ++n) sum = sum + f_ops[b][n];
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                const cplx tp = trace_product(f_ops[b][i], f_ops[b][j]);
                const double expected = (i == j) ? coeff * (d - 1) : -coeff;
                v.intra_gram = std::max(v.intra_gram, std::abs(tp - cplx(expected, 0.0)));
            }
        }
        double sum_max = 0.0;
        for (const cplx& c : sum.entries()) sum_max = std::max(sum_max, std::abs(c));
        v.sum_zero = std::max(v.sum_zero, sum_max);
    }
    for (int b = 0; b < M; ++b)
        for (int b2 = b + 1; b2 < M; ++b2)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    v.inter_orthogonality = std::max(
                        v.inter_orthogonality,
                        std::abs(trace_product(f_ops[b][i], f_ops[b2][j])));
    return v;
}

namespace detail {

inline bool is_prime(int n) {
    if (n < 2) return false;
    for (int k = 2; k * k <= n; ++k)
        if (n % k == 0) return false;
    return true;
}

}  // namespace detail

// Complete set of d+1 mutually unbiased bases for prime d, as the baseline
// the measurement criteria are compared against. d = 2 uses the three Pauli
// eigenbases; odd primes use the quadratic-phase family
//   v_{a,j}[k] = omega^(a k^2 + j k) / sqrt(d),  omega = e^{2 pi i / d},
// plus the computational basis.
inline std::vector<std::vector<std::vector<cplx>>> mub_prime(int d) {
    if (!detail::is_prime(d))
        throw dimension_error("mub_prime: dimension " + std::to_string(d) +
                              " is not prime; only prime dimensions are supported");
    std::vector<std::vector<std::vector<cplx>>> bases;
    if (d == 2) {
        const double s = 1.0 / std::sqrt(2.0);
        bases.push_back({{1.0, 0.0}, {0.0, 1.0}});                              // Z
        bases.push_back({{s, s}, {s, -s}});                                     // X
        bases.push_back({{s, cplx(0.0, s)}, {s, cplx(0.0, -s)}});               // Y
        return bases;
    }
    std::vector<std::vector<cplx>> computational(d, std::vector<cplx>(d, cplx{}));
    for (int k = 0; k < d; ++k) computational[k][k] = 1.0;
    bases.push_back(std::move(computational));
    const double inv_sd = 1.0 / std::sqrt(static_cast<double>(d));
    for (int a = 0; a < d; ++a) {
        std::vector<std::vector<cplx>> basis(d, std::vector<cplx>(d));
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                const long long r = (static_cast<long long>(a) * k % d * k + static_cast<long long>(j) * k) % d;
                const double ang = 2.0 * M_PI * static_cast<double>(r) / d;
                basis[j][k] = inv_sd * cplx(std::cos(ang), std::sin(ang));
            }
        bases.push_back(std::move(basis));
    }
    return bases;
}

}  // namespace mumsep
