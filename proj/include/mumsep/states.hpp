#pragma once

/*
 * Density matrices on composite spaces: validation plus the standard test
 * families (maximally mixed, pure, isotropic, GHZ, products, mixtures) and
 * seeded random generation.
 *
 * Random conventions (fixed so corpora regenerate bit-identically):
 *   - random_density: Ginibre normalization G G^dag / Tr(G G^dag), G filled
 *     row-major, real part then imaginary part, from SplitMix64 normals.
 *   - random_product: party i draws from substream i of the seed.
 *   - random_separable: mixture weights are Exp(1) variates from substream 0,
 *     normalized (uniform over the simplex); term k's product state uses
 *     substream k+1.
 */

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "mumsep/errors.hpp"
#include "mumsep/opalg.hpp"
#include "mumsep/rng.hpp"

namespace mumsep {

// Validation tolerances: Hermiticity and trace at 1e-10, eigenvalue floor
// at -1e-9 to absorb eigensolver noise.
inline constexpr double kStateHermitianTol = 1e-10;
inline constexpr double kStateTraceTol = 1e-10;
inline constexpr double kStateNegativityTol = 1e-9;

struct DensityMatrix {
    std::vector<int> dims;  // subsystem dimensions, in tensor order
    ComplexMatrix matrix;

    int total_dim() const { return matrix.dim(); }
};

inline int product_of(const std::vector<int>& dims) {
    int p = 1;
    for (int d : dims) {
        if (d < 1) throw dimension_error("subsystem dimension must be >= 1");
        p *= d;
    }
    return p;
}

struct DensityCheck {
    double hermiticity = 0.0;
    double trace_deviation = 0.0;
    double negativity = 0.0;  // max(0, -lambda_min)
    bool dims_consistent = true;

    bool pass() const {
        return dims_consistent && hermiticity <= kStateHermitianTol &&
               trace_deviation <= kStateTraceTol && negativity <= kStateNegativityTol;
    }

    std::string failures() const {
        std::string out;
        auto add = [&out](const std::string& s) {
            if (!out.empty()) out += ", ";
            out += s;
        };
        if (!dims_consistent) add("subsystem dimensions do not multiply to the matrix size");
        if (hermiticity > kStateHermitianTol)
            add("hermiticity deviation " + std::to_string(hermiticity));
        if (trace_deviation > kStateTraceTol)
            add("trace deviation " + std::to_string(trace_deviation));
        if (negativity > kStateNegativityTol)
            add("negative eigenvalue of magnitude " + std::to_string(negativity));
        return out;
    }
};

inline DensityCheck check_density(const DensityMatrix& rho) {
    DensityCheck c;
    c.dims_consistent = product_of(rho.dims) == rho.total_dim() && !rho.dims.empty();
    c.hermiticity = hermiticity_defect(rho.matrix);
    c.trace_deviation = std::abs(trace(rho.matrix) - cplx(1.0, 0.0));
    if (c.hermiticity <= kStateHermitianTol) {
        const double lo = min_eigenvalue(rho.matrix, kStateHermitianTol);
        c.negativity = std::max(0.0, -lo);
    } else {
        c.negativity = 1.0;
    }
    return c;
}

inline void require_valid(const DensityMatrix& rho) {
    const DensityCheck c = check_density(rho);
    if (!c.pass()) throw positivity_error("invalid density matrix: " + c.failures());
}

inline DensityMatrix maximally_mixed(std::vector<int> dims) {
    for (int d : dims)
        if (d < 2) throw dimension_error("maximally_mixed: dims must all be >= 2");
    const int total = product_of(dims);
    return {std::move(dims), (1.0 / total) * identity(total)};
}

inline DensityMatrix pure(const std::vector<cplx>& amplitudes, std::vector<int> dims) {
    const int total = product_of(dims);
    if (static_cast<int>(amplitudes.size()) != total)
        throw shape_error("pure: amplitude vector length " + std::to_string(amplitudes.size()) +
                          " does not match total dimension " + std::to_string(total));
    return {std::move(dims), outer(amplitudes)};  // outer rejects the zero vector
}

// p |Phi+><Phi+| + (1-p) I/d^2 on (d, d); separable exactly when
// p <= 1/(d+1). Valid (PSD) for -1/(d^2-1) <= p <= 1.
inline DensityMatrix isotropic(int d, double p) {
    if (d < 2) throw dimension_error("isotropic: dimension must be >= 2");
    const double lo = -1.0 / (static_cast<double>(d) * d - 1.0);
    if (p < lo || p > 1.0)
        throw positivity_error("isotropic: p = " + std::to_string(p) + " outside PSD range [" +
                               std::to_string(lo) + ", 1]");
    const int D = d * d;
    ComplexMatrix m = ((1.0 - p) / D) * identity(D);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i * d + i, j * d + j) += p / d;
    return {{d, d}, std::move(m)};
}

inline DensityMatrix ghz(int d, int m) {
    if (d < 2 || m < 2) throw dimension_error("ghz: requires d >= 2 and m >= 2");
    int total = 1;
    for (int i = 0; i < m; ++i) total *= d;
    std::vector<cplx> v(total, cplx{});
    const int stride = (total - 1) / (d - 1);  // index of |k...k> is k * stride
    for (int k = 0; k < d; ++k) v[k * stride] = 1.0;
    return pure(v, std::vector<int>(m, d));
}

inline DensityMatrix noisy_ghz(int d, int m, double p) {
    DensityMatrix g = ghz(d, m);
    const int D = g.total_dim();
    const double lo = -1.0 / (static_cast<double>(D) - 1.0);
    if (p < lo || p > 1.0)
        throw positivity_error("noisy_ghz: p = " + std::to_string(p) + " outside PSD range [" +
                               std::to_string(lo) + ", 1]");
    ComplexMatrix m2 = ((1.0 - p) / D) * identity(D);
    for (std::size_t k = 0; k < m2.entries().size(); ++k)
        m2.entries()[k] += p * g.matrix.entries()[k];
    return {g.dims, std::move(m2)};
}

inline DensityMatrix product(const std::vector<DensityMatrix>& states) {
    if (states.empty()) throw shape_error("product: no factors");
    DensityMatrix out = states[0];
    for (std::size_t i = 1; i < states.size(); ++i) {
        out.matrix = kron(out.matrix, states[i].matrix);
        out.dims.insert(out.dims.end(), states[i].dims.begin(), states[i].dims.end());
    }
    return out;
}

inline DensityMatrix mixture(const std::vector<DensityMatrix>& states,
                             const std::vector<double>& weights) {
    if (states.empty() || states.size() != weights.size())
        throw state_error("mixture: need equally many states and weights");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw state_error("mixture: negative weight " + std::to_string(w));
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw state_error("mixture: weights sum to " + std::to_string(total) + ", expected 1");
    for (std::size_t i = 1; i < states.size(); ++i)
        if (states[i].dims != states[0].dims)
            throw shape_error("mixture: mismatched subsystem dimensions");
    ComplexMatrix m(states[0].total_dim());
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t k = 0; k < m.entries().size(); ++k)
            m.entries()[k] += weights[i] * states[i].matrix.entries()[k];
    return {states[0].dims, std::move(m)};
}

inline DensityMatrix random_density(std::vector<int> dims, std::uint64_t seed) {
    const int D = product_of(dims);
    SplitMix64 rng(seed);
    ComplexMatrix g(D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(i, j) = cplx(re, im);
        }
    ComplexMatrix rho(D);
    double tr = 0.0;
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
            cplx s{};
            for (int k = 0; k < D; ++k) s += g(i, k) * std::conj(g(j, k));
            rho(i, j) = s;
            if (i == j) tr += s.real();
        }
    for (cplx& c : rho.entries()) c /= tr;
    return {std::move(dims), std::move(rho)};
}

inline DensityMatrix random_product(const std::vector<int>& dims, std::uint64_t seed) {
    std::vector<DensityMatrix> parts;
    parts.reserve(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i)
        parts.push_back(random_density({dims[i]}, SplitMix64::substream_seed(seed, static_cast<int>(i))));
    return product(parts);
}

inline DensityMatrix random_separable(const std::vector<int>& dims, int terms, std::uint64_t seed) {
    if (terms < 1) throw contract_error("random_separable: terms must be >= 1");
    SplitMix64 weight_rng(SplitMix64::substream_seed(seed, 0));
    std::vector<double> weights(terms);
    double total = 0.0;
    for (double& w : weights) {
        w = weight_rng.exponential();
        total += w;
    }
    for (double& w : weights) w /= total;
    std::vector<DensityMatrix> parts;
    parts.reserve(terms);
    for (int k = 0; k < terms; ++k)
        parts.push_back(random_product(dims, SplitMix64::substream_seed(seed, k + 1)));
    return mixture(parts, weights);
}

inline double purity(const DensityMatrix& rho) {
    const cplx p = trace_product(rho.matrix, rho.matrix);
    if (std::abs(p.imag()) > 1e-12)
        throw numeric_error("purity: imaginary residue " + std::to_string(p.imag()));
    return p.real();
}

// A partition of the parties {1..N} into k >= 2 disjoint nonempty blocks.
// Party indices are 0-based in storage.
struct PartitionSpec {
    std::vector<std::vector<int>> groups;
};

// Block dimensions (product of member dims). Requires each block to be a
// contiguous ascending run of party indices and the blocks to tile 0..N-1
// in order; there is no subsystem-permutation machinery, so anything else
// is unsupported.
inline std::vector<int> block_dims(const PartitionSpec& partition, const std::vector<int>& dims) {
    const int n = static_cast<int>(dims.size());
    if (partition.groups.size() < 2)
        throw config_error("partition: need at least 2 blocks, got " +
                           std::to_string(partition.groups.size()));
    int expected = 0;
    std::vector<int> out;
    out.reserve(partition.groups.size());
    for (const std::vector<int>& block : partition.groups) {
        if (block.empty()) throw config_error("partition: empty block");
        int dim = 1;
        for (int party : block) {
            if (party < 0 || party >= n)
                throw config_error("partition: party index " + std::to_string(party + 1) +
                                   " out of range for " + std::to_string(n) + " parties");
            if (party != expected)
                throw config_error("partition: unsupported (blocks must be adjacent parties "
                                   "tiling the system in order); got party " +
                                   std::to_string(party + 1) + " where party " +
                                   std::to_string(expected + 1) + " was expected");
            dim *= dims[party];
            ++expected;
        }
        out.push_back(dim);
    }
    if (expected != n)
        throw config_error("partition: blocks cover " + std::to_string(expected) + " of " +
                           std::to_string(n) + " parties");
    return out;
}

}  // namespace mumsep
