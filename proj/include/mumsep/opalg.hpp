#pragma once

/*
 * Dense complex operator algebra.
 *
 * Everything downstream (measurement construction, state factories, the
 * separability criteria) runs on one carrier type: a dim x dim complex
 * matrix stored row-major. Operations are pure functions on immutable
 * values and safe to call concurrently.
 *
 * The Hermitian eigensolver is a cyclic Jacobi iteration with complex
 * Givens rotations; it converges when the off-diagonal Frobenius norm
 * drops below 1e-12 * ||H||_F (or below the caller's absolute tolerance,
 * whichever is smaller). Dimensions in this project stay small, so the
 * quadratic-per-sweep cost is irrelevant and the unconditional stability
 * of Jacobi is what matters.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "mumsep/errors.hpp"

namespace mumsep {

using cplx = std::complex<double>;

// Default gate for "is this operator Hermitian" checks.
inline constexpr double kHermitianTol = 1e-10;

// Relative off-diagonal Frobenius target for the Jacobi eigensolver.
inline constexpr double kJacobiRelTol = 1e-12;

class ComplexMatrix {
public:
    explicit ComplexMatrix(int dim) : dim_(dim), a_(check_dim(dim) * dim, cplx{}) {}

    ComplexMatrix(int dim, std::vector<cplx> entries) : dim_(dim), a_(std::move(entries)) {
        check_dim(dim);
        if (a_.size() != static_cast<std::size_t>(dim) * dim)
            throw shape_error("ComplexMatrix: entry count " + std::to_string(a_.size()) +
                              " does not equal dim^2 for dim " + std::to_string(dim));
    }

    int dim() const { return dim_; }

    cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    const cplx& operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * dim_ + j];
    }

    const std::vector<cplx>& entries() const { return a_; }
    std::vector<cplx>& entries() { return a_; }

private:
    static int check_dim(int dim) {
        if (dim < 1)
            throw dimension_error("ComplexMatrix: dimension must be >= 1, got " +
                                  std::to_string(dim));
        return dim;
    }

    int dim_;
    std::vector<cplx> a_;
};

inline ComplexMatrix identity(int d) {
    ComplexMatrix m(d);
    for (int i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

inline void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.dim() != b.dim())
        throw shape_error(std::string(op) + ": dimension mismatch " + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()));
}

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "operator+");
    ComplexMatrix r(a.dim());
    for (std::size_t k = 0; k < r.entries().size(); ++k)
        r.entries()[k] = a.entries()[k] + b.entries()[k];
    return r;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "operator-");
    ComplexMatrix r(a.dim());
    for (std::size_t k = 0; k < r.entries().size(); ++k)
        r.entries()[k] = a.entries()[k] - b.entries()[k];
    return r;
}

inline ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
    ComplexMatrix r(a.dim());
    for (std::size_t k = 0; k < r.entries().size(); ++k) r.entries()[k] = s * a.entries()[k];
    return r;
}

inline ComplexMatrix operator*(double s, const ComplexMatrix& a) { return cplx(s, 0.0) * a; }

// Full matrix product. Kept for projector checks and test oracles; the hot
// path uses trace_product, which never forms the product.
inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "matmul");
    const int d = a.dim();
    ComplexMatrix r(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (int j = 0; j < d; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

inline cplx trace(const ComplexMatrix& a) {
    cplx t{};
    for (int i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

// Tr(AB) without forming AB.
inline cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "trace_product");
    const int d = a.dim();
    cplx t{};
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t += a(i, j) * b(j, i);
    return t;
}

inline ComplexMatrix dagger(const ComplexMatrix& a) {
    const int d = a.dim();
    ComplexMatrix r(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r(j, i) = std::conj(a(i, j));
    return r;
}

inline ComplexMatrix transpose(const ComplexMatrix& a) {
    const int d = a.dim();
    ComplexMatrix r(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r(j, i) = a(i, j);
    return r;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int da = a.dim(), db = b.dim();
    ComplexMatrix r(da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (int k = 0; k < db; ++k)
                for (int l = 0; l < db; ++l) r(i * db + k, j * db + l) = aij * b(k, l);
        }
    return r;
}

inline ComplexMatrix kron_all(const std::vector<const ComplexMatrix*>& factors) {
    if (factors.empty()) throw shape_error("kron_all: no factors");
    ComplexMatrix r = *factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) r = kron(r, *factors[i]);
    return r;
}

// Rank-one projector v v^dag scaled to unit trace.
inline ComplexMatrix outer(const std::vector<cplx>& v) {
    double nrm2 = 0.0;
    for (const cplx& c : v) nrm2 += std::norm(c);
    if (!(nrm2 > 0.0)) throw state_error("outer: zero vector");
    const int d = static_cast<int>(v.size());
    ComplexMatrix r(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r(i, j) = v[i] * std::conj(v[j]) / nrm2;
    return r;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k)
        m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
    return m;
}

// ||A - A^dag||_max
inline double hermiticity_defect(const ComplexMatrix& a) {
    double m = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = i; j < a.dim(); ++j)
            m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTol) {
    return hermiticity_defect(a) <= tol;
}

inline double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const cplx& c : a.entries()) s += std::norm(c);
    return std::sqrt(s);
}

namespace detail {

inline double off_diagonal_frobenius(const ComplexMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One complex Jacobi rotation zeroing A(p,q). The 2x2 block is first phase-
// reduced to a real symmetric block, then the standard stable tangent
// formula fixes the angle.
inline void jacobi_rotate(ComplexMatrix& a, int p, int q) {
    const cplx apq = a(p, q);
    const double ab = std::abs(apq);
    if (ab == 0.0) return;
    const cplx phase = apq / ab;  // e^{i phi}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    // Zeroing condition for this rotation convention: tan(2x) = 2|apq|/(app-aqq).
    const double theta = (app - aqq) / (2.0 * ab);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const int d = a.dim();

    // Column update: A <- A V with V(p,p)=c, V(q,p)=s e^{-i phi},
    // V(p,q)=-s e^{i phi}, V(q,q)=c.
    for (int k = 0; k < d; ++k) {
        const cplx akp = a(k, p), akq = a(k, q);
        a(k, p) = c * akp + s * std::conj(phase) * akq;
        a(k, q) = -s * phase * akp + c * akq;
    }
    // Row update: A <- V^dag A.
    for (int k = 0; k < d; ++k) {
        const cplx apk = a(p, k), aqk = a(q, k);
        a(p, k) = c * apk + s * phase * aqk;
        a(q, k) = -s * std::conj(phase) * apk + c * aqk;
    }
    a(p, q) = cplx{};
    a(q, p) = cplx{};
    a(p, p) = cplx(a(p, p).real(), 0.0);
    a(q, q) = cplx(a(q, q).real(), 0.0);
}

}  // namespace detail

// Eigenvalues of a Hermitian matrix, ascending. Cyclic Jacobi sweeps; stops
// once the off-diagonal Frobenius norm is below
// min(tol, 1e-12 * ||H||_F), floored at a few ulps of ||H||_F.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h, double tol = 1e-12) {
    if (hermiticity_defect(h) > tol)
        throw contract_error("hermitian_eigenvalues: input is not Hermitian within tolerance");

    const int d = h.dim();
    ComplexMatrix a = h;
    // Symmetrize once so rotations see an exactly Hermitian matrix.
    for (int i = 0; i < d; ++i) {
        a(i, i) = cplx(a(i, i).real(), 0.0);
        for (int j = i + 1; j < d; ++j) {
            const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }

    const double nf = frobenius_norm(a);
    if (nf > 0.0) {
        const double floor_tol = 16.0 * std::numeric_limits<double>::epsilon() * nf;
        const double target = std::max(std::min(tol, kJacobiRelTol * nf), floor_tol);
        const int max_sweeps = 100;
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            if (detail::off_diagonal_frobenius(a) <= target) break;
            for (int p = 0; p < d - 1; ++p)
                for (int q = p + 1; q < d; ++q) detail::jacobi_rotate(a, p, q);
        }
    }

    std::vector<double> eig(d);
    for (int i = 0; i < d; ++i) eig[i] = a(i, i).real();
    std::sort(eig.begin(), eig.end());
    return eig;
}

inline double min_eigenvalue(const ComplexMatrix& h, double tol = 1e-12) {
    return hermitian_eigenvalues(h, tol).front();
}

}  // namespace mumsep
