#pragma once

/*
 * Separability criteria built on sets of mutually unbiased measurements.
 *
 * Every evaluator computes a witness value J from joint outcome
 * probabilities and compares it against a bound that holds for all (fully)
 * separable states; J exceeding the bound certifies entanglement. The
 * bipartite/multipartite evaluators maximize J over one-to-one pairings of
 * outcome indices (an assignment problem per measurement index b); any
 * feasible pairing lower-bounds the true maximum, so every strategy is
 * sound.
 *
 * Conventions:
 *   - all traces must be real; an imaginary residue above 1e-10 raises a
 *     numeric-integrity error.
 *   - detection verdict: margin = J - bound > tol_detect (default 1e-9);
 *     |margin| <= tol_detect is inconclusive at tolerance.
 *   - sets with mismatched M are truncated to the smallest M and the report
 *     is flagged, keeping the bounds valid.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mumsep/assignment.hpp"
#include "mumsep/errors.hpp"
#include "mumsep/mum.hpp"
#include "mumsep/opalg.hpp"
#include "mumsep/states.hpp"

namespace mumsep {

inline constexpr double kDetectTol = 1e-9;
inline constexpr double kTraceImagTol = 1e-10;

// Exact multidimensional maximization is attempted only while the nominal
// candidate count prod_i d_i!/(d_i - size)! stays within this budget;
// beyond it the evaluator falls back to greedy and flags the report.
inline constexpr double kSelectionBudget = 1e6;

enum class TheoremId { T1, T2, T3, T4, T5, MUB };

inline const char* to_string(TheoremId t) {
    switch (t) {
        case TheoremId::T1: return "T1";
        case TheoremId::T2: return "T2";
        case TheoremId::T3: return "T3";
        case TheoremId::T4: return "T4";
        case TheoremId::T5: return "T5";
        case TheoremId::MUB: return "MUB";
    }
    return "?";
}

inline TheoremId theorem_from_string(const std::string& s) {
    if (s == "T1") return TheoremId::T1;
    if (s == "T2") return TheoremId::T2;
    if (s == "T3") return TheoremId::T3;
    if (s == "T4") return TheoremId::T4;
    if (s == "T5") return TheoremId::T5;
    if (s == "MUB") return TheoremId::MUB;
    throw config_error("unknown theorem '" + s + "' (expected T1|T2|T3|T4|T5|MUB)");
}

// The maximizing choice of outcome indices: for each measurement index b
// and each party, an ordered list of operator indices, paired slot-wise
// across parties. Indices are 0-based in storage, 1-based in reports.
struct Selection {
    std::vector<std::vector<std::vector<int>>> per_measurement;  // [b][party][slot]
};

struct CriterionReport {
    TheoremId theorem = TheoremId::T1;
    double J = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    std::optional<double> bound2;   // companion bound (T5 reports carry the T4 bound)
    std::optional<bool> detected2;  // verdict against bound2
    bool detected = false;
    Strategy strategy = Strategy::exact;
    std::optional<Selection> selection;  // nullopt means the full diagonal pairing
    std::vector<int> dims;
    int M = 0;
    std::vector<double> kappas;
    double tol_detect = kDetectTol;
    bool fallback_used = false;
    bool truncated = false;

    bool inconclusive() const { return std::abs(margin) <= tol_detect; }
};

namespace detail {

inline double real_trace(const cplx& value, const char* where) {
    if (std::abs(value.imag()) > kTraceImagTol)
        throw numeric_error(std::string(where) + ": imaginary residue " +
                            std::to_string(value.imag()) + " exceeds " +
                            std::to_string(kTraceImagTol));
    return value.real();
}

inline void finish_verdict(CriterionReport& r) {
    r.margin = r.J - r.bound;
    r.detected = r.margin > r.tol_detect;
}

}  // namespace detail

// Index of coincidence of one measurement on a state: the sum of squared
// outcome probabilities sum_n [Tr(P_n rho)]^2.
inline double coincidence(const std::vector<ComplexMatrix>& measurement, const DensityMatrix& rho) {
    double c = 0.0;
    for (const ComplexMatrix& p : measurement) {
        if (p.dim() != rho.total_dim())
            throw shape_error("coincidence: operator dimension " + std::to_string(p.dim()) +
                              " vs state dimension " + std::to_string(rho.total_dim()));
        const double prob = detail::real_trace(trace_product(p, rho.matrix), "coincidence");
        c += prob * prob;
    }
    return c;
}

// Upper bound on the summed coincidence of M mutually unbiased measurements
// of efficiency kappa in dimension d:
//   (M-1)/d + (1 - kappa + (kappa d - 1) purity) / (d - 1).
// Complete sets (M = d+1) attain it with equality; pure states then give
// exactly 1 + kappa.
inline double coincidence_bound(int M, int d, double kappa, double purity) {
    if (M < 1) throw contract_error("coincidence_bound: M must be >= 1");
    if (d < 2) throw dimension_error("coincidence_bound: d must be >= 2");
    if (kappa <= 1.0 / d || kappa > 1.0 + 1e-9)
        throw contract_error("coincidence_bound: kappa = " + std::to_string(kappa) +
                             " outside (1/d, 1]");
    if (purity < 1.0 / d - 1e-9 || purity > 1.0 + 1e-9)
        throw contract_error("coincidence_bound: purity = " + std::to_string(purity) +
                             " outside [1/d, 1]");
    return (M - 1.0) / d + (1.0 - kappa + (kappa * d - 1.0) * purity) / (d - 1.0);
}

struct MubIndexResult {
    double value = 0.0;  // sum over bases and vectors of <b|x<b| rho |b>x|b>
    double bound = 0.0;  // 1 + (m-1)/d
};

// Baseline witness from m mutually unbiased bases on a (d, d) state.
inline MubIndexResult mub_index(const std::vector<std::vector<std::vector<cplx>>>& bases,
                                const DensityMatrix& rho) {
    if (bases.empty()) throw config_error("mub_index: no bases");
    const int d = static_cast<int>(bases[0].size());
    if (rho.dims != std::vector<int>{d, d})
        throw config_error("mub_index: state must live on (d, d) with d = " + std::to_string(d));
    MubIndexResult res;
    const int D = d * d;
    std::vector<cplx> w(D);
    for (const auto& basis : bases)
        for (const auto& v : basis) {
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) w[i * d + j] = v[i] * v[j];
            cplx q{};
            for (int r = 0; r < D; ++r)
                for (int s = 0; s < D; ++s) q += std::conj(w[r]) * rho.matrix(r, s) * w[s];
            res.value += detail::real_trace(q, "mub_index");
        }
    res.bound = 1.0 + (static_cast<double>(bases.size()) - 1.0) / d;
    return res;
}

namespace detail {

inline int common_measurement_count(const std::vector<const MumSet*>& sets, bool& truncated) {
    int m = std::numeric_limits<int>::max();
    int mx = 0;
    for (const MumSet* s : sets) {
        m = std::min(m, s->M);
        mx = std::max(mx, s->M);
    }
    truncated = m != mx;
    return m;
}

}  // namespace detail

// Witness for m same-dimension parties measured with the diagonal pairing:
//   J = sum_b sum_n Tr[(P_{1,n}^(b) x ... x P_{m,n}^(b)) rho],
// bounded for fully separable states by (M-1)/d + mean(kappa).
inline CriterionReport theorem1(const std::vector<MumSet>& sets, const DensityMatrix& rho,
                                double tol_detect = kDetectTol) {
    const int m = static_cast<int>(sets.size());
    if (m < 2) throw config_error("theorem1: need at least 2 measurement sets");
    if (static_cast<int>(rho.dims.size()) != m)
        throw config_error("theorem1: state has " + std::to_string(rho.dims.size()) +
                           " parties but " + std::to_string(m) + " sets were given");
    const int d = sets[0].d;
    for (int i = 0; i < m; ++i) {
        if (sets[i].d != d)
            throw config_error("theorem1: all sets must share one dimension");
        if (rho.dims[i] != d)
            throw config_error("theorem1: party " + std::to_string(i + 1) + " has dimension " +
                               std::to_string(rho.dims[i]) + ", sets have " + std::to_string(d));
    }
    std::vector<const MumSet*> ptrs;
    for (const MumSet& s : sets) ptrs.push_back(&s);
    CriterionReport r;
    r.theorem = TheoremId::T1;
    r.strategy = Strategy::diagonal;  // the witness pairs equal indices, no maximization
    r.tol_detect = tol_detect;
    r.M = detail::common_measurement_count(ptrs, r.truncated);
    r.dims = rho.dims;
    double kappa_sum = 0.0;
    for (const MumSet& s : sets) {
        r.kappas.push_back(s.kappa);
        kappa_sum += s.kappa;
    }

    for (int b = 0; b < r.M; ++b)
        for (int n = 0; n < d; ++n) {
            std::vector<const ComplexMatrix*> factors;
            factors.reserve(m);
            for (const MumSet& s : sets) factors.push_back(&s.operators[b][n]);
            const ComplexMatrix joint = kron_all(factors);
            r.J += detail::real_trace(trace_product(joint, rho.matrix), "theorem1");
        }

    r.bound = (r.M - 1.0) / d + kappa_sum / m;
    r.selection.reset();  // full diagonal
    detail::finish_verdict(r);
    return r;
}

namespace detail {

struct BipartiteEval {
    double J = 0.0;
    Selection selection;
    int M = 0;
    bool truncated = false;
};

inline BipartiteEval bipartite_core(const MumSet& p, const MumSet& q, const DensityMatrix& rho,
                                    Strategy strategy) {
    if (rho.dims.size() != 2 || rho.dims[0] != p.d || rho.dims[1] != q.d)
        throw config_error("bipartite criterion: state dims do not match the two sets (" +
                           std::to_string(p.d) + ", " + std::to_string(q.d) + ")");
    BipartiteEval ev;
    std::vector<const MumSet*> ptrs{&p, &q};
    ev.M = common_measurement_count(ptrs, ev.truncated);
    const int d = std::min(p.d, q.d);
    for (int b = 0; b < ev.M; ++b) {
        WeightMatrix w(p.d, q.d);
        for (int n = 0; n < p.d; ++n)
            for (int n2 = 0; n2 < q.d; ++n2)
                w.at(n, n2) = real_trace(
                    trace_product(kron(p.operators[b][n], q.operators[b][n2]), rho.matrix),
                    "bipartite criterion");
        const AssignmentResult best = assignment_max(w, d, strategy);
        ev.J += best.value;
        std::vector<int> rows, cols;
        rows.reserve(d);
        cols.reserve(d);
        for (const auto& [i, j] : best.matching) {
            rows.push_back(i);
            cols.push_back(j);
        }
        ev.selection.per_measurement.push_back({std::move(rows), std::move(cols)});
    }
    return ev;
}

inline void fill_bipartite_report(CriterionReport& r, const MumSet& p, const MumSet& q,
                                  BipartiteEval&& ev, Strategy strategy, double tol_detect) {
    r.strategy = strategy;
    r.tol_detect = tol_detect;
    r.J = ev.J;
    r.M = ev.M;
    r.truncated = ev.truncated;
    r.selection = std::move(ev.selection);
    r.dims = {p.d, q.d};
    r.kappas = {p.kappa, q.kappa};
}

}  // namespace detail

// Bipartite witness with the arithmetic-mean bound
//   J <= [(M-1)(1/d1 + 1/d2) + kappa1 + kappa2] / 2.
inline CriterionReport theorem2(const MumSet& p, const MumSet& q, const DensityMatrix& rho,
                                Strategy strategy = Strategy::exact,
                                double tol_detect = kDetectTol) {
    CriterionReport r;
    r.theorem = TheoremId::T2;
    detail::fill_bipartite_report(r, p, q, detail::bipartite_core(p, q, rho, strategy), strategy,
                                  tol_detect);
    r.bound = 0.5 * ((r.M - 1.0) * (1.0 / p.d + 1.0 / q.d) + p.kappa + q.kappa);
    detail::finish_verdict(r);
    return r;
}

// Same witness with the geometric-mean bound
//   J <= sqrt((M-1)/d1 + kappa1) * sqrt((M-1)/d2 + kappa2),
// never above the arithmetic-mean bound.
inline CriterionReport theorem3(const MumSet& p, const MumSet& q, const DensityMatrix& rho,
                                Strategy strategy = Strategy::exact,
                                double tol_detect = kDetectTol) {
    CriterionReport r;
    r.theorem = TheoremId::T3;
    detail::fill_bipartite_report(r, p, q, detail::bipartite_core(p, q, rho, strategy), strategy,
                                  tol_detect);
    r.bound = std::sqrt((r.M - 1.0) / p.d + p.kappa) * std::sqrt((r.M - 1.0) / q.d + q.kappa);
    detail::finish_verdict(r);
    return r;
}

namespace detail {

// Row-major tensor of joint outcome probabilities for one measurement index.
struct WeightTensor {
    std::vector<int> dims;
    std::vector<double> v;

    double at(const std::vector<int>& idx) const {
        std::size_t flat = 0;
        for (std::size_t i = 0; i < dims.size(); ++i) flat = flat * dims[i] + idx[i];
        return v[flat];
    }
};

struct TensorPick {
    double value = 0.0;
    std::vector<std::vector<int>> lists;  // [party][slot]
    bool fallback = false;
};

inline double selection_value(const WeightTensor& w, const std::vector<std::vector<int>>& lists,
                              int size) {
    double total = 0.0;
    std::vector<int> idx(lists.size());
    for (int slot = 0; slot < size; ++slot) {
        for (std::size_t p = 0; p < lists.size(); ++p) idx[p] = lists[p][slot];
        total += w.at(idx);
    }
    return total;
}

inline TensorPick tensor_greedy(const WeightTensor& w, int size) {
    const int m = static_cast<int>(w.dims.size());
    std::vector<std::size_t> order(w.v.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (w.v[a] != w.v[b]) return w.v[a] > w.v[b];
        return a < b;  // lexicographic tuple tie-break
    });
    std::vector<std::vector<char>> used(m);
    for (int p = 0; p < m; ++p) used[p].assign(w.dims[p], 0);
    TensorPick pick;
    pick.lists.assign(m, {});
    std::vector<int> idx(m);
    for (std::size_t flat : order) {
        if (static_cast<int>(pick.lists[0].size()) == size) break;
        std::size_t rest = flat;
        for (int p = m - 1; p >= 0; --p) {
            idx[p] = static_cast<int>(rest % w.dims[p]);
            rest /= w.dims[p];
        }
        bool free_slot = true;
        for (int p = 0; p < m; ++p)
            if (used[p][idx[p]]) { free_slot = false; break; }
        if (!free_slot) continue;
        for (int p = 0; p < m; ++p) {
            used[p][idx[p]] = 1;
            pick.lists[p].push_back(idx[p]);
        }
        pick.value += w.v[flat];
    }
    return pick;
}

inline TensorPick tensor_diagonal(const WeightTensor& w, int size) {
    const int m = static_cast<int>(w.dims.size());
    const int d0 = w.dims[0];
    for (int p = 1; p < m; ++p)
        if (w.dims[p] != d0)
            throw config_error("diagonal strategy requires equal dimensions across parties");
    std::vector<int> idx(d0);
    for (int i = 0; i < d0; ++i) idx[i] = i;
    std::vector<int> tuple(m);
    auto diag_value = [&](int n) {
        std::fill(tuple.begin(), tuple.end(), n);
        return w.at(tuple);
    };
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return diag_value(a) > diag_value(b); });
    idx.resize(size);
    std::sort(idx.begin(), idx.end());
    TensorPick pick;
    pick.lists.assign(m, {});
    for (int n : idx) {
        for (int p = 0; p < m; ++p) pick.lists[p].push_back(n);
        pick.value += diag_value(n);
    }
    return pick;
}

// Exhaustive maximization over per-party ordered injections. Slot order is
// normalized so party 1's list is ascending (permuting slots jointly does
// not change the summed value), which prunes a factor of size!.
inline TensorPick tensor_exact(const WeightTensor& w, int size) {
    const int m = static_cast<int>(w.dims.size());
    TensorPick best;
    best.value = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<int>> cur(m);
    std::vector<std::vector<char>> used(m);
    for (int p = 0; p < m; ++p) {
        cur[p].assign(size, 0);
        used[p].assign(w.dims[p], 0);
    }

    // Depth-first over parties; party 0 runs over ascending combinations,
    // the rest over all arrangements.
    auto evaluate = [&]() {
        const double val = selection_value(w, cur, size);
        if (val > best.value) {
            best.value = val;
            best.lists = cur;
        }
    };

    std::function<void(int, int)> fill_party = [&](int party, int slot) {
        if (party == m) {
            evaluate();
            return;
        }
        if (slot == size) {
            fill_party(party + 1, 0);
            return;
        }
        const int start = (party == 0 && slot > 0) ? cur[0][slot - 1] + 1 : 0;
        for (int n = start; n < w.dims[party]; ++n) {
            if (used[party][n]) continue;
            used[party][n] = 1;
            cur[party][slot] = n;
            fill_party(party, slot + 1);
            used[party][n] = 0;
        }
    };
    fill_party(0, 0);
    return best;
}

inline double nominal_candidate_count(const std::vector<int>& dims, int size) {
    double count = 1.0;
    for (int d : dims)
        for (int k = 0; k < size; ++k) count *= static_cast<double>(d - k);
    return count;
}

}  // namespace detail

// Multipartite witness over parties of dimensions d_1..d_m, maximized over
// size-d one-to-one selections (d = min d_i). Reports both separability
// bounds:
//   T4 (arithmetic mean):  J <= (1/m) sum_i [(M-1)/d_i + kappa_i]
//   T5 (best pair of geometric means):
//       J <= min_{i != j} sqrt((M-1)/d_i + kappa_i) sqrt((M-1)/d_j + kappa_j)
// `which` picks the primary bound of the report; a T5 report carries the T4
// bound as bound2. Two parties route through the bipartite assignment
// solver; three or more enumerate selections while the nominal candidate
// count stays within `budget`, then fall back to greedy with a flag.
inline CriterionReport theorem45(const std::vector<MumSet>& sets, const DensityMatrix& rho,
                                 Strategy strategy = Strategy::exact,
                                 TheoremId which = TheoremId::T4,
                                 double tol_detect = kDetectTol,
                                 double budget = kSelectionBudget) {
    if (which != TheoremId::T4 && which != TheoremId::T5)
        throw config_error("theorem45: primary bound must be T4 or T5");
    const int m = static_cast<int>(sets.size());
    if (m < 2) throw config_error("theorem45: need at least 2 measurement sets");
    if (static_cast<int>(rho.dims.size()) != m)
        throw config_error("theorem45: state has " + std::to_string(rho.dims.size()) +
                           " parties but " + std::to_string(m) + " sets were given");
    for (int i = 0; i < m; ++i)
        if (sets[i].d != rho.dims[i])
            throw config_error("theorem45: party " + std::to_string(i + 1) + " has dimension " +
                               std::to_string(rho.dims[i]) + " but its set has " +
                               std::to_string(sets[i].d));

    CriterionReport r;
    r.theorem = which;
    r.strategy = strategy;
    r.tol_detect = tol_detect;
    r.dims = rho.dims;
    for (const MumSet& s : sets) r.kappas.push_back(s.kappa);
    std::vector<const MumSet*> ptrs;
    for (const MumSet& s : sets) ptrs.push_back(&s);
    r.M = detail::common_measurement_count(ptrs, r.truncated);
    const int d = *std::min_element(rho.dims.begin(), rho.dims.end());

    if (m == 2) {
        detail::BipartiteEval ev = detail::bipartite_core(sets[0], sets[1], rho, strategy);
        r.J = ev.J;
        r.selection = std::move(ev.selection);
    } else {
        const bool within_budget = detail::nominal_candidate_count(rho.dims, d) <= budget;
        Selection sel;
        for (int b = 0; b < r.M; ++b) {
            detail::WeightTensor w;
            w.dims = rho.dims;
            std::size_t total = 1;
            for (int di : w.dims) total *= static_cast<std::size_t>(di);
            w.v.resize(total);
            std::vector<int> idx(m, 0);
            for (std::size_t flat = 0; flat < total; ++flat) {
                std::size_t rest = flat;
                for (int p = m - 1; p >= 0; --p) {
                    idx[p] = static_cast<int>(rest % w.dims[p]);
                    rest /= w.dims[p];
                }
                std::vector<const ComplexMatrix*> factors;
                factors.reserve(m);
                for (int p = 0; p < m; ++p) factors.push_back(&sets[p].operators[b][idx[p]]);
                w.v[flat] = detail::real_trace(trace_product(kron_all(factors), rho.matrix),
                                               "theorem45");
            }
            detail::TensorPick pick;
            switch (strategy) {
                case Strategy::diagonal: pick = detail::tensor_diagonal(w, d); break;
                case Strategy::greedy: pick = detail::tensor_greedy(w, d); break;
                case Strategy::exact:
                    if (within_budget) {
                        pick = detail::tensor_exact(w, d);
                    } else {
                        pick = detail::tensor_greedy(w, d);
                        r.fallback_used = true;
                    }
                    break;
            }
            r.J += pick.value;
            sel.per_measurement.push_back(std::move(pick.lists));
        }
        r.selection = std::move(sel);
    }

    double bound4 = 0.0;
    for (int i = 0; i < m; ++i) bound4 += (r.M - 1.0) / rho.dims[i] + sets[i].kappa;
    bound4 /= m;
    double bound5 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            bound5 = std::min(bound5,
                              std::sqrt((r.M - 1.0) / rho.dims[i] + sets[i].kappa) *
                                  std::sqrt((r.M - 1.0) / rho.dims[j] + sets[j].kappa));

    if (which == TheoremId::T4) {
        r.bound = bound4;
    } else {
        r.bound = bound5;
        r.bound2 = bound4;
        r.detected2 = (r.J - bound4) > tol_detect;
    }
    detail::finish_verdict(r);
    return r;
}

// k-nonseparability with respect to a fixed partition into blocks of
// adjacent parties: the state is reinterpreted over the block dimensions
// (no matrix data changes) and handed to the multipartite evaluator. A
// detection certifies that the state is k-nonseparable for this partition.
inline CriterionReport k_nonsep_check(const DensityMatrix& rho, const PartitionSpec& partition,
                                      const std::vector<MumSet>& sets,
                                      Strategy strategy = Strategy::exact,
                                      TheoremId which = TheoremId::T4,
                                      double tol_detect = kDetectTol) {
    const std::vector<int> bdims = block_dims(partition, rho.dims);
    if (bdims.size() != sets.size())
        throw config_error("k_nonsep_check: " + std::to_string(bdims.size()) + " blocks but " +
                           std::to_string(sets.size()) + " sets");
    for (std::size_t i = 0; i < bdims.size(); ++i)
        if (sets[i].d != bdims[i])
            throw config_error("k_nonsep_check: block " + std::to_string(i + 1) +
                               " has dimension " + std::to_string(bdims[i]) +
                               " but its set has " + std::to_string(sets[i].d));
    const DensityMatrix reshaped{bdims, rho.matrix};
    return theorem45(sets, reshaped, strategy, which, tol_detect);
}

}  // namespace mumsep
