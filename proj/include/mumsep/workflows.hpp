#pragma once

/*
 * Scan and sweep drivers shared by the CLI and the acceptance suite.
 *
 * Isotropic scan: party 1 measures the complete maximal-efficiency set,
 * party 2 its entrywise transpose (the convention under which the criteria
 * detect every entangled isotropic state; the detection threshold sits at
 * p = 1/(d+1) independent of the efficiency). The threshold estimate is the
 * smallest grid p with a positive verdict; no interpolation.
 *
 * Separable sweep: seeded random fully separable states must never be
 * detected; the largest margin over the sweep is the soundness figure.
 * State k draws from substream k of the sweep seed.
 */

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mumsep/criteria.hpp"
#include "mumsep/errors.hpp"
#include "mumsep/io.hpp"
#include "mumsep/mum.hpp"
#include "mumsep/rng.hpp"
#include "mumsep/states.hpp"

namespace mumsep {

struct ScanRow {
    double p = 0.0;
    double J = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    bool detected = false;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    std::optional<double> first_detected;
};

inline CriterionReport evaluate_theorem(TheoremId theorem, const std::vector<MumSet>& sets,
                                        const DensityMatrix& rho, Strategy strategy) {
    switch (theorem) {
        case TheoremId::T1: return theorem1(sets, rho);
        case TheoremId::T2:
            if (sets.size() != 2) throw config_error("T2 needs exactly 2 sets");
            return theorem2(sets[0], sets[1], rho, strategy);
        case TheoremId::T3:
            if (sets.size() != 2) throw config_error("T3 needs exactly 2 sets");
            return theorem3(sets[0], sets[1], rho, strategy);
        case TheoremId::T4: return theorem45(sets, rho, strategy, TheoremId::T4);
        case TheoremId::T5: return theorem45(sets, rho, strategy, TheoremId::T5);
        case TheoremId::MUB: break;
    }
    throw config_error("MUB baseline is not a set-based evaluator");
}

inline ScanResult scan_isotropic(int d, TheoremId theorem, double p_start, double p_stop,
                                 double p_step, Strategy strategy = Strategy::exact) {
    if (!(p_step > 0.0)) throw contract_error("scan: p-step must be positive");
    if (p_stop < p_start) throw contract_error("scan: p-stop must be >= p-start");
    const MumSet p_set = build_mums(d);
    const MumSet q_set = transpose_mums(p_set);
    const std::vector<MumSet> sets{p_set, q_set};

    ScanResult res;
    const long long steps = std::llround((p_stop - p_start) / p_step);
    for (long long k = 0; k <= steps; ++k) {
        const double p = p_start + static_cast<double>(k) * p_step;
        if (p > p_stop + p_step * 1e-6) break;  // step does not divide the range
        if (p > 1.0 + 1e-12) break;             // beyond the PSD range
        const DensityMatrix rho = isotropic(d, std::min(p, 1.0));
        const CriterionReport r = evaluate_theorem(theorem, sets, rho, strategy);
        res.rows.push_back({p, r.J, r.bound, r.margin, r.detected});
        if (r.detected && !res.first_detected) res.first_detected = p;
    }
    return res;
}

inline std::string scan_to_csv(const ScanResult& res) {
    std::string out = "p,J,bound,margin,detected\n";
    for (const ScanRow& row : res.rows) {
        out += fmt_g12(row.p);
        out += ',';
        out += fmt_g12(row.J);
        out += ',';
        out += fmt_g12(row.bound);
        out += ',';
        out += fmt_g12(row.margin);
        out += ',';
        out += row.detected ? "true" : "false";
        out += '\n';
    }
    return out;
}

// Measurement sets used for sweeps and state evaluation when none are
// supplied explicitly: bipartite runs use (P, P^T), more parties use the
// per-dimension complete sets directly.
inline std::vector<MumSet> default_sets(const std::vector<int>& dims) {
    std::vector<MumSet> sets;
    sets.reserve(dims.size());
    if (dims.size() == 2) {
        sets.push_back(build_mums(dims[0]));
        sets.push_back(transpose_mums(dims[1] == dims[0] ? sets[0] : build_mums(dims[1])));
    } else {
        for (int d : dims) sets.push_back(build_mums(d));
    }
    return sets;
}

struct SweepResult {
    int count = 0;
    double max_margin = -std::numeric_limits<double>::infinity();
    int detections = 0;
};

inline SweepResult sweep_separable(const std::vector<int>& dims, int count, std::uint64_t seed,
                                   TheoremId theorem, Strategy strategy = Strategy::exact,
                                   int terms = 4) {
    if (count < 1) throw contract_error("sweep: count must be >= 1");
    const std::vector<MumSet> sets = default_sets(dims);
    SweepResult res;
    res.count = count;
    for (int k = 0; k < count; ++k) {
        const DensityMatrix rho =
            random_separable(dims, terms, SplitMix64::substream_seed(seed, k));
        const CriterionReport r = evaluate_theorem(theorem, sets, rho, strategy);
        res.max_margin = std::max(res.max_margin, r.margin);
        if (r.detected) ++res.detections;
    }
    return res;
}

}  // namespace mumsep
