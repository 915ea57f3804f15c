#pragma once

/*
 * Maximum-weight assignment of a fixed number of (row, column) pairs.
 *
 * The exact strategy pads the weight matrix to a square and runs the
 * O(n^3) Hungarian algorithm with potentials. Padding: with r rows, c
 * columns and a requested size s, the square has n = r + c - s; dummy rows
 * and columns carry weight 0 against real indices and a large negative
 * weight against each other, which forces exactly s real-real pairs in any
 * optimal perfect matching.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mumsep/errors.hpp"

namespace mumsep {

struct WeightMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> w;  // row-major

    WeightMatrix() = default;
    WeightMatrix(int r, int c) : rows(r), cols(c), w(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int i, int j) { return w[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return w[static_cast<std::size_t>(i) * cols + j]; }
};

enum class Strategy { exact, greedy, diagonal };

inline const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::exact: return "exact";
        case Strategy::greedy: return "greedy";
        case Strategy::diagonal: return "diagonal";
    }
    return "?";
}

inline Strategy strategy_from_string(const std::string& s) {
    if (s == "exact") return Strategy::exact;
    if (s == "greedy") return Strategy::greedy;
    if (s == "diagonal") return Strategy::diagonal;
    throw config_error("unknown strategy '" + s + "' (expected exact|greedy|diagonal)");
}

struct AssignmentResult {
    double value = 0.0;
    std::vector<std::pair<int, int>> matching;  // (row, col), sorted by row
};

namespace detail {

// Classic Hungarian algorithm with row/column potentials on an n x n cost
// matrix (minimization). Returns col_of_row.
inline std::vector<int> hungarian_min(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);  // p[j]: row matched to column j (1-based)
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> col_of_row(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] >= 1) col_of_row[p[j] - 1] = j - 1;
    return col_of_row;
}

}  // namespace detail

// Maximum total weight over one-to-one pairings of `size` row indices with
// `size` column indices.
//   exact    — Hungarian on the padded square; true maximum.
//   greedy   — repeatedly take the largest remaining entry with unused row
//              and column; deterministic tie-break by (row, col).
//   diagonal — square matrices only; pairs n with n and keeps the `size`
//              largest diagonal entries (the literal shared-index reading).
// Every strategy returns a feasible pairing, so each lower-bounds the true
// maximum.
inline AssignmentResult assignment_max(const WeightMatrix& w, int size, Strategy strategy) {
    if (size < 1 || size > std::min(w.rows, w.cols))
        throw contract_error("assignment_max: size " + std::to_string(size) +
                             " not in [1, min(rows, cols)]");
    AssignmentResult res;

    if (strategy == Strategy::diagonal) {
        if (w.rows != w.cols)
            throw config_error("assignment_max: diagonal strategy requires a square matrix, got " +
                               std::to_string(w.rows) + "x" + std::to_string(w.cols));
        std::vector<int> idx(w.rows);
        for (int i = 0; i < w.rows; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](int a, int b) { return w.at(a, a) > w.at(b, b); });
        idx.resize(size);
        std::sort(idx.begin(), idx.end());
        for (int i : idx) {
            res.matching.emplace_back(i, i);
            res.value += w.at(i, i);
        }
        return res;
    }

    if (strategy == Strategy::greedy) {
        struct Entry { double v; int i, j; };
        std::vector<Entry> entries;
        entries.reserve(static_cast<std::size_t>(w.rows) * w.cols);
        for (int i = 0; i < w.rows; ++i)
            for (int j = 0; j < w.cols; ++j) entries.push_back({w.at(i, j), i, j});
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.v != b.v) return a.v > b.v;
            if (a.i != b.i) return a.i < b.i;
            return a.j < b.j;
        });
        std::vector<char> row_used(w.rows, 0), col_used(w.cols, 0);
        for (const Entry& e : entries) {
            if (static_cast<int>(res.matching.size()) == size) break;
            if (row_used[e.i] || col_used[e.j]) continue;
            row_used[e.i] = 1;
            col_used[e.j] = 1;
            res.matching.emplace_back(e.i, e.j);
        }
        std::sort(res.matching.begin(), res.matching.end());
        res.value = 0.0;
        for (const auto& [i, j] : res.matching) res.value += w.at(i, j);
        return res;
    }

    // exact
    const int n = w.rows + w.cols - size;
    double max_abs = 0.0;
    for (double x : w.w) max_abs = std::max(max_abs, std::abs(x));
    const double forbid = (2.0 * max_abs + 1.0) * (n + 1);  // dummy-dummy penalty
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i < w.rows && j < w.cols) cost[i][j] = -w.at(i, j);
            else if (i >= w.rows && j >= w.cols) cost[i][j] = forbid;
            else cost[i][j] = 0.0;
        }
    const std::vector<int> col_of_row = detail::hungarian_min(cost);
    for (int i = 0; i < w.rows; ++i) {
        const int j = col_of_row[i];
        if (j >= 0 && j < w.cols) res.matching.emplace_back(i, j);
    }
    std::sort(res.matching.begin(), res.matching.end());
    res.value = 0.0;
    for (const auto& [i, j] : res.matching) res.value += w.at(i, j);
    return res;
}

}  // namespace mumsep
