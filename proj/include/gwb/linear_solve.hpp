#pragma once

/**
 * @file linear_solve.hpp
 * @brief Exact Gauss-Jordan elimination over the rationals for sparse,
 * possibly over- or under-determined systems.
 *
 * Rows are reduced to reduced row echelon form. A variable counts as
 * determined when it is a pivot whose row has no entries in free columns.
 * Pivots are chosen per column by the smallest numerator+denominator bit
 * length among the candidate rows.
 */

#include "gwb/rational.hpp"

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gwb {

struct SparseRow {
    std::map<std::size_t, ExactRational> coeffs;
    ExactRational rhs;
};

struct SolveResult {
    std::vector<std::optional<ExactRational>> values;
    std::size_t rank = 0;

    bool determined(std::size_t j) const { return values[j].has_value(); }
    bool full_rank() const { return rank == values.size(); }
};

class InconsistentSystem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline SolveResult solve_exact(std::vector<SparseRow> rows, std::size_t num_unknowns) {
    for (auto& r : rows)
        std::erase_if(r.coeffs, [](const auto& kv) { return kv.second == 0; });

    std::vector<bool> used(rows.size(), false);
    std::vector<std::optional<std::size_t>> pivot_row(num_unknowns);
    for (std::size_t col = 0; col < num_unknowns; ++col) {
        std::size_t best = rows.size();
        std::size_t best_cost = std::numeric_limits<std::size_t>::max();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (used[r]) continue;
            auto it = rows[r].coeffs.find(col);
            if (it == rows[r].coeffs.end()) continue;
            std::size_t cost = bit_length(it->second);
            if (cost < best_cost) {
                best_cost = cost;
                best = r;
            }
        }
        if (best == rows.size()) continue;
        used[best] = true;
        pivot_row[col] = best;
        SparseRow& p = rows[best];
        const ExactRational inv = 1 / p.coeffs.at(col);
        for (auto& [c, v] : p.coeffs) v *= inv;
        p.rhs *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == best) continue;
            auto it = rows[r].coeffs.find(col);
            if (it == rows[r].coeffs.end()) continue;
            const ExactRational factor = it->second;
            for (const auto& [c, v] : p.coeffs) {
                auto& slot = rows[r].coeffs[c];
                slot -= factor * v;
                if (slot == 0) rows[r].coeffs.erase(c);
            }
            rows[r].rhs -= factor * p.rhs;
        }
    }

    for (std::size_t r = 0; r < rows.size(); ++r)
        if (!used[r] && rows[r].coeffs.empty() && rows[r].rhs != 0)
            throw InconsistentSystem("linear system is inconsistent (0 = " + to_display_string(rows[r].rhs) + ")");

    SolveResult out;
    out.values.resize(num_unknowns);
    for (std::size_t col = 0; col < num_unknowns; ++col) {
        if (!pivot_row[col]) continue;
        ++out.rank;
        const SparseRow& row = rows[*pivot_row[col]];
        if (row.coeffs.size() == 1) out.values[col] = row.rhs;
    }
    return out;
}

}  // namespace gwb
