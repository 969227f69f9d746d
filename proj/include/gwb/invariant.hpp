#pragma once

/**
 * @file invariant.hpp
 * @brief Invariant keys and their reduction by the genus-0 axioms.
 *
 * A raw query (geometry, beta, multiset of basis classes) is reduced by
 * effectivity, grading, the fundamental class axiom and the divisor axiom
 * either to a known number or to a canonical key times a nonzero multiplier.
 * Canonical keys have beta nonzero and effective, at least three insertions,
 * all of codimension >= 2, and satisfy the grading condition.
 */

#include "gwb/geometry.hpp"
#include "gwb/rational.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gwb {

/// Multiset of basis classes as a count per flat basis index.
using Counts = std::vector<std::uint16_t>;

using Trace = std::vector<std::string>;

inline void note(Trace* trace, std::string line) {
    if (trace) trace->push_back(std::move(line));
}

inline Counts make_counts(const Geometry& g, std::span<const BasisIndex> classes) {
    Counts c(static_cast<std::size_t>(g.basis_size()), 0);
    for (BasisIndex b : classes) {
        require_valid(g, b);
        ++c[static_cast<std::size_t>(flat_index(g, b))];
    }
    return c;
}

inline int count_total(const Counts& c) { return std::accumulate(c.begin(), c.end(), 0); }

inline int codim_total(const Geometry& g, const Counts& c) {
    int s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * basis_at(g, static_cast<int>(i)).codim();
    return s;
}

struct InvariantKey {
    Geometry geom;
    CurveClass beta;
    Counts counts;

    int num_points() const { return count_total(counts); }

    /// Sorted by the basis total order.
    std::vector<BasisIndex> classes() const {
        std::vector<BasisIndex> out;
        for (std::size_t i = 0; i < counts.size(); ++i)
            out.insert(out.end(), counts[i], basis_at(geom, static_cast<int>(i)));
        return out;
    }

    friend bool operator==(const InvariantKey&, const InvariantKey&) = default;
    friend auto operator<=>(const InvariantKey&, const InvariantKey&) = default;
};

inline InvariantKey make_key(const Geometry& g, CurveClass beta, std::span<const BasisIndex> classes) {
    return {g, beta, make_counts(g, classes)};
}

struct InvariantKeyHash {
    std::size_t operator()(const InvariantKey& k) const noexcept {
        std::size_t h = static_cast<std::size_t>(k.geom.n()) * 2 + (k.geom.is_blowup() ? 1 : 0);
        auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        mix(static_cast<std::size_t>(k.beta.d + 1024));
        mix(static_cast<std::size_t>(k.beta.e + 1024));
        for (auto c : k.counts) mix(c);
        return h;
    }
};

inline std::string to_string(const InvariantKey& k) {
    std::string out = "<";
    bool first = true;
    for (BasisIndex b : k.classes()) {
        if (!first) out += ",";
        out += to_string(b);
        first = false;
    }
    out += ">_" + to_string(k.beta) + " on " + to_string(k.geom.space()) + " n=" + std::to_string(k.geom.n());
    return out;
}

/// Either a number, or multiplier * (canonical invariant).
struct EvalResult {
    ExactRational value;  // the number itself, or the multiplier
    std::optional<InvariantKey> key;

    static EvalResult known(ExactRational v) { return {std::move(v), std::nullopt}; }
    static EvalResult canonical(InvariantKey k, ExactRational m) { return {std::move(m), std::move(k)}; }

    bool is_value() const { return !key.has_value(); }
};

inline bool is_canonical(const InvariantKey& k) {
    const Geometry& g = k.geom;
    if (k.beta.is_zero() || !is_effective(g, k.beta)) return false;
    const int num = k.num_points();
    if (num < 3) return false;
    for (std::size_t i = 0; i < k.counts.size(); ++i)
        if (k.counts[i] && basis_at(g, static_cast<int>(i)).codim() < 2) return false;
    return codim_total(g, k.counts) == vdim(g, k.beta, num);
}

/// deg(a.b.c)
inline ExactRational classical_triple(const Geometry& g, BasisIndex a, BasisIndex b, BasisIndex c) {
    auto ab = basis_product(g, a, b);
    if (!ab) return 0;
    auto abc = basis_product(g, ab->index, c);
    if (!abc || abc->index != point_class(g)) return 0;
    return ab->sign * abc->sign;
}

/// Three-point invariants with a divisor insertion, seeded directly:
///   <pt, pt, H>_{H'} = 1,
///   <E_{n-1}, E_{n-1}, E>_{E'} = -1,
///   <a, b, c>_{H'-E'} = 1 when the codimensions add up to n+2,
/// and zero otherwise. Symmetric in a, b, c.
inline ExactRational initial_three_point(const Geometry& g, BasisIndex a, BasisIndex b, BasisIndex c,
                                         CurveClass beta) {
    const int n = g.n();
    std::array<BasisIndex, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    if (beta == CurveClass{1, 0}) {
        std::array<BasisIndex, 3> want{BasisIndex::H(1), BasisIndex::H(n), BasisIndex::H(n)};
        return t == want ? 1 : 0;
    }
    if (!g.is_blowup()) return 0;
    if (beta == CurveClass{0, -1}) {
        std::array<BasisIndex, 3> want{BasisIndex::E(1), BasisIndex::E(n - 1), BasisIndex::E(n - 1)};
        std::sort(want.begin(), want.end());
        return t == want ? -1 : 0;
    }
    if (beta == CurveClass{1, 1}) return a.codim() + b.codim() + c.codim() == n + 2 ? 1 : 0;
    return 0;
}

inline EvalResult canonicalize(const Geometry& g, CurveClass beta, Counts counts, Trace* trace = nullptr);

/// Raises a query with fewer than three insertions to three by adding a
/// divisor D with D.beta != 0 and dividing by D.beta.
inline EvalResult lift_small_N(const Geometry& g, CurveClass beta, Counts counts, Trace* trace = nullptr) {
    if (beta.is_zero() || !is_effective(g, beta))
        throw std::logic_error("lift_small_N needs a nonzero effective class");
    if (count_total(counts) >= 3) throw std::logic_error("lift_small_N needs fewer than three insertions");
    if (codim_total(g, counts) != vdim(g, beta, count_total(counts))) return EvalResult::known(0);
    const BasisIndex divisor = beta.d != 0 ? BasisIndex::H(1) : BasisIndex::E(1);
    const int factor = curve_pairing(g, divisor, beta);
    if (factor == 0) throw std::logic_error("no divisor pairs nonzero with " + to_string(beta));
    note(trace, "lift: insert " + to_string(divisor) + ", divide by " + std::to_string(factor));
    ++counts[static_cast<std::size_t>(flat_index(g, divisor))];
    EvalResult r = canonicalize(g, beta, std::move(counts), trace);
    r.value /= factor;
    return r;
}

inline EvalResult canonicalize(const Geometry& g, CurveClass beta, Counts counts, Trace* trace) {
    if (counts.size() != static_cast<std::size_t>(g.basis_size()))
        throw std::invalid_argument("count vector does not match the basis size");
    if (!is_effective(g, beta)) {
        note(trace, "effectivity: " + to_string(beta) + " is not effective, value 0");
        return EvalResult::known(0);
    }
    int num = count_total(counts);
    if (codim_total(g, counts) != vdim(g, beta, num)) {
        note(trace, "grading: codimension sum " + std::to_string(codim_total(g, counts)) + " != vdim " +
                        std::to_string(vdim(g, beta, num)) + ", value 0");
        return EvalResult::known(0);
    }
    auto triple = [&] {
        std::vector<BasisIndex> cls;
        for (std::size_t i = 0; i < counts.size(); ++i)
            cls.insert(cls.end(), counts[i], basis_at(g, static_cast<int>(i)));
        return cls;
    };
    if (counts[0] > 0) {
        if (beta.is_zero() && num == 3) {
            auto t = triple();
            note(trace, "classical triple");
            return EvalResult::known(classical_triple(g, t[0], t[1], t[2]));
        }
        note(trace, "fundamental class: H0 inserted, value 0");
        return EvalResult::known(0);
    }
    if (beta.is_zero()) {
        if (num != 3) {
            note(trace, "constant maps need exactly three insertions, value 0");
            return EvalResult::known(0);
        }
        auto t = triple();
        note(trace, "classical triple");
        return EvalResult::known(classical_triple(g, t[0], t[1], t[2]));
    }

    ExactRational multiplier = 1;
    // Strip the greatest divisor first: E_1 sits after H_1 in the basis order.
    std::vector<std::size_t> divisor_slots{1};
    if (g.is_blowup()) divisor_slots.insert(divisor_slots.begin(), static_cast<std::size_t>(g.n() + 1));
    for (std::size_t slot : divisor_slots) {
        while (num >= 4 && counts[slot] > 0) {
            const BasisIndex d = basis_at(g, static_cast<int>(slot));
            const int factor = curve_pairing(g, d, beta);
            note(trace, "divisor axiom: remove " + to_string(d) + ", factor " + std::to_string(factor));
            if (factor == 0) return EvalResult::known(0);
            multiplier *= factor;
            --counts[slot];
            --num;
        }
    }
    if (num < 3) {
        EvalResult r = lift_small_N(g, beta, std::move(counts), trace);
        r.value *= multiplier;
        return r;
    }
    bool has_divisor = false;
    for (std::size_t slot : divisor_slots) has_divisor = has_divisor || counts[slot] > 0;
    if (num == 3 && has_divisor) {
        auto t = triple();
        ExactRational v = initial_three_point(g, t[0], t[1], t[2], beta);
        note(trace, "initial three-point data: " + to_display_string(v));
        return EvalResult::known(multiplier * v);
    }
    InvariantKey key{g, beta, std::move(counts)};
    note(trace, "canonical: " + to_display_string(multiplier) + " * " + to_string(key));
    return EvalResult::canonical(std::move(key), std::move(multiplier));
}

inline EvalResult canonicalize(const Geometry& g, CurveClass beta, std::span<const BasisIndex> classes,
                               Trace* trace = nullptr) {
    return canonicalize(g, beta, make_counts(g, classes), trace);
}

}  // namespace gwb
