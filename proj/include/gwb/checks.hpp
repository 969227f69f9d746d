#pragma once

/**
 * @file checks.hpp
 * @brief Property suites over the ring, the axioms and the WDVV relations.
 *
 * Suites:
 *   axioms   ring identities (exhaustive, n <= 5), permutation invariance,
 *            divisor axiom, grading soundness, lifting, three-point data at
 *            H'-E' for n = 4, 5
 *   wdvv     random admissible relation instances evaluate to exactly zero
 *   remarks  identities between rows of the point tables
 *   oracle   plain P^2 invariants against Kontsevich's recursion
 */

#include "gwb/engine.hpp"
#include "gwb/enumerative.hpp"
#include "gwb/geometry.hpp"
#include "gwb/invariant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace gwb {

struct RandomQuery {
    Geometry geom;
    CurveClass beta;
    std::vector<BasisIndex> classes;
};

inline int uniform(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Nonzero effective class with 1 <= d <= dmax (d >= 0 on the blow-up) and
/// mass at most max_mass.
inline CurveClass random_curve_class(std::mt19937_64& rng, const Geometry& g, int dmax, int max_mass) {
    if (!g.is_blowup()) return {uniform(rng, 1, dmax), 0};
    std::vector<CurveClass> pool;
    for (int d = 0; d <= dmax; ++d)
        for (int e = 2 * d - max_mass; e <= d; ++e) {
            const CurveClass b{d, e};
            if (!b.is_zero() && is_effective(g, b) && mass(g, b) <= max_mass) pool.push_back(b);
        }
    return pool[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(pool.size()) - 1))];
}

/// Classes whose codimensions minus one add up to excess, plus up to
/// extra_divisors divisors, in random order.
inline std::vector<BasisIndex> random_classes_with_excess(std::mt19937_64& rng, const Geometry& g, int excess,
                                                          int extra_divisors) {
    std::vector<BasisIndex> out;
    const auto all = basis(g);
    while (excess > 0) {
        std::vector<BasisIndex> fit;
        for (BasisIndex b : all)
            if (b.codim() >= 2 && b.codim() - 1 <= excess) fit.push_back(b);
        const BasisIndex pick = fit[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(fit.size()) - 1))];
        out.push_back(pick);
        excess -= pick.codim() - 1;
    }
    std::vector<BasisIndex> divisors{BasisIndex::H(1)};
    if (g.is_blowup()) divisors.push_back(BasisIndex::E(1));
    const int k = uniform(rng, 0, extra_divisors);
    for (int i = 0; i < k; ++i)
        out.push_back(divisors[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(divisors.size()) - 1))]);
    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

/// A query that satisfies the grading condition.
inline RandomQuery random_graded_query(std::mt19937_64& rng, const Geometry& g, int dmax, int max_mass,
                                       int extra_divisors = 2) {
    const CurveClass beta = random_curve_class(rng, g, dmax, max_mass);
    return {g, beta, random_classes_with_excess(rng, g, vdim(g, beta, 0), extra_divisors)};
}

struct WdvvInstance {
    Geometry geom;
    CurveClass beta;
    std::array<BasisIndex, 4> delta;
    Counts rest;
};

/// Random (beta, d1..d4, T) with sum of codims = vdim(beta, |T|+4) - 1.
inline std::optional<WdvvInstance> random_wdvv_instance(std::mt19937_64& rng, const Geometry& g, int dmax,
                                                        int max_mass) {
    const CurveClass beta = random_curve_class(rng, g, dmax, max_mass);
    int excess = vdim(g, beta, 0) - 1;
    if (excess < 0) return std::nullopt;
    std::array<BasisIndex, 4> delta;
    const auto all = basis(g);
    for (auto& slot : delta) {
        std::vector<BasisIndex> fit;
        for (BasisIndex b : all)
            if (b.codim() >= 1 && b.codim() - 1 <= excess) fit.push_back(b);
        slot = fit[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(fit.size()) - 1))];
        excess -= slot.codim() - 1;
    }
    const auto tail = random_classes_with_excess(rng, g, excess, 1);
    return WdvvInstance{g, beta, delta, make_counts(g, tail)};
}

inline Report ring_checks(int max_n = 5) {
    Report r{"ring", {}};
    for (int n = 2; n <= max_n; ++n) {
        for (Space sp : {Space::plain, Space::blowup}) {
            const Geometry g(sp, n);
            const std::string tag = to_string(sp) + " n=" + std::to_string(n);
            const auto all = basis(g);
            bool comm = true, assoc = true, pair_ok = true, diag_ok = true, dec_ok = true;
            for (BasisIndex a : all) {
                const CohClass ca(g, a);
                for (BasisIndex b : all) {
                    const CohClass cb(g, b);
                    if (!(cup(ca, cb) == cup(cb, ca))) comm = false;
                    if (degree(cup(ca, cb)) != pairing(g, a, b)) pair_ok = false;
                    for (BasisIndex c : all) {
                        const CohClass cc(g, c);
                        if (!(cup(cup(ca, cb), cc) == cup(ca, cup(cb, cc)))) assoc = false;
                    }
                }
                CohClass rebuilt(g);
                for (const auto& t : diagonal_pairs(g))
                    rebuilt += ExactInteger(t.sign * pairing(g, a, t.left)) * CohClass(g, t.right);
                if (!(rebuilt == ca)) diag_ok = false;
                if (a.codim() >= 2) {
                    for (const auto& dec : all_decompositions(g, a)) {
                        const CohClass prod = ExactInteger(dec.sign) * cup(CohClass(g, dec.divisor), CohClass(g, dec.rest));
                        if (!(prod == ca)) dec_ok = false;
                    }
                }
            }
            r.add("cup commutative, " + tag, comm);
            r.add("cup associative, " + tag, assoc);
            r.add("pairing = degree(cup), " + tag, pair_ok);
            r.add("diagonal reproduces every basis element, " + tag, diag_ok);
            r.add("decompose is exact, " + tag, dec_ok);
        }
    }
    // Mass and splittings over a grid of blow-up classes.
    for (int n = 2; n <= 3; ++n) {
        const Geometry g = Geometry::blowup(n);
        bool additive = true, positive = true, symmetric = true, effective = true;
        for (int d = 0; d <= 6; ++d)
            for (int e = -6; e <= d; ++e) {
                const CurveClass beta{d, e};
                if (beta.is_zero() || !is_effective(g, beta)) continue;
                if (mass(g, beta) < 1) positive = false;
                const auto sp = splittings(g, beta);
                for (const auto& [b1, b2] : sp) {
                    if (mass(g, b1) + mass(g, b2) != mass(g, beta)) additive = false;
                    if (!is_effective(g, b1) || !is_effective(g, b2)) effective = false;
                    if (std::find(sp.begin(), sp.end(), std::pair{b2, b1}) == sp.end()) symmetric = false;
                }
            }
        const std::string tag = "blowup n=" + std::to_string(n);
        r.add("mass positive on effective classes, " + tag, positive);
        r.add("mass additive under splitting, " + tag, additive);
        r.add("splittings symmetric, " + tag, symmetric);
        r.add("splittings effective, " + tag, effective);
    }
    return r;
}

inline Report axiom_checks(Engine& engine, std::uint64_t seed, int permutation_keys = 200, int divisor_pairs = 100) {
    Report r = ring_checks(5);
    r.suite = "axioms";
    std::mt19937_64 rng(seed);
    const std::array<Geometry, 4> geoms{Geometry::blowup(2), Geometry::blowup(3), Geometry::plain(2),
                                        Geometry::plain(3)};

    int perm_fail = 0;
    std::string perm_detail;
    for (int i = 0; i < permutation_keys; ++i) {
        const Geometry& g = geoms[static_cast<std::size_t>(i) % geoms.size()];
        RandomQuery q = random_graded_query(rng, g, 3, 6);
        const ExactRational v = engine.evaluate(g, q.beta, q.classes);
        for (int k = 0; k < 3; ++k) {
            std::shuffle(q.classes.begin(), q.classes.end(), rng);
            if (engine.evaluate(g, q.beta, q.classes) != v) {
                ++perm_fail;
                perm_detail = to_string(make_key(g, q.beta, q.classes));
            }
        }
    }
    r.add("permutation invariance on " + std::to_string(permutation_keys) + " random keys", perm_fail == 0,
          perm_fail ? perm_detail : "");

    int div_fail = 0;
    std::string div_detail;
    for (int i = 0; i < divisor_pairs; ++i) {
        const Geometry& g = geoms[static_cast<std::size_t>(i) % geoms.size()];
        RandomQuery q = random_graded_query(rng, g, 3, 6, 1);
        const BasisIndex divisor = g.is_blowup() && uniform(rng, 0, 1) ? BasisIndex::E(1) : BasisIndex::H(1);
        const ExactRational base = engine.evaluate(g, q.beta, q.classes);
        q.classes.push_back(divisor);
        std::shuffle(q.classes.begin(), q.classes.end(), rng);
        const ExactRational with = engine.evaluate(g, q.beta, q.classes);
        if (with != curve_pairing(g, divisor, q.beta) * base) {
            ++div_fail;
            div_detail = to_string(make_key(g, q.beta, q.classes));
        }
    }
    r.add("divisor axiom on " + std::to_string(divisor_pairs) + " random (key, divisor) pairs", div_fail == 0,
          div_detail);

    // Grading soundness over all multisets of up to four classes.
    int grading_fail = 0;
    for (const Geometry& g : geoms) {
        const auto all = basis(g);
        for (int d = 0; d <= 2; ++d)
            for (int e = (g.is_blowup() ? -2 : 0); e <= (g.is_blowup() ? d : 0); ++e) {
                const CurveClass beta{d, e};
                std::vector<BasisIndex> cls;
                auto rec = [&](auto&& self, std::size_t from) -> void {
                    int codims = 0;
                    for (BasisIndex b : cls) codims += b.codim();
                    if (codims != vdim(g, beta, static_cast<int>(cls.size()))) {
                        const EvalResult res = canonicalize(g, beta, cls);
                        if (!res.is_value() || res.value != 0) ++grading_fail;
                    }
                    if (cls.size() == 4) return;
                    for (std::size_t i = from; i < all.size(); ++i) {
                        cls.push_back(all[i]);
                        self(self, i);
                        cls.pop_back();
                    }
                };
                rec(rec, 0);
            }
    }
    r.add("grading soundness (exhaustive, up to 4 insertions)", grading_fail == 0);

    {
        const Geometry g = Geometry::blowup(3);
        const BasisIndex pt = point_class(g), h = BasisIndex::H(1);
        const std::vector<BasisIndex> two{pt, pt}, four{pt, pt, h, h};
        const ExactRational via_one = engine.evaluate(g, {1, 0}, two);
        const ExactRational via_two = engine.evaluate(g, {1, 0}, four);
        r.add("lifting <pt,pt>_(1,0) is path independent", via_one == 1 && via_two == 1,
              to_display_string(via_one) + " / " + to_display_string(via_two));
    }

    bool symmetric = true;
    for (int n = 2; n <= 4; ++n) {
        const Geometry g = Geometry::blowup(n);
        const auto all = basis(g);
        for (CurveClass beta : {CurveClass{1, 0}, CurveClass{0, -1}, CurveClass{1, 1}})
            for (BasisIndex a : all)
                for (BasisIndex b : all)
                    for (BasisIndex c : all) {
                        const ExactRational v = initial_three_point(g, a, b, c, beta);
                        if (v != initial_three_point(g, b, c, a, beta) || v != initial_three_point(g, b, a, c, beta))
                            symmetric = false;
                    }
    }
    r.add("initial three-point data symmetric", symmetric);

    for (int n = 4; n <= 5; ++n) {
        const Geometry g = Geometry::blowup(n);
        const Level level{g, {1, 1}, 3};
        std::string detail;
        bool ok = true;
        try {
            engine.solve_level(level);
            const auto keys = level_unknowns(level);
            for (const auto& k : keys)
                if (engine.evaluate_canonical(k) != 1) {
                    ok = false;
                    detail = to_string(k);
                }
            if (ok) detail = std::to_string(keys.size()) + " derived triples";
        } catch (const std::exception& ex) {
            ok = false;
            detail = ex.what();
        }
        r.add("derived <a,b,c>_(1,1) = 1 with all codims >= 2, n=" + std::to_string(n), ok, detail);
    }
    return r;
}

inline Report wdvv_checks(Engine& engine, const Geometry& g, int dmax, std::uint64_t seed, int instances = 100) {
    Report r{"wdvv", {}};
    std::mt19937_64 rng(seed);
    const int max_mass = g.is_blowup() ? std::min(2 * dmax, g.n() == 2 ? 8 : 6) : dmax;
    int done = 0, failures = 0, attempts = 0;
    std::string detail;
    while (done < instances && attempts < 100 * instances) {
        ++attempts;
        auto inst = random_wdvv_instance(rng, g, dmax, max_mass);
        if (!inst) continue;
        ++done;
        const ExactRational res = engine.wdvv_residual(inst->geom, inst->beta, inst->delta, inst->rest);
        if (res != 0) {
            ++failures;
            detail = "beta=" + to_string(inst->beta) + " residual " + to_display_string(res);
        }
    }
    r.add("WDVV residual exactly 0 on " + std::to_string(done) + " random instances, " + to_string(g.space()) +
              " n=" + std::to_string(g.n()),
          failures == 0 && done == instances, detail);
    return r;
}

inline Report oracle_checks(Engine& engine, int dmax) {
    Report r{"oracle", {}};
    const auto oracle = kontsevich_oracle(dmax);
    const Geometry p2 = Geometry::plain(2);
    for (int d = 1; d <= dmax; ++d) {
        const ExactRational v = point_invariant(engine, p2, {d, 0}, 3 * d - 1);
        const ExactInteger& want = oracle[static_cast<std::size_t>(d - 1)];
        r.add("plain P2 d=" + std::to_string(d), v == want,
              to_display_string(v) + " vs Kontsevich " + want.get_str());
    }
    return r;
}

struct CacheVerification {
    std::size_t checked = 0;
    std::size_t total = 0;
    std::vector<std::string> mismatches;
};

/// Recomputes a seeded sample (at least one entry) of the store, each entry
/// in a fresh engine, and compares with the stored value.
inline CacheVerification verify_cache_sample(const MemoStore& store, double fraction, std::uint64_t seed) {
    std::vector<std::pair<InvariantKey, ExactRational>> entries(store.values().begin(), store.values().end());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::mt19937_64 rng(seed);
    std::shuffle(entries.begin(), entries.end(), rng);
    const auto want = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(entries.size())));
    entries.resize(std::min(entries.size(), std::max<std::size_t>(1, want)));
    CacheVerification out{entries.size(), store.size(), {}};
    for (const auto& [key, value] : entries) {
        Engine fresh;
        const ExactRational again = fresh.evaluate(key);
        if (again != value)
            out.mismatches.push_back(to_string(key) + " cached " + to_display_string(value) + ", recomputed " +
                                     to_display_string(again));
    }
    return out;
}

}  // namespace gwb
