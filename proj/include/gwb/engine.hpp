#pragma once

/**
 * @file engine.hpp
 * @brief Reconstruction of genus-0 invariants from three-point data through
 * the WDVV (splitting) relations.
 *
 * Canonical invariants are grouped into levels (beta, N) ordered by
 * (mass(beta), N). In a WDVV relation built from an unknown at level
 * (beta, N), every product term with both curve classes nonzero lives at a
 * strictly smaller mass, and every term that still carries a divisor drops to
 * N-1 after the divisor axiom. What remains at the level itself are the
 * collapse terms where one side of the splitting is a constant map; these
 * become the unknowns of an exact linear system.
 *
 * A query solves the closure of its key under those same-level couplings,
 * starting from one targeted relation per unknown and widening the relation
 * family only when the system is rank deficient.
 */

#include "gwb/geometry.hpp"
#include "gwb/invariant.hpp"
#include "gwb/linear_solve.hpp"
#include "gwb/memo_store.hpp"
#include "gwb/rational.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gwb {

class UnderdeterminedLevel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A derived three-point value at H'-E' disagrees with the seeded value 1.
class InitialDataMismatch : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct Level {
    Geometry geom;
    CurveClass beta;
    int num_points = 0;

    std::pair<int, int> order_key() const { return {mass(geom, beta), num_points}; }

    friend bool operator==(const Level&, const Level&) = default;
};

inline Level level_of(const InvariantKey& k) { return {k.geom, k.beta, k.num_points()}; }

inline std::string to_string(const Level& l) {
    return "level beta=" + to_string(l.beta) + " N=" + std::to_string(l.num_points) + " (" + to_string(l.geom.space()) +
           " n=" + std::to_string(l.geom.n()) + ")";
}

/// sum(lhs[k] * value(k)) = rhs
struct Relation {
    std::map<InvariantKey, ExactRational> lhs;
    ExactRational rhs;

    bool is_trivial() const { return lhs.empty() && rhs == 0; }
};

/// Canonical unknowns of a level: multisets of N classes of codim >= 2 whose
/// codimensions add up to vdim(beta, N).
inline std::vector<InvariantKey> level_unknowns(const Level& level) {
    const Geometry& g = level.geom;
    std::vector<InvariantKey> out;
    if (level.beta.is_zero() || !is_effective(g, level.beta) || level.num_points < 3) return out;
    std::vector<int> slots;
    for (int i = 0; i < g.basis_size(); ++i)
        if (basis_at(g, i).codim() >= 2) slots.push_back(i);
    const int target = vdim(g, level.beta, level.num_points);
    Counts c(static_cast<std::size_t>(g.basis_size()), 0);
    auto rec = [&](auto&& self, std::size_t pos, int left, int codim_left) -> void {
        if (pos == slots.size()) {
            if (left == 0 && codim_left == 0) out.push_back({g, level.beta, c});
            return;
        }
        const int cd = basis_at(g, slots[pos]).codim();
        for (int k = 0; k <= left && k * cd <= codim_left; ++k) {
            c[static_cast<std::size_t>(slots[pos])] = static_cast<std::uint16_t>(k);
            self(self, pos + 1, left - k, codim_left - k * cd);
        }
        c[static_cast<std::size_t>(slots[pos])] = 0;
    };
    rec(rec, 0, level.num_points, target);
    std::sort(out.begin(), out.end());
    return out;
}

struct EngineOptions {
    /// Substitute every solution back into the relations that produced it.
    bool verify_solutions = false;
};

struct EngineStats {
    std::size_t systems_solved = 0;
    std::size_t relations_built = 0;
    std::size_t unknowns_solved = 0;
    std::size_t widenings = 0;
};

class Engine {
public:
    Engine() = default;
    explicit Engine(MemoStore store, EngineOptions options = {}) : store_(std::move(store)), options_(options) {}
    explicit Engine(EngineOptions options) : options_(options) {}

    MemoStore& store() { return store_; }
    const MemoStore& store() const { return store_; }
    const EngineStats& stats() const { return stats_; }

    /// Receives one line per solved system; nullptr disables.
    void set_trace(Trace* trace) { trace_ = trace; }

    ExactRational evaluate(const Geometry& g, CurveClass beta, std::span<const BasisIndex> classes,
                           Trace* trace = nullptr) {
        return evaluate(g, beta, make_counts(g, classes), trace);
    }

    ExactRational evaluate(const Geometry& g, CurveClass beta, Counts counts, Trace* trace = nullptr) {
        EvalResult r = canonicalize(g, beta, std::move(counts), trace);
        if (r.is_value()) return r.value;
        Trace* saved = trace_;
        if (trace) trace_ = trace;
        ExactRational v = r.value * evaluate_canonical(*r.key);
        trace_ = saved;
        return v;
    }

    ExactRational evaluate(const InvariantKey& key, Trace* trace = nullptr) {
        return evaluate(key.geom, key.beta, key.counts, trace);
    }

    ExactRational evaluate_canonical(const InvariantKey& key) {
        if (const ExactRational* v = store_.find(key)) return *v;
        if (!is_canonical(key)) throw std::invalid_argument("not a canonical key: " + to_string(key));
        solve({key});
        const ExactRational* v = store_.find(key);
        if (!v) throw std::logic_error("solver finished without a value for " + to_string(key));
        return *v;
    }

    /// L(d1,d2;d3,d4) - L(d1,d3;d2,d4) = 0 for the (|rest|+4)-point family at
    /// beta. Terms at level (beta, |rest|+3) that are not yet memoized stay on
    /// the left; everything else is evaluated into the right-hand side.
    Relation wdvv_relation(const Geometry& g, CurveClass beta, const std::array<BasisIndex, 4>& delta,
                           const Counts& rest) {
        const Level current{g, beta, count_total(rest) + 3};
        return build_relation(g, beta, delta, rest, &current);
    }

    /// Value of L(d1,d2;d3,d4) - L(d1,d3;d2,d4) with every term evaluated.
    ExactRational wdvv_residual(const Geometry& g, CurveClass beta, const std::array<BasisIndex, 4>& delta,
                                const Counts& rest) {
        Relation r = build_relation(g, beta, delta, rest, nullptr);
        if (!r.lhs.empty()) throw std::logic_error("residual evaluation left symbolic terms");
        return -r.rhs;
    }

    /// Solves every canonical unknown of the level.
    void solve_level(const Level& level) {
        std::vector<InvariantKey> seeds;
        for (auto& k : level_unknowns(level))
            if (!store_.contains(k)) seeds.push_back(std::move(k));
        if (!seeds.empty()) solve(seeds);
    }

private:
    struct Term {
        ExactRational coeff;
        std::optional<InvariantKey> unknown;
    };

    struct Candidate {
        std::array<BasisIndex, 4> delta;
        Counts rest;
        int score = 0;
        int gamma_codim = 0;
    };

    Term resolve(const Geometry& g, CurveClass beta, Counts counts, const Level* current) {
        EvalResult r = canonicalize(g, beta, std::move(counts));
        if (r.is_value() || r.value == 0) return {r.value, std::nullopt};
        const InvariantKey& k = *r.key;
        if (const ExactRational* v = store_.find(k)) return {r.value * *v, std::nullopt};
        if (current && k.geom == current->geom && k.beta == current->beta && k.num_points() == current->num_points)
            return {r.value, std::move(r.key)};
        return {r.value * evaluate_canonical(k), std::nullopt};
    }

    static void bump(Counts& c, const Geometry& g, BasisIndex b) { ++c[static_cast<std::size_t>(flat_index(g, b))]; }

    static ExactInteger binomial(unsigned n, unsigned k) {
        ExactInteger r;
        mpz_bin_uiui(r.get_mpz_t(), n, k);
        return r;
    }

    /// Adds sign * L(a,b;c,d) into rel, where
    /// L(a,b;c,d) = sum over beta1+beta2 = beta, T1 + T2 = T, (x,y) of
    ///              g^{xy} I_{beta1}(a,b,x,T1) I_{beta2}(y,c,d,T2).
    void accumulate_L(const Geometry& g, CurveClass beta, BasisIndex a, BasisIndex b, BasisIndex c, BasisIndex d,
                      const Counts& rest, int sign, const Level* current, Relation& rel) {
        std::vector<CurveClass> firsts{CurveClass{0, 0}};
        for (const auto& [b1, b2] : splittings(g, beta)) firsts.push_back(b1);
        firsts.push_back(beta);

        const std::size_t m = rest.size();
        Counts sub(m, 0);
        for (CurveClass beta1 : firsts) {
            const CurveClass beta2 = beta - beta1;
            auto visit = [&](auto&& self, std::size_t pos, const ExactInteger& mult, int size1, int codim1) -> void {
                if (pos < m) {
                    for (unsigned t = 0; t <= rest[pos]; ++t) {
                        sub[pos] = static_cast<std::uint16_t>(t);
                        const int cd = basis_at(g, static_cast<int>(pos)).codim();
                        self(self, pos + 1, t == 0 ? mult : mult * binomial(rest[pos], t), size1 + static_cast<int>(t),
                             codim1 + static_cast<int>(t) * cd);
                    }
                    sub[pos] = 0;
                    return;
                }
                const int size2 = count_total(rest) - size1;
                if (beta1.is_zero() && size1 > 0) return;
                if (beta2.is_zero() && size2 > 0) return;
                const int cx = vdim(g, beta1, size1 + 3) - a.codim() - b.codim() - codim1;
                if (cx < 0 || cx > g.n()) return;
                for (Family fam : {Family::H, Family::E}) {
                    const BasisIndex x{fam, cx};
                    if (!is_valid(g, x)) continue;
                    const DiagonalTerm pair = dual(g, x);
                    Counts c1 = sub;
                    bump(c1, g, a);
                    bump(c1, g, b);
                    bump(c1, g, x);
                    Counts c2(m, 0);
                    for (std::size_t i = 0; i < m; ++i) c2[i] = static_cast<std::uint16_t>(rest[i] - sub[i]);
                    bump(c2, g, pair.right);
                    bump(c2, g, c);
                    bump(c2, g, d);
                    Term f1, f2;
                    if (beta2.is_zero()) {
                        f2 = resolve(g, beta2, std::move(c2), current);
                        if (f2.coeff == 0) continue;
                        f1 = resolve(g, beta1, std::move(c1), current);
                        if (f1.coeff == 0) continue;
                    } else {
                        f1 = resolve(g, beta1, std::move(c1), current);
                        if (f1.coeff == 0) continue;
                        f2 = resolve(g, beta2, std::move(c2), current);
                        if (f2.coeff == 0) continue;
                    }
                    if (f1.unknown && f2.unknown) throw std::logic_error("relation term is quadratic in unknowns");
                    ExactRational coeff = f1.coeff * f2.coeff;
                    coeff *= sign * pair.sign;
                    coeff *= mult;
                    if (f1.unknown || f2.unknown) {
                        const InvariantKey& k = f1.unknown ? *f1.unknown : *f2.unknown;
                        auto& slot = rel.lhs[k];
                        slot += coeff;
                        if (slot == 0) rel.lhs.erase(k);
                    } else {
                        rel.rhs -= coeff;
                    }
                }
            };
            visit(visit, 0, ExactInteger(1), 0, 0);
        }
    }

    Relation build_relation(const Geometry& g, CurveClass beta, const std::array<BasisIndex, 4>& delta,
                            const Counts& rest, const Level* current) {
        for (BasisIndex b : delta) require_valid(g, b);
        if (rest.size() != static_cast<std::size_t>(g.basis_size()))
            throw std::invalid_argument("count vector does not match the basis size");
        Relation rel;
        int codims = codim_total(g, rest);
        for (BasisIndex b : delta) codims += b.codim();
        if (beta.is_zero() || !is_effective(g, beta) || codims != vdim(g, beta, count_total(rest) + 4) - 1)
            return rel;
        ++stats_.relations_built;
        accumulate_L(g, beta, delta[0], delta[1], delta[2], delta[3], rest, +1, current, rel);
        accumulate_L(g, beta, delta[0], delta[2], delta[1], delta[3], rest, -1, current, rel);
        return rel;
    }

    /// Relations in which unknown u appears through the collapse term
    /// I(gamma' . D, gamma2, gamma3, T), best first.
    std::vector<Candidate> candidates(const InvariantKey& u, bool every_decomposition) const {
        const Geometry& g = u.geom;
        std::vector<Candidate> out;
        const int size = g.basis_size();
        for (int i = 0; i < size; ++i) {
            const BasisIndex gamma = basis_at(g, i);
            if (!u.counts[static_cast<std::size_t>(i)] || gamma.codim() < 2) continue;
            std::vector<Decomposition> decs =
                every_decomposition ? all_decompositions(g, gamma) : std::vector<Decomposition>{decompose(g, gamma)};
            for (const Decomposition& dec : decs) {
                Counts rest1 = u.counts;
                --rest1[static_cast<std::size_t>(i)];
                for (int j = 0; j < size; ++j) {
                    if (!rest1[static_cast<std::size_t>(j)]) continue;
                    Counts rest2 = rest1;
                    --rest2[static_cast<std::size_t>(j)];
                    for (int k = 0; k < size; ++k) {
                        if (!rest2[static_cast<std::size_t>(k)]) continue;
                        Counts t = rest2;
                        --t[static_cast<std::size_t>(k)];
                        const BasisIndex g2 = basis_at(g, j), g3 = basis_at(g, k);
                        // The only other same-level term is I(gamma', gamma2, D.gamma3, T).
                        int score = 0;
                        if (dec.rest.codim() >= 2) {
                            if (auto p = basis_product(g, dec.divisor, g3)) {
                                Counts v = t;
                                bump(v, g, dec.rest);
                                bump(v, g, g2);
                                bump(v, g, p->index);
                                if (v != u.counts) score = 1;
                                else if (dec.sign - p->sign == 0) continue;
                                else score = 2;
                            }
                        }
                        out.push_back({{dec.rest, dec.divisor, g2, g3}, std::move(t), score, gamma.codim()});
                    }
                }
            }
        }
        std::stable_sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) {
            return std::tie(x.score, y.gamma_codim) < std::tie(y.score, x.gamma_codim);
        });
        return out;
    }

    /// All (N+1)-point relation instances at the level, for the last widening.
    std::vector<Candidate> general_instances(const Level& level) const {
        const Geometry& g = level.geom;
        std::vector<Candidate> out;
        const int size = g.basis_size();
        const int want = vdim(g, level.beta, level.num_points + 1) - 1;
        Counts c(static_cast<std::size_t>(size), 0);
        auto rec = [&](auto&& self, int pos, int left, int codim_left) -> void {
            if (pos == size) {
                if (left != 0 || codim_left != 0) return;
                for (int i = 1; i < size; ++i)
                    for (int j = 1; j < size; ++j)
                        for (int k = 1; k < size; ++k)
                            for (int l = 1; l < size; ++l) {
                                Counts t = c;
                                bool ok = true;
                                for (int idx : {i, j, k, l}) {
                                    auto& slot = t[static_cast<std::size_t>(idx)];
                                    if (slot == 0) {
                                        ok = false;
                                        break;
                                    }
                                    --slot;
                                }
                                if (!ok) continue;
                                out.push_back({{basis_at(g, i), basis_at(g, j), basis_at(g, k), basis_at(g, l)},
                                               std::move(t), 0, 0});
                            }
                return;
            }
            const int cd = basis_at(g, pos).codim();
            for (int k = 0; k <= left && k * cd <= codim_left; ++k) {
                c[static_cast<std::size_t>(pos)] = static_cast<std::uint16_t>(k);
                self(self, pos + 1, left - k, codim_left - k * cd);
            }
            c[static_cast<std::size_t>(pos)] = 0;
        };
        // H_0 insertions only produce fundamental-class identities.
        rec(rec, 1, level.num_points + 1, want);
        return out;
    }

    class System {
    public:
        std::size_t index_of(const InvariantKey& k) {
            auto [it, fresh] = index_.try_emplace(k, unknowns_.size());
            if (fresh) unknowns_.push_back(k);
            return it->second;
        }
        bool has(const InvariantKey& k) const { return index_.contains(k); }
        const std::vector<InvariantKey>& unknowns() const { return unknowns_; }

        /// Returns false for duplicates.
        bool mark(const Candidate& c) {
            return seen_.insert({c.delta, c.rest}).second;
        }

        void add(const Relation& r) {
            if (r.lhs.empty()) return;
            SparseRow row;
            for (const auto& [k, v] : r.lhs) row.coeffs[index_of(k)] = v;
            row.rhs = r.rhs;
            rows_.push_back(std::move(row));
        }
        const std::vector<SparseRow>& rows() const { return rows_; }

    private:
        std::map<InvariantKey, std::size_t> index_;
        std::vector<InvariantKey> unknowns_;
        std::vector<SparseRow> rows_;
        std::set<std::pair<std::array<BasisIndex, 4>, Counts>> seen_;
    };

    void add_candidates(System& sys, const Geometry& g, CurveClass beta, const std::vector<Candidate>& cands,
                        std::size_t limit, const Level& level) {
        std::size_t added = 0;
        for (const Candidate& c : cands) {
            if (added == limit) break;
            if (!sys.mark(c)) continue;
            sys.add(build_relation(g, beta, c.delta, c.rest, &level));
            ++added;
        }
    }

    /// Solves the system seeded by the given unknowns of one level; succeeds
    /// once every seed is determined.
    void solve(const std::vector<InvariantKey>& seeds) {
        const Level level = level_of(seeds.front());
        for (const Level& a : active_) {
            if (a == level) throw std::logic_error("re-entered " + to_string(level));
            if (!(level.order_key() < a.order_key()))
                throw std::logic_error("level order violated: " + to_string(level) + " requested while solving " +
                                       to_string(a));
        }
        active_.push_back(level);
        struct Pop {
            std::vector<Level>& v;
            ~Pop() { v.pop_back(); }
        } pop{active_};

        const Geometry& g = level.geom;
        System sys;
        for (const auto& s : seeds) sys.index_of(s);

        auto done = [&](const SolveResult& res) {
            for (const auto& s : seeds)
                if (!res.determined(sys.index_of(s))) return false;
            return true;
        };

        // Stage 0: one targeted relation per unknown, following new unknowns.
        // Stage 1 and 2: every targeted relation, then every decomposition.
        // Stage 3: the whole level. Stage 4: general instances.
        for (int stage = 0; stage <= 4; ++stage) {
            if (stage > 0) ++stats_.widenings;
            if (stage == 3)
                for (const auto& k : level_unknowns(level))
                    if (!store_.contains(k)) sys.index_of(k);
            if (stage == 4) {
                for (const Candidate& c : general_instances(level)) {
                    if (!sys.mark(c)) continue;
                    sys.add(build_relation(g, level.beta, c.delta, c.rest, &level));
                }
            }
            const bool all = stage >= 1;
            const bool every_dec = stage >= 2;
            for (std::size_t i = 0; i < sys.unknowns().size(); ++i) {
                const InvariantKey u = sys.unknowns()[i];
                add_candidates(sys, g, level.beta, candidates(u, every_dec), all ? SIZE_MAX : 1, level);
            }
            SolveResult res = solve_exact(sys.rows(), sys.unknowns().size());
            if (done(res)) {
                commit(sys, res);
                if (trace_)
                    trace_->push_back("solved " + to_string(level) + ": " + std::to_string(sys.unknowns().size()) +
                                      " unknowns, " + std::to_string(sys.rows().size()) + " relations, stage " +
                                      std::to_string(stage));
                return;
            }
        }
        throw UnderdeterminedLevel("relations exhausted without full rank at " + to_string(level));
    }

    void commit(const System& sys, const SolveResult& res) {
        ++stats_.systems_solved;
        if (options_.verify_solutions) {
            for (const SparseRow& row : sys.rows()) {
                ExactRational acc = 0;
                bool complete = true;
                for (const auto& [j, v] : row.coeffs) {
                    if (!res.determined(j)) {
                        complete = false;
                        break;
                    }
                    acc += v * *res.values[j];
                }
                if (complete && acc != row.rhs) throw std::logic_error("solution fails a relation it came from");
            }
        }
        for (std::size_t j = 0; j < sys.unknowns().size(); ++j) {
            if (!res.determined(j)) continue;
            const InvariantKey& k = sys.unknowns()[j];
            const ExactRational& v = *res.values[j];
            if (k.geom.is_blowup() && k.beta == CurveClass{1, 1} && k.num_points() == 3 && v != 1)
                throw InitialDataMismatch("derived " + to_string(k) + " = " + to_display_string(v) +
                                          ", expected 1 for a line through the blown-up point");
            if (!store_.contains(k)) ++stats_.unknowns_solved;
            store_.insert(k, v);
        }
    }

    MemoStore store_;
    EngineOptions options_;
    EngineStats stats_;
    std::vector<Level> active_;
    Trace* trace_ = nullptr;
};

}  // namespace gwb
