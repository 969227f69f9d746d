#pragma once

/**
 * @file geometry.hpp
 * @brief Cohomology ring, curve classes and dimension formulas of P^n and of
 * the blow-up of P^n at a point.
 *
 * Basis of A*(X): H_i = H^i for 0 <= i <= n and, on the blow-up,
 * E_i = -(-E)^i for 1 <= i <= n-1. E_n would equal the point class H_n, so it
 * is never a basis element. Relations: H.E = 0, H^{n+1} = 0,
 * E^n = (-1)^{n-1} H^n.
 *
 * Curve classes are written beta = d H' - e E' with H.H' = 1, E.E' = -1, so
 * H.beta = d and E.beta = e. On plain P^n the e component is always 0.
 */

#include "gwb/rational.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gwb {

enum class Space : std::uint8_t { plain, blowup };

inline std::string to_string(Space s) { return s == Space::plain ? "plain" : "blowup"; }

class Geometry {
public:
    Geometry() = default;
    Geometry(Space space, int n) : space_(space), n_(n) {
        if (n < 2) throw std::invalid_argument("dimension n must be at least 2");
    }

    static Geometry plain(int n) { return {Space::plain, n}; }
    static Geometry blowup(int n) { return {Space::blowup, n}; }

    Space space() const { return space_; }
    int n() const { return n_; }
    bool is_blowup() const { return space_ == Space::blowup; }

    /// n+1 on P^n, 2n on the blow-up.
    int basis_size() const { return is_blowup() ? 2 * n_ : n_ + 1; }

    friend bool operator==(const Geometry&, const Geometry&) = default;
    friend auto operator<=>(const Geometry&, const Geometry&) = default;

private:
    Space space_ = Space::blowup;
    int n_ = 2;
};

enum class Family : std::uint8_t { H, E };

/// One element of the fixed basis; ordered by family, then level.
struct BasisIndex {
    Family family = Family::H;
    int level = 0;

    int codim() const { return level; }

    static BasisIndex H(int level) { return {Family::H, level}; }
    static BasisIndex E(int level) { return {Family::E, level}; }

    friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
    friend auto operator<=>(const BasisIndex&, const BasisIndex&) = default;
};

inline std::string to_string(BasisIndex b) {
    return (b.family == Family::H ? "H" : "E") + std::to_string(b.level);
}

inline bool is_valid(const Geometry& g, BasisIndex b) {
    if (b.family == Family::H) return b.level >= 0 && b.level <= g.n();
    return g.is_blowup() && b.level >= 1 && b.level <= g.n() - 1;
}

inline BasisIndex point_class(const Geometry& g) { return BasisIndex::H(g.n()); }

/// Position of b in the basis total order: H_0..H_n, then E_1..E_{n-1}.
inline int flat_index(const Geometry& g, BasisIndex b) {
    return b.family == Family::H ? b.level : g.n() + b.level;
}

inline BasisIndex basis_at(const Geometry& g, int flat) {
    return flat <= g.n() ? BasisIndex::H(flat) : BasisIndex::E(flat - g.n());
}

inline std::vector<BasisIndex> basis(const Geometry& g) {
    std::vector<BasisIndex> out;
    for (int i = 0; i < g.basis_size(); ++i) out.push_back(basis_at(g, i));
    return out;
}

inline void require_valid(const Geometry& g, BasisIndex b) {
    if (!is_valid(g, b))
        throw std::invalid_argument("basis element " + to_string(b) + " does not exist in this geometry");
}

/// A basis element with a sign; the product of two basis elements is always
/// one of these or zero.
struct SignedBasis {
    BasisIndex index;
    int sign = 1;
    friend bool operator==(const SignedBasis&, const SignedBasis&) = default;
};

inline std::optional<SignedBasis> basis_product(const Geometry& g, BasisIndex a, BasisIndex b) {
    const int n = g.n();
    if (a == BasisIndex::H(0)) return SignedBasis{b, 1};
    if (b == BasisIndex::H(0)) return SignedBasis{a, 1};
    if (a.family != b.family) return std::nullopt;
    const int level = a.level + b.level;
    if (level > n) return std::nullopt;
    if (a.family == Family::H) return SignedBasis{BasisIndex::H(level), 1};
    // E_i E_j = (-E)^{i+j} = -E_{i+j}; at i+j = n this is -pt.
    if (level == n) return SignedBasis{BasisIndex::H(n), -1};
    return SignedBasis{BasisIndex::E(level), -1};
}

/// Sparse integer combination of basis elements.
class CohClass {
public:
    explicit CohClass(Geometry g) : geom_(g) {}
    CohClass(Geometry g, BasisIndex b, ExactInteger coeff = 1) : geom_(g) {
        require_valid(g, b);
        add(b, coeff);
    }

    const Geometry& geometry() const { return geom_; }
    const std::map<BasisIndex, ExactInteger>& coeffs() const { return coeffs_; }

    ExactInteger coeff(BasisIndex b) const {
        auto it = coeffs_.find(b);
        return it == coeffs_.end() ? ExactInteger(0) : it->second;
    }

    void add(BasisIndex b, const ExactInteger& c) {
        if (c == 0) return;
        auto& slot = coeffs_[b];
        slot += c;
        if (slot == 0) coeffs_.erase(b);
    }

    bool is_zero() const { return coeffs_.empty(); }

    /// True when every nonzero coefficient sits at one codimension.
    bool is_homogeneous() const {
        if (coeffs_.empty()) return true;
        const int c = coeffs_.begin()->first.codim();
        for (const auto& [b, v] : coeffs_)
            if (b.codim() != c) return false;
        return true;
    }

    CohClass& operator+=(const CohClass& o) {
        check_same(o);
        for (const auto& [b, c] : o.coeffs_) add(b, c);
        return *this;
    }
    friend CohClass operator+(CohClass a, const CohClass& b) { return a += b; }
    friend CohClass operator*(const ExactInteger& s, CohClass a) {
        if (s == 0) return CohClass(a.geom_);
        for (auto& [b, c] : a.coeffs_) c *= s;
        return a;
    }
    friend bool operator==(const CohClass& a, const CohClass& b) {
        return a.geom_ == b.geom_ && a.coeffs_ == b.coeffs_;
    }

    void check_same(const CohClass& o) const {
        if (geom_ != o.geom_) throw std::invalid_argument("cohomology classes from different geometries");
    }

private:
    Geometry geom_;
    std::map<BasisIndex, ExactInteger> coeffs_;
};

inline std::string to_string(const CohClass& c) {
    if (c.is_zero()) return "0";
    std::string out;
    for (const auto& [b, v] : c.coeffs()) {
        if (!out.empty()) out += v < 0 ? " - " : " + ";
        else if (v < 0) out += "-";
        ExactInteger mag = abs(v);
        if (mag != 1) out += mag.get_str() + "*";
        out += to_string(b);
    }
    return out;
}

inline CohClass cup(const CohClass& a, const CohClass& b) {
    a.check_same(b);
    CohClass out(a.geometry());
    for (const auto& [ba, ca] : a.coeffs())
        for (const auto& [bb, cb] : b.coeffs())
            if (auto p = basis_product(a.geometry(), ba, bb)) out.add(p->index, p->sign * ca * cb);
    return out;
}

/// Coefficient of the point class.
inline ExactInteger degree(const CohClass& a) { return a.coeff(point_class(a.geometry())); }

inline int pairing(const Geometry& g, BasisIndex a, BasisIndex b) {
    if (a.family != b.family || a.level + b.level != g.n()) return 0;
    return a.family == Family::H ? 1 : -1;
}

struct DiagonalTerm {
    BasisIndex left;
    BasisIndex right;
    int sign = 1;
    friend bool operator==(const DiagonalTerm&, const DiagonalTerm&) = default;
};

/// Inverse of the Poincare pairing, listed as (x, y, g^{xy}).
inline std::vector<DiagonalTerm> diagonal_pairs(const Geometry& g) {
    std::vector<DiagonalTerm> out;
    for (int i = 0; i <= g.n(); ++i) out.push_back({BasisIndex::H(i), BasisIndex::H(g.n() - i), 1});
    if (g.is_blowup())
        for (int i = 1; i <= g.n() - 1; ++i) out.push_back({BasisIndex::E(i), BasisIndex::E(g.n() - i), -1});
    return out;
}

/// Dual partner of x under the diagonal, with the inverse-pairing sign.
inline DiagonalTerm dual(const Geometry& g, BasisIndex x) {
    if (x.family == Family::H) return {x, BasisIndex::H(g.n() - x.level), 1};
    return {x, BasisIndex::E(g.n() - x.level), -1};
}

struct CurveClass {
    int d = 0;
    int e = 0;

    bool is_zero() const { return d == 0 && e == 0; }

    friend CurveClass operator+(CurveClass a, CurveClass b) { return {a.d + b.d, a.e + b.e}; }
    friend CurveClass operator-(CurveClass a, CurveClass b) { return {a.d - b.d, a.e - b.e}; }
    friend bool operator==(const CurveClass&, const CurveClass&) = default;
    friend auto operator<=>(const CurveClass&, const CurveClass&) = default;
};

inline std::string to_string(CurveClass b) {
    return "(" + std::to_string(b.d) + "," + std::to_string(b.e) + ")";
}

inline int curve_pairing(const Geometry& g, BasisIndex divisor, CurveClass beta) {
    require_valid(g, divisor);
    if (divisor.codim() != 1) throw std::invalid_argument("curve_pairing needs a divisor, got " + to_string(divisor));
    return divisor.family == Family::H ? beta.d : beta.e;
}

/// Expected dimension -K.beta + n - 3 + N of the N-pointed moduli space.
inline int vdim(const Geometry& g, CurveClass beta, int num_points) {
    const int n = g.n();
    const int anticanonical = g.is_blowup() ? (n + 1) * beta.d - (n - 1) * beta.e : (n + 1) * beta.d;
    return anticanonical + n - 3 + num_points;
}

/// Membership in the cone spanned by H'-E' and E' (or d >= 0 on P^n).
inline bool is_effective(const Geometry& g, CurveClass beta) {
    if (!g.is_blowup()) return beta.e == 0 && beta.d >= 0;
    if (beta.is_zero()) return true;
    if (beta.d > 0) return beta.e <= beta.d;
    return beta.d == 0 && beta.e < 0;
}

/// Pairing with the ample class 2H - E (H on P^n); positive on nonzero
/// effective classes and additive.
inline int mass(const Geometry& g, CurveClass beta) {
    return g.is_blowup() ? 2 * beta.d - beta.e : beta.d;
}

/// Ordered pairs (b1, b2), both nonzero and effective, with b1 + b2 = beta.
inline std::vector<std::pair<CurveClass, CurveClass>> splittings(const Geometry& g, CurveClass beta) {
    std::vector<std::pair<CurveClass, CurveClass>> out;
    if (!g.is_blowup()) {
        for (int d1 = 1; d1 < beta.d; ++d1) out.push_back({{d1, 0}, {beta.d - d1, 0}});
        return out;
    }
    for (int d1 = 0; d1 <= beta.d; ++d1) {
        // b2 = beta - b1 effective forces e - e1 <= d - d1.
        for (int e1 = beta.e - beta.d + d1; e1 <= d1; ++e1) {
            const CurveClass b1{d1, e1};
            const CurveClass b2 = beta - b1;
            if (b1.is_zero() || b2.is_zero()) continue;
            if (is_effective(g, b1) && is_effective(g, b2)) out.push_back({b1, b2});
        }
    }
    return out;
}

/// gamma = sign * divisor . rest, with no remainder.
struct Decomposition {
    BasisIndex divisor;
    BasisIndex rest;
    int sign = 1;
};

inline Decomposition decompose(const Geometry& g, BasisIndex gamma) {
    require_valid(g, gamma);
    if (gamma.codim() < 2) throw std::invalid_argument("decompose needs codim >= 2, got " + to_string(gamma));
    if (gamma.family == Family::H) return {BasisIndex::H(1), BasisIndex::H(gamma.level - 1), 1};
    return {BasisIndex::E(1), BasisIndex::E(gamma.level - 1), -1};
}

/// Every way to write gamma as +-(divisor . basis element). On the blow-up the
/// point class also factors as -E.E_{n-1}.
inline std::vector<Decomposition> all_decompositions(const Geometry& g, BasisIndex gamma) {
    std::vector<Decomposition> out{decompose(g, gamma)};
    if (g.is_blowup() && gamma == point_class(g))
        out.push_back({BasisIndex::E(1), BasisIndex::E(g.n() - 1), -1});
    return out;
}

}  // namespace gwb
