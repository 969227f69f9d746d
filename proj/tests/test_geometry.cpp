#include "gwb/geometry.hpp"

#include <catch_amalgamated.hpp>

#include <map>
#include <utility>

using namespace gwb;

namespace {

// Symbolic model of the ring: a basis element is c * H^p * E^q with
// H_k = H^k and E_k = -(-E)^k. Degree of a top monomial: H^n = 1,
// E^n = (-1)^{n-1}, mixed monomials vanish.
struct Monomial {
    long coeff;
    int p;
    int q;
};

Monomial as_monomial(BasisIndex b) {
    if (b.family == Family::H) return {1, b.level, 0};
    return {b.level % 2 == 0 ? -1L : 1L, 0, b.level};
}

long top_degree(int n, Monomial m) {
    if (m.p + m.q != n) return 0;
    if (m.q == 0) return m.coeff;
    if (m.p == 0) return m.coeff * (n % 2 == 1 ? 1 : -1);
    return 0;
}

Monomial times(Monomial a, Monomial b) { return {a.coeff * b.coeff, a.p + b.p, a.q + b.q}; }

}  // namespace

TEST_CASE("cup products match the symbolic ring model", "[geometry]") {
    for (int n = 2; n <= 5; ++n) {
        const Geometry g = Geometry::blowup(n);
        for (BasisIndex a : basis(g))
            for (BasisIndex b : basis(g))
                for (BasisIndex c : basis(g)) {
                    const ExactInteger lib = degree(cup(cup(CohClass(g, a), CohClass(g, b)), CohClass(g, c)));
                    const long want = top_degree(n, times(times(as_monomial(a), as_monomial(b)), as_monomial(c)));
                    INFO("n=" << n << " " << to_string(a) << "." << to_string(b) << "." << to_string(c));
                    REQUIRE(lib == want);
                }
    }
}

TEST_CASE("cup examples", "[geometry]") {
    const Geometry p2 = Geometry::blowup(2), b3 = Geometry::blowup(3);
    CHECK(cup(CohClass(p2, BasisIndex::H(1)), CohClass(p2, BasisIndex::H(1))) == CohClass(p2, BasisIndex::H(2)));
    CHECK(cup(CohClass(b3, BasisIndex::E(1)), CohClass(b3, BasisIndex::E(1))) ==
          ExactInteger(-1) * CohClass(b3, BasisIndex::E(2)));
    CHECK(cup(CohClass(b3, BasisIndex::E(1)), CohClass(b3, BasisIndex::E(2))) ==
          ExactInteger(-1) * CohClass(b3, BasisIndex::H(3)));
    CHECK(cup(CohClass(b3, BasisIndex::H(1)), CohClass(b3, BasisIndex::E(1))).is_zero());
    CHECK(cup(CohClass(b3, BasisIndex::H(2)), CohClass(b3, BasisIndex::H(2))).is_zero());
}

TEST_CASE("degree examples", "[geometry]") {
    const Geometry b3 = Geometry::blowup(3);
    CHECK(degree(CohClass(b3, BasisIndex::H(3))) == 1);
    CHECK(degree(CohClass(b3, BasisIndex::E(1))) == 0);
    const CohClass e(b3, BasisIndex::E(1));
    CHECK(degree(cup(cup(e, e), e)) == 1);
    const Geometry b4 = Geometry::blowup(4);
    const CohClass e4(b4, BasisIndex::E(1));
    CHECK(degree(cup(cup(e4, e4), cup(e4, e4))) == -1);
}

TEST_CASE("pairing examples", "[geometry]") {
    CHECK(pairing(Geometry::blowup(2), BasisIndex::H(1), BasisIndex::H(1)) == 1);
    CHECK(pairing(Geometry::blowup(3), BasisIndex::E(1), BasisIndex::E(2)) == -1);
    CHECK(pairing(Geometry::blowup(3), BasisIndex::H(2), BasisIndex::E(1)) == 0);
    CHECK(pairing(Geometry::plain(3), BasisIndex::H(0), BasisIndex::H(3)) == 1);
}

TEST_CASE("diagonal pairs", "[geometry]") {
    const auto d = diagonal_pairs(Geometry::blowup(2));
    REQUIRE(d.size() == 4);
    std::map<std::pair<BasisIndex, BasisIndex>, int> got;
    for (const auto& t : d) got[{t.left, t.right}] = t.sign;
    CHECK(got.at({BasisIndex::H(0), BasisIndex::H(2)}) == 1);
    CHECK(got.at({BasisIndex::H(1), BasisIndex::H(1)}) == 1);
    CHECK(got.at({BasisIndex::H(2), BasisIndex::H(0)}) == 1);
    CHECK(got.at({BasisIndex::E(1), BasisIndex::E(1)}) == -1);
    CHECK(diagonal_pairs(Geometry::plain(2)).size() == 3);
}

TEST_CASE("diagonal reproduces every basis element", "[geometry][property]") {
    for (int n = 2; n <= 5; ++n)
        for (Space sp : {Space::plain, Space::blowup}) {
            const Geometry g(sp, n);
            for (BasisIndex x : basis(g)) {
                CohClass rebuilt(g);
                for (const auto& t : diagonal_pairs(g))
                    rebuilt += ExactInteger(t.sign * pairing(g, x, t.left)) * CohClass(g, t.right);
                REQUIRE(rebuilt == CohClass(g, x));
            }
        }
}

TEST_CASE("cup is commutative and associative", "[geometry][property]") {
    for (int n = 2; n <= 5; ++n)
        for (Space sp : {Space::plain, Space::blowup}) {
            const Geometry g(sp, n);
            const auto all = basis(g);
            for (BasisIndex a : all)
                for (BasisIndex b : all) {
                    const CohClass ca(g, a), cb(g, b);
                    REQUIRE(cup(ca, cb) == cup(cb, ca));
                    for (BasisIndex c : all) {
                        const CohClass cc(g, c);
                        REQUIRE(cup(cup(ca, cb), cc) == cup(ca, cup(cb, cc)));
                    }
                }
        }
}

TEST_CASE("curve pairing", "[geometry]") {
    const Geometry g = Geometry::blowup(2);
    CHECK(curve_pairing(g, BasisIndex::H(1), {3, 2}) == 3);
    CHECK(curve_pairing(g, BasisIndex::E(1), {0, -1}) == -1);
    CHECK(curve_pairing(g, BasisIndex::E(1), {1, 1}) == 1);
}

TEST_CASE("virtual dimension", "[geometry]") {
    CHECK(vdim(Geometry::blowup(2), {3, 2}, 6) == 12);
    CHECK(vdim(Geometry::blowup(3), {1, 0}, 2) == 6);
    CHECK(vdim(Geometry::plain(2), {1, 0}, 3) == 5);
}

TEST_CASE("effective cone and mass", "[geometry]") {
    const Geometry g = Geometry::blowup(2);
    CHECK(is_effective(g, {1, 1}));
    CHECK_FALSE(is_effective(g, {1, 2}));
    CHECK(is_effective(g, {0, -1}));
    CHECK_FALSE(is_effective(g, {0, 1}));
    CHECK_FALSE(is_effective(g, {-1, -3}));
    CHECK(mass(g, {1, 0}) == 2);
    CHECK(mass(g, {0, -1}) == 1);
    CHECK(mass(g, {1, 1}) == 1);
    CHECK(mass(Geometry::plain(2), {4, 0}) == 4);
}

TEST_CASE("splittings", "[geometry]") {
    const Geometry g = Geometry::blowup(2);
    CHECK(splittings(g, {1, 1}).empty());
    auto s = splittings(g, {2, 0});
    std::vector<std::pair<CurveClass, CurveClass>> want{
        {{0, -1}, {2, 1}}, {{0, -2}, {2, 2}}, {{1, -1}, {1, 1}}, {{1, 0}, {1, 0}},
        {{1, 1}, {1, -1}}, {{2, 1}, {0, -1}}, {{2, 2}, {0, -2}}};
    std::sort(s.begin(), s.end());
    std::sort(want.begin(), want.end());
    CHECK(s == want);
    const auto p = splittings(Geometry::plain(2), {2, 0});
    REQUIRE(p.size() == 1);
    CHECK(p[0].first == CurveClass{1, 0});
}

TEST_CASE("decompose", "[geometry]") {
    const Geometry g = Geometry::blowup(4);
    auto d = decompose(g, BasisIndex::H(2));
    CHECK(d.divisor == BasisIndex::H(1));
    CHECK(d.rest == BasisIndex::H(1));
    CHECK(d.sign == 1);
    d = decompose(g, BasisIndex::E(2));
    CHECK(d.divisor == BasisIndex::E(1));
    CHECK(d.rest == BasisIndex::E(1));
    CHECK(d.sign == -1);
    d = decompose(g, BasisIndex::E(3));
    CHECK(d.rest == BasisIndex::E(2));
    CHECK(d.sign == -1);
    CHECK_THROWS_AS(decompose(g, BasisIndex::H(1)), std::invalid_argument);
    for (int n = 2; n <= 5; ++n) {
        const Geometry b = Geometry::blowup(n);
        for (BasisIndex x : basis(b)) {
            if (x.codim() < 2) continue;
            for (const auto& dec : all_decompositions(b, x))
                REQUIRE(ExactInteger(dec.sign) * cup(CohClass(b, dec.divisor), CohClass(b, dec.rest)) ==
                        CohClass(b, x));
        }
    }
}

TEST_CASE("geometry validation", "[geometry]") {
    CHECK_THROWS(Geometry::blowup(1));
    CHECK_FALSE(is_valid(Geometry::plain(3), BasisIndex::E(1)));
    CHECK_FALSE(is_valid(Geometry::blowup(3), BasisIndex::E(3)));
    CHECK(Geometry::blowup(3).basis_size() == 6);
    CHECK(Geometry::plain(3).basis_size() == 4);
    CHECK_THROWS(CohClass(Geometry::blowup(2)) + CohClass(Geometry::blowup(3)));
}
