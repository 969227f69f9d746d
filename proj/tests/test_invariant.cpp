#include "gwb/invariant.hpp"

#include <catch_amalgamated.hpp>

#include <vector>

using namespace gwb;

namespace {

std::vector<BasisIndex> repeat(BasisIndex b, int k) { return std::vector<BasisIndex>(static_cast<std::size_t>(k), b); }

}  // namespace

TEST_CASE("canonicalize strips a divisor", "[invariant]") {
    const Geometry g = Geometry::blowup(2);
    auto cls = repeat(BasisIndex::H(2), 5);
    cls.push_back(BasisIndex::H(1));
    const EvalResult r = canonicalize(g, {2, 0}, cls);
    REQUIRE_FALSE(r.is_value());
    CHECK(r.value == 2);
    CHECK(*r.key == make_key(g, {2, 0}, repeat(BasisIndex::H(2), 5)));
}

TEST_CASE("canonicalize returns zero for ineffective classes and H0", "[invariant]") {
    const Geometry g = Geometry::blowup(2);
    const EvalResult r = canonicalize(g, {1, 2}, repeat(BasisIndex::H(2), 3));
    REQUIRE(r.is_value());
    CHECK(r.value == 0);
    const std::vector<BasisIndex> with_h0{BasisIndex::H(0), BasisIndex::H(2), BasisIndex::H(2)};
    const EvalResult f = canonicalize(g, {1, 0}, with_h0);
    REQUIRE(f.is_value());
    CHECK(f.value == 0);
}

TEST_CASE("canonicalize applies grading", "[invariant]") {
    const Geometry g = Geometry::blowup(2);
    const EvalResult r = canonicalize(g, {3, 2}, repeat(BasisIndex::H(2), 5));
    REQUIRE(r.is_value());
    CHECK(r.value == 0);
}

TEST_CASE("classical triples", "[invariant]") {
    CHECK(classical_triple(Geometry::blowup(2), BasisIndex::H(1), BasisIndex::H(1), BasisIndex::H(0)) == 1);
    const Geometry b3 = Geometry::blowup(3);
    CHECK(classical_triple(b3, BasisIndex::E(1), BasisIndex::E(1), BasisIndex::E(1)) == 1);
    CHECK(classical_triple(b3, BasisIndex::H(1), BasisIndex::E(1), BasisIndex::E(1)) == 0);
    const std::vector<BasisIndex> t{BasisIndex::E(1), BasisIndex::E(2), BasisIndex::H(0)};
    const EvalResult r = canonicalize(b3, {0, 0}, t);
    REQUIRE(r.is_value());
    CHECK(r.value == -1);
}

TEST_CASE("initial three-point data", "[invariant]") {
    const Geometry b2 = Geometry::blowup(2), b3 = Geometry::blowup(3);
    CHECK(initial_three_point(b2, BasisIndex::H(2), BasisIndex::H(2), BasisIndex::H(1), {1, 0}) == 1);
    CHECK(initial_three_point(b3, BasisIndex::E(2), BasisIndex::E(2), BasisIndex::E(1), {0, -1}) == -1);
    CHECK(initial_three_point(b2, BasisIndex::H(2), BasisIndex::H(1), BasisIndex::E(1), {1, 1}) == 1);
    CHECK(initial_three_point(b2, BasisIndex::H(2), BasisIndex::H(2), BasisIndex::E(1), {1, 0}) == 0);
    CHECK(initial_three_point(b3, BasisIndex::H(3), BasisIndex::H(3), BasisIndex::H(1), {2, 0}) == 0);
    CHECK(initial_three_point(b2, BasisIndex::E(1), BasisIndex::H(2), BasisIndex::H(1), {1, 1}) == 1);
}

TEST_CASE("three-point queries with a divisor resolve to initial data", "[invariant]") {
    const Geometry b3 = Geometry::blowup(3);
    const std::vector<BasisIndex> t{BasisIndex::E(1), BasisIndex::E(2), BasisIndex::E(2)};
    const EvalResult r = canonicalize(b3, {0, -1}, t);
    REQUIRE(r.is_value());
    CHECK(r.value == -1);
}

TEST_CASE("lifting queries with fewer than three insertions", "[invariant]") {
    const Geometry b3 = Geometry::blowup(3);
    const EvalResult a = canonicalize(b3, {1, 0}, repeat(BasisIndex::H(3), 2));
    REQUIRE(a.is_value());
    CHECK(a.value == 1);
    const EvalResult b = canonicalize(b3, {1, 1}, repeat(BasisIndex::E(2), 2));
    REQUIRE(b.is_value());
    CHECK(b.value == 1);
    const EvalResult c = canonicalize(b3, {1, 2}, std::vector<BasisIndex>{});
    REQUIRE(c.is_value());
    CHECK(c.value == 0);
}

TEST_CASE("multiset keys ignore insertion order", "[invariant][property]") {
    const Geometry g = Geometry::blowup(3);
    const std::vector<BasisIndex> a{BasisIndex::E(2), BasisIndex::H(3), BasisIndex::H(2)};
    const std::vector<BasisIndex> b{BasisIndex::H(2), BasisIndex::E(2), BasisIndex::H(3)};
    CHECK(make_key(g, {2, 1}, a) == make_key(g, {2, 1}, b));
    CHECK(InvariantKeyHash{}(make_key(g, {2, 1}, a)) == InvariantKeyHash{}(make_key(g, {2, 1}, b)));
    CHECK(make_key(g, {2, 1}, a).num_points() == 3);
}

TEST_CASE("canonical keys satisfy their definition", "[invariant][property]") {
    const Geometry g = Geometry::blowup(2);
    const auto key = make_key(g, {3, 2}, repeat(BasisIndex::H(2), 6));
    CHECK(is_canonical(key));
    CHECK_FALSE(is_canonical(make_key(g, {3, 2}, repeat(BasisIndex::H(2), 5))));
    auto with_div = repeat(BasisIndex::H(2), 5);
    with_div.push_back(BasisIndex::H(1));
    with_div.push_back(BasisIndex::H(1));
    CHECK_FALSE(is_canonical(make_key(g, {3, 2}, with_div)));
}
