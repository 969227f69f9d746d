#include "gwb/enumerative.hpp"

#include <catch_amalgamated.hpp>

#include <vector>

using namespace gwb;

namespace {

// Kontsevich recursion written out directly, kept separate from the library copy.
std::vector<mpz_class> plane_counts(int dmax) {
    std::vector<mpz_class> n(static_cast<std::size_t>(dmax) + 1, 0);
    n[1] = 1;
    for (int d = 2; d <= dmax; ++d) {
        mpz_class sum = 0;
        for (int a = 1; a < d; ++a) {
            const int b = d - a;
            mpz_class c1, c2;
            mpz_bin_uiui(c1.get_mpz_t(), 3 * d - 4, 3 * a - 2);
            mpz_bin_uiui(c2.get_mpz_t(), 3 * d - 4, 3 * a - 1);
            sum += n[a] * n[b] * a * a * b * (b * c1 - a * c2);
        }
        n[d] = sum;
    }
    return n;
}

}  // namespace

TEST_CASE("curve counts", "[enumerative]") {
    Engine engine;
    CHECK(curve_count(engine, {2, 4, 2, std::vector<int>(9, 2)}) == 96);
    CHECK(curve_count(engine, {2, 5, 3, std::vector<int>(11, 2)}) == 640);
    CHECK(curve_count(engine, {3, 7, 3, std::vector<int>(11, 3)}) == 620);
}

TEST_CASE("curve_count rejects exactly the queries failing the dimension condition", "[enumerative][property]") {
    Engine engine;
    for (int n = 2; n <= 3; ++n)
        for (int d = 1; d <= 3; ++d)
            for (int e = 0; e < d; ++e)
                for (int k = 0; k <= 10; ++k) {
                    const CountQuery q{n, d, e, std::vector<int>(static_cast<std::size_t>(k), n)};
                    const bool ok = (n - 1) * k == d * (n + 1) - e * (n - 1) + n - 3;
                    CHECK(satisfies_dimension(q) == ok);
                    if (!ok) CHECK_THROWS_AS(curve_count(engine, q), DimensionMismatch);
                }
    CHECK_THROWS_AS(curve_count(engine, {2, 1, 0, {3, 2}}), std::invalid_argument);
}

TEST_CASE("Kontsevich oracle", "[enumerative]") {
    const auto k = kontsevich_oracle(7);
    const std::vector<ExactInteger> published{1, 1, 12, 620, 87304, 26312976, ExactInteger("14616808192")};
    CHECK(k == published);
    const auto direct = plane_counts(12);
    const auto lib = kontsevich_oracle(12);
    for (int d = 1; d <= 12; ++d) CHECK(lib[static_cast<std::size_t>(d - 1)] == direct[static_cast<std::size_t>(d)]);
}

TEST_CASE("engine agrees with the Kontsevich recursion on the plane", "[enumerative][property]") {
    Engine engine;
    const auto direct = plane_counts(7);
    for (int d = 1; d <= 7; ++d)
        CHECK(point_invariant(engine, Geometry::plain(2), {d, 0}, 3 * d - 1) == direct[static_cast<std::size_t>(d)]);
}

TEST_CASE("expected dimension and genus", "[enumerative]") {
    CHECK(expected_dim_p2(5, 3) == 11);
    CHECK(expected_dim_p2(1, 0) == 2);
    CHECK(expected_dim_p2(4, 3) == 8);
    for (int d = 1; d <= 8; ++d)
        for (int e = 0; e < d; ++e) CHECK(expected_dim_p2(d, e) == 3 * d - 1 - e);
    const std::vector<int> two{2}, three{3}, two_two{2, 2};
    CHECK(genus_with_multiple_points(3, two) == 0);
    CHECK(genus_with_multiple_points(4, three) == 0);
    CHECK(genus_with_multiple_points(5, two_two) == 4);
}

TEST_CASE("P2-points table matches every published cell", "[enumerative][table]") {
    Engine engine;
    const Table t = emit_table(engine, make_table_spec(TableId::p2_points, 7));
    CHECK(t.cells.size() == 49);
    CHECK(diff_against_published(t).empty());
    CHECK(t.at(7, 0).value == ExactInteger("14616808192"));
}

TEST_CASE("P3-points table matches every published cell", "[enumerative][table]") {
    Engine engine;
    const Table t = emit_table(engine, make_table_spec(TableId::p3_points, 8));
    CHECK(t.cells.size() == 40);
    CHECK(diff_against_published(t).empty());
    CHECK(t.at(8, 3).value == 72528);
    for (int d = 1; d <= 8; ++d) CHECK(t.at(d, 4).value == 0);
}

TEST_CASE("P3-exceptional table in degrees up to three", "[enumerative][table]") {
    Engine engine;
    const Table t = emit_table(engine, make_table_spec(TableId::p3_exceptional, 3));
    CHECK(t.cells.size() == 21);
    CHECK(diff_against_published(t).empty());
    const std::vector<ExactInteger> d1{2925, -68, 3, 0, 1, 0, 0};
    for (int e = -3; e <= 3; ++e) CHECK(t.at(1, e).value == d1[static_cast<std::size_t>(e + 3)]);
    CHECK(t.at(2, -2).value == -35832);
    CHECK(t.at(3, -3).value == ExactInteger("25767926176"));
    CHECK(t.at(1, 3).vacuous);
}

TEST_CASE("published grids have the documented sizes", "[enumerative]") {
    CHECK(published_table(TableId::p2_points).cell_count() == 49);
    CHECK(published_table(TableId::p3_points).cell_count() == 40);
    CHECK(published_table(TableId::p3_exceptional).cell_count() == 28);
}

TEST_CASE("table formats", "[enumerative]") {
    Engine engine;
    const Table t = emit_table(engine, make_table_spec(TableId::p2_points, 3));
    const std::string csv = format_csv(t);
    CHECK(csv.rfind("e\\d,1,2,3\n0,1,1,12\n", 0) == 0);
    const std::string md = format_markdown(t);
    CHECK(md.find("0*") != std::string::npos);
    const Table back = table_from_json(table_to_json(t));
    REQUIRE(back.cells.size() == t.cells.size());
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        CHECK(back.cells[i].value == t.cells[i].value);
        CHECK(back.cells[i].vacuous == t.cells[i].vacuous);
    }
    CHECK(parse_table_id("P3-exceptional") == TableId::p3_exceptional);
    CHECK_FALSE(parse_table_id("P4").has_value());
}

TEST_CASE("row identities between tables hold", "[enumerative][property]") {
    Engine engine;
    const Report r = consistency_suite(engine, 6);
    INFO(r.to_text());
    CHECK(r.passed());
}
