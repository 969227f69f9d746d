#include "gwb/cli_parse.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

using namespace gwb;
using namespace gwb::cli;

TEST_CASE("class lists", "[cli]") {
    const Geometry g = Geometry::blowup(3);
    const auto c = parse_classes(g, "pt, H2,E1");
    REQUIRE(c.size() == 3);
    CHECK(c[0] == BasisIndex::H(3));
    CHECK(c[1] == BasisIndex::H(2));
    CHECK(c[2] == BasisIndex::E(1));
    CHECK(parse_classes(g, "").empty());
    CHECK_THROWS_AS(parse_classes(g, "E3"), ParseError);
    CHECK_THROWS_AS(parse_classes(Geometry::plain(3), "E1"), ParseError);
    CHECK_THROWS_AS(parse_classes(g, "X1"), ParseError);
}

TEST_CASE("curve classes", "[cli]") {
    CHECK(parse_beta(Space::blowup, "3,2") == CurveClass{3, 2});
    CHECK(parse_beta(Space::blowup, "1,-1") == CurveClass{1, -1});
    CHECK(parse_beta(Space::plain, "4") == CurveClass{4, 0});
    CHECK_THROWS_AS(parse_beta(Space::plain, "4,1"), ParseError);
    CHECK_THROWS_AS(parse_beta(Space::blowup, "a,1"), ParseError);
    CHECK_THROWS_AS(parse_beta(Space::blowup, "1,2,3"), ParseError);
}

TEST_CASE("scalars", "[cli]") {
    CHECK(parse_int("-12") == -12);
    CHECK_THROWS_AS(parse_int("12x"), ParseError);
    CHECK(parse_space("plain") == Space::plain);
    CHECK_THROWS_AS(parse_space("blow"), ParseError);
    CHECK(split("a, b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
}

TEST_CASE("config files", "[cli]") {
    const auto path = std::filesystem::temp_directory_path() / "gwb_cli_parse_test.cfg";
    {
        std::ofstream out(path);
        out << "# defaults\nspace = plain\nn=3  # dimension\n\ncache_path=/tmp/x.jsonl\n";
    }
    const auto cfg = read_config(path);
    CHECK(cfg.at("space") == "plain");
    CHECK(cfg.at("n") == "3");
    CHECK(cfg.at("cache_path") == "/tmp/x.jsonl");
    {
        std::ofstream out(path);
        out << "colour=blue\n";
    }
    CHECK_THROWS_AS(read_config(path), ParseError);
    CHECK_THROWS_AS(read_config(path.string() + ".missing"), ParseError);
}
