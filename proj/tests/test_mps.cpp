#include "doctest.h"

#include "mirlab/errors.hpp"
#include "mirlab/mps.hpp"

#include <sstream>

using namespace mirlab;

namespace {

std::string fixture(const std::string& name) { return std::string(MIRLAB_TEST_DATA) + "/" + name; }

GeneralMip parse_text(const std::string& text, MpsFormat format = MpsFormat::Free) {
    std::istringstream in(text);
    return parse_mps(in, format);
}

} // namespace

TEST_CASE("minimal one-row file") {
    const auto mip = read_mps(fixture("minimal.mps"));
    CHECK(mip.name == "MINIMAL");
    CHECK(mip.num_rows() == 1);
    CHECK(mip.num_cols() == 1);
    CHECK(mip.coefficients(0, 0) == 2.0);
    CHECK(mip.rhs(0) == 3.0);
    CHECK(mip.senses[0] == RowSense::Less);
    CHECK(mip.cost(0) == -1.0);
    CHECK(mip.lower(0) == 0.0);
    CHECK(mip.upper(0) == kInf);
    CHECK(mip.integer[0] == 0);
    CHECK_FALSE(mip.maximize);
    CHECK(mip.row_names[0] == "LIM1");
    CHECK(mip.col_names[0] == "X1");
}

TEST_CASE("RANGES is rejected") {
    CHECK_THROWS_AS(read_mps(fixture("ranges.mps")), UnsupportedFeature);
    try {
        read_mps(fixture("ranges.mps"));
    } catch (const UnsupportedFeature& e) {
        CHECK(std::string(e.what()).find("line 9") != std::string::npos);
        CHECK(std::string(e.what()).find("RANGES") != std::string::npos);
    }
}

TEST_CASE("BV marks a binary column that becomes a bound row") {
    const auto mip = read_mps(fixture("binary.mps"));
    REQUIRE(mip.num_cols() == 2);
    CHECK(mip.integer[0] == 1);
    CHECK(mip.integer[1] == 0);
    CHECK(mip.upper(0) == 1.0);
    CHECK(mip.upper(1) == 2.0);
    CHECK(mip.senses[0] == RowSense::Greater);
    CHECK(mip.rhs(0) == 0.5);
    const auto inst = to_standard_form(mip);
    CHECK(inst.num_int_vars() == 1);
    CHECK(inst.num_rows() == 3);  // the cover row plus two bound rows
    CHECK(inst.int_upper_bounds()(0) == 1.0);
    bool found = false;
    for (const auto& meta : inst.row_meta) found = found || (meta.bound_of && *meta.bound_of == 0);
    CHECK(found);
}

TEST_CASE("free columns are rejected with a line number") {
    CHECK_THROWS_AS(read_mps(fixture("free_column.mps")), UnsupportedFeature);
    try {
        read_mps(fixture("free_column.mps"));
    } catch (const UnsupportedFeature& e) {
        CHECK(std::string(e.what()).find("line 11") != std::string::npos);
    }
    CHECK_THROWS_AS(read_mps(fixture("fr_column.mps")), UnsupportedFeature);
    const auto mip = read_mps(fixture("mi_then_lo.mps"));
    CHECK(mip.lower(1) == 0.0);
}

TEST_CASE("fixed format keeps spaces inside names") {
    const auto mip = read_mps(fixture("fixed_spaces.mps"), MpsFormat::Fixed);
    CHECK(mip.name == "FIXED SPACES");
    REQUIRE(mip.num_rows() == 3);
    REQUIRE(mip.num_cols() == 3);
    CHECK(mip.row_names == std::vector<std::string>{"LIM 1", "LIM 2", "MYEQN"});
    CHECK(mip.col_names == std::vector<std::string>{"X ONE", "X TWO", "Y"});
    Matrix expected(3, 3);
    expected << 1, 1, 0,
                1, 0, 0,
                0, -1, 1;
    CHECK(mip.coefficients == expected);
    CHECK(mip.rhs == Eigen::Vector3d(4, 1, 7));
    CHECK(mip.cost == Eigen::Vector3d(1, 2, -1));
    CHECK(mip.integer == std::vector<char>{1, 1, 0});
    CHECK(mip.upper(0) == 4.0);
    CHECK(mip.upper(1) == kInf);
    CHECK(mip.upper(2) == 9.0);
    CHECK(mip.senses == std::vector<RowSense>{RowSense::Less, RowSense::Greater, RowSense::Equal});
}

TEST_CASE("free format with objective sense and comments") {
    const auto mip = read_mps(fixture("free_max.mps"));
    CHECK(mip.maximize);
    CHECK(mip.name == "knap");
    REQUIRE(mip.num_cols() == 2);
    CHECK(mip.integer == std::vector<char>{1, 1});
    CHECK(mip.cost == Eigen::Vector2d(5, 4));
    CHECK(mip.coefficients(0, 1) == 2.0);
    CHECK(mip.rhs(0) == 7.0);
    CHECK(mip.upper(0) == 2.0);
    CHECK(mip.upper(1) == kInf);
    const auto inst = to_standard_form(mip);
    CHECK(inst.negated_objective);
}

TEST_CASE("objective sense on the header line") {
    const auto mip = parse_text("NAME t\nOBJSENSE MAX\nROWS\n N o\n L c\nCOLUMNS\n x o 1 c 1\nRHS\n c 1\nENDATA\n");
    CHECK(mip.maximize);
}

TEST_CASE("malformed input reports the line") {
    try {
        read_mps(fixture("bad_number.mps"));
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 6);
    }
    CHECK_THROWS_AS(parse_text("NAME t\nROWS\n N o\n X c\nENDATA\n"), ParseError);
    CHECK_THROWS_AS(parse_text("NAME t\nROWS\n N o\n L c\nCOLUMNS\n x o 1 d 1\nENDATA\n"), ParseError);
    CHECK_THROWS_AS(parse_text("NAME t\nROWS\n N o\n L c\nCOLUMNS\n x o 1\nBOUNDS\n ZZ BND x 1\nENDATA\n"), ParseError);
    CHECK_THROWS_AS(parse_text("NAME t\nROWS\n N o\n L c\nCOLUMNS\n x o 1\n"), ParseError);
    CHECK_THROWS_AS(parse_text("NAME t\nROWS\n N o\n L c\n L c\nENDATA\n"), ParseError);
    CHECK_THROWS_AS(parse_text("NAME t\nBOGUS\nENDATA\n"), ParseError);
    CHECK_THROWS_AS(
        parse_text("NAME t\nROWS\n N o\n L c\nCOLUMNS\n x o 1\n y o 1\n x c 1\nRHS\nENDATA\n"), ParseError);
    CHECK_THROWS_AS(read_mps(fixture("does_not_exist.mps")), Error);
}

TEST_CASE("negative upper bound without a lower bound is rejected") {
    CHECK_THROWS_AS(parse_text("NAME t\nROWS\n N o\n L c\nCOLUMNS\n x o 1 c 1\nBOUNDS\n UP BND x -1\nENDATA\n"),
                    UnsupportedFeature);
}

TEST_CASE("written files parse back to the same model") {
    for (const char* name : {"binary.mps", "free_max.mps", "minimal.mps"}) {
        const auto mip = read_mps(fixture(name));
        const auto back = parse_text(write_mps(mip));
        CHECK(back.coefficients == mip.coefficients);
        CHECK(back.rhs == mip.rhs);
        CHECK(back.cost == mip.cost);
        CHECK(back.lower == mip.lower);
        CHECK(back.upper == mip.upper);
        CHECK(back.integer == mip.integer);
        CHECK(back.senses == mip.senses);
        CHECK(back.maximize == mip.maximize);
        CHECK(back.col_names == mip.col_names);
    }
}

TEST_CASE("names with spaces cannot be written in free format") {
    const auto mip = read_mps(fixture("fixed_spaces.mps"), MpsFormat::Fixed);
    CHECK_THROWS_AS(write_mps(mip), UnsupportedFeature);
}
