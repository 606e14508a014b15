#include "gcs/errors.hpp"
#include "gcs/terrain.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace gcs;

namespace {

const GeodeticPosition kOrigin{51.03, 13.73, 0.0};

/// Heights of the plane a + b*east + c*north sampled on the grid nodes.
HeightField plane(double a, double b, double c, double cell, std::size_t cols, std::size_t rows) {
    std::vector<double> h;
    for (std::size_t r = 0; r < rows; ++r) {
        const double north = cell * static_cast<double>(rows - 1 - r);
        for (std::size_t col = 0; col < cols; ++col) {
            h.push_back(a + b * cell * static_cast<double>(col) + c * north);
        }
    }
    return HeightField(kOrigin, cell, cols, rows, h);
}

std::string grid_text(const std::string &body) {
    return "ncols 3\nnrows 2\norigin_lat 51.03\norigin_lon 13.73\ncellsize_m 2\n" + body;
}

int parse_error_line(const std::string &text) {
    std::istringstream in(text);
    try {
        load_ascii_grid(in);
    } catch (const ParseError &e) {
        return static_cast<int>(e.line());
    }
    return -1;
}

} // namespace

TEST_CASE("bilinear interpolation reproduces planes") {
    const auto field = plane(200.0, 0.3, -0.1, 2.5, 9, 7);
    testgen::Rng rng(1);
    for (int i = 0; i < 500; ++i) {
        const double e = rng.uniform(0.0, field.width_m());
        const double n = rng.uniform(0.0, field.depth_m());
        const auto h = field.height_at_local(e, n);
        REQUIRE(h.has_value());
        CHECK(*h == doctest::Approx(200.0 + 0.3 * e - 0.1 * n).epsilon(1e-12));
    }
}

TEST_CASE("node values and cell centres") {
    // Rows northernmost first.
    const HeightField f(kOrigin, 10.0, 2, 2, {30.0, 40.0, 10.0, 20.0});
    CHECK(*f.height_at_local(0.0, 0.0) == 10.0);
    CHECK(*f.height_at_local(10.0, 0.0) == 20.0);
    CHECK(*f.height_at_local(0.0, 10.0) == 30.0);
    CHECK(*f.height_at_local(10.0, 10.0) == 40.0);
    CHECK(*f.height_at_local(5.0, 5.0) == doctest::Approx(25.0));
    CHECK(*f.height_at_local(2.5, 7.5) == doctest::Approx(10.0 + 2.5 + 15.0));
    CHECK(f.min_height() == 10.0);
    CHECK(f.max_height() == 40.0);
}

TEST_CASE("geodetic lookup uses the grid frame") {
    const auto field = plane(215.0, 0.0, 0.38, 1.0, 101, 251);
    const auto p = field.local_to_geodetic(40.0, 100.0);
    CHECK(field.height_at(p) == doctest::Approx(215.0 + 38.0).epsilon(1e-9));
    CHECK(height_at(field, p) == field.height_at(p));
    GeodeticPosition high = p;
    high.altitude_m = 5000.0;
    CHECK(field.height_at(high) == doctest::Approx(field.height_at(p)).epsilon(1e-12));
}

TEST_CASE("outside the footprint") {
    const auto field = plane(0.0, 0.0, 0.0, 1.0, 11, 11);
    CHECK_FALSE(field.height_at_local(-0.5, 5.0).has_value());
    CHECK_FALSE(field.height_at_local(5.0, 10.5).has_value());
    const auto outside = field.local_to_geodetic(20.0, 5.0);
    CHECK_THROWS_AS(field.height_at(outside), OutOfBoundsError);
    CHECK_FALSE(field.try_height_at(outside).has_value());
    CHECK(field.height_at_local(10.0, 10.0).has_value());
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(HeightField(kOrigin, 1.0, 1, 2, {0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(HeightField(kOrigin, 0.0, 2, 2, {0.0, 0.0, 0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(HeightField(kOrigin, 1.0, 2, 2, {0.0, 0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(HeightField(kOrigin, 1.0, 2, 2, {0.0, 0.0, std::nan(""), 0.0}), ValidationError);
}

TEST_CASE("ascii grid parsing") {
    std::istringstream ok(grid_text("1 2 3\n4 5 6\n\n"));
    const auto f = load_ascii_grid(ok);
    CHECK(f.n_cols() == 3);
    CHECK(f.n_rows() == 2);
    CHECK(f.cell_size_m() == 2.0);
    CHECK(f.node(0, 2) == 3.0);
    CHECK(*f.height_at_local(0.0, 0.0) == 4.0);

    CHECK(parse_error_line(grid_text("1 2 3\n")) == 7);
    CHECK(parse_error_line(grid_text("1 2 3\n4 5\n")) == 7);
    CHECK(parse_error_line(grid_text("1 2 x\n4 5 6\n")) == 6);
    CHECK(parse_error_line(grid_text("1 2 3\n4 5 6\n7\n")) == 8);
    CHECK(parse_error_line("nrows 2\n") == 1);
    CHECK(parse_error_line("ncols 3\nnrows 2\norigin_lat 95\norigin_lon 13\ncellsize_m 1\n1 2 3\n1 2 3\n") == 3);

    std::istringstream bad(grid_text("1 2 x\n4 5 6\n"));
    try {
        load_ascii_grid(bad);
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(e.column() == 5);
    }
}

TEST_CASE("save and load round trip") {
    testgen::Rng rng(4);
    std::vector<double> h;
    for (int i = 0; i < 12 * 9; ++i) {
        h.push_back(std::round(rng.uniform(200.0, 320.0) * 1e6) / 1e6);
    }
    const HeightField f({51.0312345, 13.7354321, 0.0}, 1.5, 12, 9, h);
    std::stringstream s;
    save_ascii_grid(f, s);
    const auto g = load_ascii_grid(s);
    CHECK(g.n_cols() == f.n_cols());
    CHECK(g.n_rows() == f.n_rows());
    CHECK(g.cell_size_m() == f.cell_size_m());
    CHECK(g.origin() == f.origin());
    CHECK(g.heights() == f.heights());
}

TEST_CASE("synthetic study field") {
    SyntheticFieldSpec spec;
    spec.base_m = 215.0;
    spec.slope_m = 95.0;
    spec.southwest_origin = kOrigin;
    const auto f = synthetic_field(spec);
    CHECK(f.width_m() == 100.0);
    CHECK(f.depth_m() == 250.0);
    CHECK(f.min_height() == 215.0);
    CHECK(f.max_height() == doctest::Approx(310.0));
    CHECK(*f.height_at_local(50.0, 125.0) == doctest::Approx(262.5));
}
