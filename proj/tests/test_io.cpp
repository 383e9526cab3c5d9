#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "common.hpp"
#include "owcpark/config.hpp"
#include "owcpark/io.hpp"

using namespace owc;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "owcpark_io_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

} // namespace

TEST_CASE("csv strictness") {
    const auto p = temp_file("bad.csv");

    write_text(p, "Hs,Te,occurrence\n1.0,5.0\n");
    CHECK_THROWS_AS(load_scatter_diagram(p), ParseError);
    try {
        load_scatter_diagram(p);
    } catch (const ParseError& e) {
        CHECK(e.line_number == 2);
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }

    write_text(p, "Hs,Te,occurrence\n1.0,abc,0.1\n");
    CHECK_THROWS_AS(load_scatter_diagram(p), ParseError);

    write_text(p, "Hs,occurrence\n1.0,0.1\n");
    CHECK_THROWS_AS(load_scatter_diagram(p), ParseError);

    write_text(p, "Hs,Te,occurrence\n1.0,5.0,0.1x\n");
    CHECK_THROWS_AS(load_scatter_diagram(p), ParseError);
}

TEST_CASE("csv round trip through the same parser") {
    const auto p = temp_file("roundtrip.csv");
    const std::vector<std::vector<double>> rows{{1.0, 5.0, 0.25}, {2.5, 7.125, 1e-17}};
    write_csv(p, {"comment"}, {"Hs", "Te", "occurrence"}, rows);
    const auto t = read_csv(p, {"Hs", "Te", "occurrence"});
    REQUIRE(t.rows.size() == 2);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            CHECK(t.rows[i][j] == rows[i][j]); // %.17g preserves doubles exactly
    CHECK(t.comments.size() == 1);
}

TEST_CASE("hydro file requires the normalization declaration") {
    const auto p = temp_file("hydro.csv");
    write_text(p, "omega,A,B,Re_pe,Im_pe\n0.5,100,10,9000,-100\n1.5,120,12,8000,-120\n");
    CHECK_THROWS(load_hydro_coefficients(p));

    write_text(p, "# normalization: per-unit-amplitude\n"
                  "omega,A,B,Re_pe,Im_pe\n0.5,100,10,9000,-100\n1.5,120,12,8000,-120\n");
    const auto h = load_hydro_coefficients(p);
    CHECK(h.normalization() == HydroCoefficients::Normalization::per_unit_amplitude);
    CHECK(h.excitation(1.0, 2.0) == Complex(8500.0, -110.0) * 2.0);

    write_text(p, "# normalization: absolute\n"
                  "omega,A,B,Re_pe,Im_pe\n0.5,100,10,9000,-100\n1.5,120,12,8000,-120\n");
    const auto ha = load_hydro_coefficients(p);
    CHECK(ha.excitation(1.0, 2.0) == Complex(8500.0, -110.0));
    CHECK_THROWS_AS(ha.added_mass(2.0), std::domain_error);
}

TEST_CASE("curve table files reject non-monotone grids") {
    const auto p = temp_file("curves.csv");
    write_text(p, "phi,Ca,Ct\n0,0,0.01\n0.2,0.6,0.1\n0.1,0.3,0.05\n");
    CHECK_THROWS_AS(load_turbine_curves(p), std::invalid_argument);
    write_text(p, "phi,Cpmin\n0,-0.5\n0.3,0.2\n");
    CHECK_THROWS_AS(load_cavitation_table(p), std::invalid_argument);
}

TEST_CASE("body hydro JSON round trip") {
    const auto body = example_body(0.7854, 14.0, 4);
    const auto p = temp_file("body.json");
    save_body_hydro(p, body, 0.7854);
    double omega = 0;
    const auto loaded = load_body_hydro(p, &omega);
    CHECK(omega == 0.7854);
    CHECK(loaded.order == body.order);
    CHECK(loaded.radius == body.radius);
    CHECK(loaded.dtm == body.dtm);
    CHECK(loaded.radiated == body.radiated);
    CHECK(loaded.excitation_row == body.excitation_row);
    CHECK(loaded.mass == body.mass);
    CHECK(loaded.stiffness == body.stiffness);
    CHECK(loaded.is_pile == body.is_pile);
}

TEST_CASE("park layout file round trip") {
    const auto p = temp_file("park.json");
    const std::vector<ParkLayoutEntry> bodies{{1.5, -2.5, false}, {10.0, 4.0, true}};
    save_park_layout(p, bodies);
    const auto loaded = load_park_layout(p);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].x == 1.5);
    CHECK(loaded[0].is_pile == false);
    CHECK(loaded[1].is_pile == true);

    write_text(p, R"({"bodies": [{"x": 1, "y": 2, "kind": "buoy"}]})");
    CHECK_THROWS(load_park_layout(p));
}

TEST_CASE("interaction matrices round trip") {
    const MonochromaticWave wave(2.12, 8.0);
    const auto problem = make_example_park({Vec2(0, 0), Vec2(9, 4)}, wave, 14.0);
    const auto im = extract_interaction(problem);
    const auto p = temp_file("interaction.json");
    save_interaction_matrices(p, im, wave.omega());
    double omega = 0;
    const auto loaded = load_interaction_matrices(p, &omega);
    CHECK(omega == wave.omega());
    CHECK(loaded.added_mass == im.added_mass);
    CHECK(loaded.damping == im.damping);
    CHECK(loaded.excitation == im.excitation);
}

TEST_CASE("layout record round trip") {
    LayoutRecord rec;
    rec.seed = 7;
    rec.domain_vertices = {Vec2(0, 0), Vec2(10, 0), Vec2(5, 8)};
    rec.d_min = 1.6;
    rec.positions = (Mat2X(2, 2) << 1, 2, 3, 4).finished();
    rec.per_device_power = (Vec(2) << 100.5, 200.25).finished();
    rec.total_power = 300.75;
    rec.omega_t = 14.0;
    rec.hs = 3.0;
    rec.te = 8.0;
    rec.trace.cost = {-1.0, -2.0};
    rec.trace.grad_norm = {5.0};
    rec.trace.step_scale = {1.0};
    rec.trace.backtracks = {0};
    rec.trace.overlap_shrinks = {1};
    rec.trace.layouts = {rec.positions, rec.positions};

    const auto p = temp_file("layout.json");
    save_layout_record(p, rec);
    const auto loaded = load_layout_record(p);
    CHECK(loaded.seed == rec.seed);
    CHECK(loaded.positions == rec.positions);
    CHECK(loaded.per_device_power == rec.per_device_power);
    CHECK(loaded.total_power == rec.total_power);
    CHECK(loaded.trace.cost == rec.trace.cost);
    CHECK(loaded.trace.layouts.size() == 2);
    CHECK(loaded.d_min == 1.6);
}

TEST_CASE("config parser") {
    const auto p = temp_file("test.cfg");
    write_text(p, "# comment\n"
                  "a.b = 3.5\n"
                  "name = hello # trailing comment\n"
                  "grid = 1:0.5:2.5\n"
                  "list = 1.5, 2, 7\n"
                  "pts = 0,0; 4.33,2.5\n"
                  "count = 4\n");
    const auto cfg = Config::load(p);
    CHECK(cfg.get_double("a.b") == 3.5);
    CHECK(cfg.get_string("name") == "hello");
    CHECK(cfg.get_int("count") == 4);
    CHECK(cfg.get_double("missing", 9.0) == 9.0);
    CHECK_THROWS_AS(cfg.get_double("missing"), ConfigError);
    CHECK_THROWS_AS(cfg.get_int("a.b"), ConfigError);

    const auto grid = cfg.get_grid("grid");
    REQUIRE(grid.size() == 4);
    CHECK(grid[0] == 1.0);
    CHECK(grid[3] == 2.5);
    CHECK(cfg.get_grid("list").size() == 3);
    const auto pts = cfg.get_points("pts");
    REQUIRE(pts.size() == 2);
    CHECK(pts[1].first == 4.33);

    write_text(p, "key value without equals\n");
    CHECK_THROWS_AS(Config::load(p), ConfigError);
    write_text(p, "a = 1\na = 2\n");
    CHECK_THROWS_AS(Config::load(p), ConfigError);

    // deterministic content hash
    write_text(p, "a = 1\n");
    const auto h1 = Config::load(p).content_hash();
    const auto h2 = Config::load(p).content_hash();
    CHECK(h1 == h2);
    write_text(p, "a = 2\n");
    CHECK(Config::load(p).content_hash() != h1);
}
