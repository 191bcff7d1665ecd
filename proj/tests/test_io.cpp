#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "chemodg/cli.hpp"
#include "chemodg/config.hpp"
#include "chemodg/mesh_io.hpp"
#include "chemodg/output.hpp"
#include "chemodg/structured.hpp"

using namespace chemodg;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

// Independent minimal VTU reader: extracts the named ascii DataArray.
std::vector<double> vtu_read_array(const std::string& text, const std::string& name) {
    std::string needle = "Name=\"" + name + "\"";
    size_t pos = text.find(needle);
    REQUIRE(pos != std::string::npos);
    size_t start = text.find('>', pos);
    size_t end = text.find("</DataArray>", start);
    REQUIRE(start != std::string::npos);
    REQUIRE(end != std::string::npos);
    std::istringstream is(text.substr(start + 1, end - start - 1));
    std::vector<double> values;
    double v;
    while (is >> v) values.push_back(v);
    return values;
}

int run_cli(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"chemodg"};
    argv.insert(argv.end(), args);
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

SimState tiny_state() {
    std::vector<Vec3> verts{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    std::vector<std::array<int, 4>> elems{{0, 1, 2, -1}, {0, 2, 3, -1}};
    auto mesh = build_mesh(2, verts, elems);
    SimState state;
    state.u = DGField(mesh, std::vector<double>{1.0, 2.0});
    state.v = CGField(mesh, std::vector<double>{0.1, 0.2, 0.3, 0.4});
    state.w = CGField(mesh, std::vector<double>{-0.1, 0.0, 0.1, 0.2});
    return state;
}

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("minimal preset file fills the defaults") {
        RunConfig cfg = parse_config_text("[model]\npreset = test3-nonlocal-2d\n");
        CHECK(cfg.preset_name == "test3-nonlocal-2d");
        CHECK(cfg.params.model == ModelKind::Nonlocal);
        CHECK(cfg.params.alpha == 1.5);
        CHECK(cfg.params.dt == 1e-5);
        CHECK(cfg.mesh.target_h == 1.4e-2);
        CHECK(cfg.cadence == 50);
    }
    SUBCASE("explicit keys override the preset") {
        RunConfig cfg = parse_config_text(
            "[model]\npreset = test3-nonlocal-2d-coarse\nc = 0.1\ngamma = 1.75\n"
            "[output]\ncadence = 7\n");
        CHECK(cfg.params.c == 0.1);
        CHECK(cfg.params.gamma == 1.75);
        CHECK(cfg.cadence == 7);
        CHECK(cfg.params.alpha == 1.5);  // untouched preset value
    }
    SUBCASE("out-of-range gamma is rejected") {
        CHECK_THROWS_AS(parse_config_text("[model]\ngamma = 2.5\n"), ParseError);
    }
    SUBCASE("unknown key carries its name") {
        try {
            parse_config_text("[model]\nchie = 1.0\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("chie") != std::string::npos);
        }
    }
    SUBCASE("type mismatch carries the key") {
        try {
            parse_config_text("[model]\nchi = banana\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("chi") != std::string::npos);
        }
    }
    SUBCASE("unknown section and stray keys") {
        CHECK_THROWS_AS(parse_config_text("[extra]\nx = 1\n"), ParseError);
        CHECK_THROWS_AS(parse_config_text("x = 1\n"), ParseError);
        CHECK_THROWS_AS(parse_config_text("[solver]\nfallback = sometimes\n"), Error);
    }
    SUBCASE("serialize and parse round-trip") {
        RunConfig cfg = parse_config_text(
            "[model]\npreset = test3-nonlocal-2d-coarse\nc = 0.125\ngamma = 1.75\n"
            "[solver]\nfp_tol = 1e-11\nfallback = truncated\n"
            "[output]\ndirectory = /tmp/x\ncadence = 3\nwrite_vtu = false\n");
        RunConfig back = parse_config_text(serialize_config(cfg));
        CHECK(back.params.c == cfg.params.c);
        CHECK(back.params.gamma == cfg.params.gamma);
        CHECK(back.params.alpha == cfg.params.alpha);
        CHECK(back.solver.cell.fp_tol == cfg.solver.cell.fp_tol);
        CHECK(to_string(back.solver.policy) == "truncated");
        CHECK(back.output_directory == cfg.output_directory);
        CHECK(back.cadence == cfg.cadence);
        CHECK(back.write_vtu == cfg.write_vtu);
        CHECK(serialize_config(back) == serialize_config(cfg));
    }
    SUBCASE("environment variable overrides the output directory") {
        setenv("CHEMODG_OUTPUT_DIR", "/tmp/env_override", 1);
        RunConfig cfg = parse_config_text("[output]\ndirectory = /tmp/file_value\n");
        CHECK(cfg.output_directory == "/tmp/env_override");
        unsetenv("CHEMODG_OUTPUT_DIR");
    }
}

TEST_CASE("vtu writer") {
    SUBCASE("two-element state round-trips through an independent reader") {
        SimState state = tiny_state();
        const std::string path = "/tmp/chemodg_test_out.vtu";
        write_vtu(state, path);
        std::string text = slurp(path);
        auto u = vtu_read_array(text, "u");
        REQUIRE(u.size() == 2);
        CHECK(u[0] == 1.0);
        CHECK(u[1] == 2.0);
        auto v = vtu_read_array(text, "v");
        REQUIRE(v.size() == 4);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(v[i] - state.v.values[i]) <= 1e-12);
        auto proj = vtu_read_array(text, "u_p1h");
        CHECK(proj.size() == 4);
        auto conn = vtu_read_array(text, "connectivity");
        CHECK(conn.size() == 6);
        auto types = vtu_read_array(text, "types");
        for (double t : types) CHECK(t == 5.0);
    }
    SUBCASE("deterministic bytes") {
        SimState state = tiny_state();
        write_vtu(state, "/tmp/chemodg_vtu_a.vtu");
        write_vtu(state, "/tmp/chemodg_vtu_b.vtu");
        CHECK(slurp("/tmp/chemodg_vtu_a.vtu") == slurp("/tmp/chemodg_vtu_b.vtu"));
    }
    SUBCASE("unwritable path") {
        SimState state = tiny_state();
        CHECK_THROWS_AS(write_vtu(state, "/tmp/no_such_dir_chemodg/x.vtu"), Error);
    }
}

TEST_CASE("diagnostics csv") {
    SUBCASE("one row gives a two-line file") {
        DiagnosticsRow row;
        row.t = 0.125;
        row.mass = 3.0;
        row.max_u = 7.5;
        const std::string path = "/tmp/chemodg_test_diag.csv";
        write_diagnostics_csv({row}, path);
        std::string text = slurp(path);
        CHECK(std::count(text.begin(), text.end(), '\n') == 2);
        CHECK(text.rfind("t,mass,min_u,max_u,mass_bound_rhs,int_v,int_w,fallback_used,fp_iterations\n", 0) == 0);
    }
    SUBCASE("full round-trip precision") {
        std::vector<DiagnosticsRow> rows(3);
        rows[0].t = 1.0 / 3.0;
        rows[0].mass = M_PI;
        rows[0].min_u = -1.2345678901234567e-13;
        rows[0].max_u = 1e300;
        rows[1].t = 2.0 / 3.0;
        rows[1].mass = std::nextafter(M_PI, 4.0);
        rows[1].fallback_used = true;
        rows[1].fp_iterations = 17;
        rows[2].t = 1.0;
        rows[2].int_v = -3.2e-17;
        const std::string path = "/tmp/chemodg_test_diag2.csv";
        write_diagnostics_csv(rows, path);
        auto back = read_diagnostics_csv(path);
        REQUIRE(back.size() == rows.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            CHECK(back[i].t == rows[i].t);
            CHECK(back[i].mass == rows[i].mass);
            CHECK(back[i].min_u == rows[i].min_u);
            CHECK(back[i].max_u == rows[i].max_u);
            CHECK(back[i].int_v == rows[i].int_v);
            CHECK(back[i].fallback_used == rows[i].fallback_used);
            CHECK(back[i].fp_iterations == rows[i].fp_iterations);
        }
    }
    SUBCASE("large tables write and parse quickly") {
        std::vector<DiagnosticsRow> rows(100000);
        for (size_t i = 0; i < rows.size(); ++i) {
            rows[i].t = i * 1e-5;
            rows[i].mass = 8.9 + 1e-7 * i;
            rows[i].max_u = 100.0 + 0.01 * i;
        }
        const std::string path = "/tmp/chemodg_test_diag_big.csv";
        auto start = std::chrono::steady_clock::now();
        write_diagnostics_csv(rows, path);
        auto back = read_diagnostics_csv(path);
        auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        CHECK(back.size() == rows.size());
        CHECK(seconds < 5.0);
    }
    SUBCASE("empty table is rejected") {
        CHECK_THROWS_AS(write_diagnostics_csv({}, "/tmp/x.csv"), Error);
    }
}

TEST_CASE("command line interface") {
    SUBCASE("presets and validate succeed") {
        CHECK(run_cli({"presets"}) == 0);
        CHECK(run_cli({"validate", "--preset", "test3-nonlocal-2d", "--gamma", "1.75"}) == 0);
        CHECK(run_cli({"mesh-info", "--preset", "test3-nonlocal-2d-coarse", "--target-h", "0.4"}) == 0);
    }
    SUBCASE("unknown subcommand exits with 2") {
        CHECK(run_cli({"frobnicate"}) == 2);
        CHECK(run_cli({}) == 2);
    }
    SUBCASE("runtime failures exit with 1") {
        CHECK(run_cli({"run", "--preset", "no-such-preset"}) == 1);
        CHECK(run_cli({"mesh-info", "--preset", "test3-nonlocal-2d", "--target-h", "99"}) == 1);
    }
    SUBCASE("flags override config file values") {
        // Two short runs: config asks for c=0.05 but the flag forces c=0.1;
        // a pure-flag run with c=0.1 must produce identical diagnostics.
        write_file("/tmp/chemodg_cli_cfg.ini",
                   "[model]\npreset = test3-nonlocal-2d-coarse\nc = 0.05\ngamma = 1.75\n"
                   "T = 2e-5\n[mesh]\ntarget_h = 0.3\n[output]\nwrite_vtu = false\n");
        CHECK(run_cli({"run", "--config", "/tmp/chemodg_cli_cfg.ini", "--c", "0.1",
                       "--output-dir", "/tmp/chemodg_cli_a"}) == 0);
        CHECK(run_cli({"run", "--preset", "test3-nonlocal-2d-coarse", "--c", "0.1",
                       "--gamma", "1.75", "--T", "2e-5", "--target-h", "0.3", "--no-vtu",
                       "--output-dir", "/tmp/chemodg_cli_b"}) == 0);
        CHECK(slurp("/tmp/chemodg_cli_a/diagnostics.csv") ==
              slurp("/tmp/chemodg_cli_b/diagnostics.csv"));
        // And the file value must differ from the flag value.
        CHECK(run_cli({"run", "--config", "/tmp/chemodg_cli_cfg.ini",
                       "--output-dir", "/tmp/chemodg_cli_c"}) == 0);
        CHECK(slurp("/tmp/chemodg_cli_a/diagnostics.csv") !=
              slurp("/tmp/chemodg_cli_c/diagnostics.csv"));
    }
    SUBCASE("zero-horizon run writes only the initial snapshot") {
        CHECK(run_cli({"run", "--preset", "test3-nonlocal-2d-coarse", "--T", "0",
                       "--target-h", "0.3", "--output-dir", "/tmp/chemodg_cli_t0"}) == 0);
        CHECK(std::ifstream("/tmp/chemodg_cli_t0/state_000000.vtu").good());
        CHECK_FALSE(std::ifstream("/tmp/chemodg_cli_t0/state_000001.vtu").good());
        std::string csv = slurp("/tmp/chemodg_cli_t0/diagnostics.csv");
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    }
}
