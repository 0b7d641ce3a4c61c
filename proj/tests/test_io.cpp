#include "serrin/io.hpp"
#include "serrin/moduli.hpp"

#include <doctest.h>

#include <fstream>
#include <nlohmann/json.hpp>

using namespace serrin;

TEST_SUITE_BEGIN("io");

namespace {
std::filesystem::path tmpdir() {
    auto d = std::filesystem::temp_directory_path() / "serrin_io_test";
    std::filesystem::create_directories(d);
    return d;
}

BandSolution small_band() {
    auto bm = band_map(0.5);
    return band_solution(0.5, bm);
}
} // namespace

TEST_CASE("band JSON round trip: write, verify from samples, determinism") {
    auto bs = small_band();
    auto rep = build_verify(bs);
    auto p1 = tmpdir() / "band1.json";
    auto p2 = tmpdir() / "band2.json";
    write_band_json(bs, rep, std::nullopt, p1);
    write_band_json(bs, rep, std::nullopt, p2);
    // byte-identical output for identical inputs
    std::ifstream f1(p1), f2(p2);
    std::string s1((std::istreambuf_iterator<char>(f1)), {});
    std::string s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);
    CHECK(!s1.empty());

    auto recheck = verify_file(p1);
    CHECK(recheck.pde_residual_max < 1e-5);
    CHECK(recheck.dirichlet_stdev[0] < 1e-7);
    CHECK(recheck.hopf_stdev < 1e-6);
    CHECK(std::abs(recheck.hopf_mean + 0.5) < 1e-5);
}

TEST_CASE("verify flags a perturbed field and rejects broken files") {
    auto bs = small_band();
    auto rep = build_verify(bs);
    auto path = tmpdir() / "band_perturbed.json";
    write_band_json(bs, rep, std::nullopt, path);
    nlohmann::json j;
    {
        std::ifstream is(path);
        is >> j;
    }
    // inject a 1e-3 fault into v
    j["v"][j["v"].size() / 2][3] = j["v"][j["v"].size() / 2][3].get<double>() + 1e-3;
    atomic_write(path, j.dump(1));
    auto rep2 = verify_file(path);
    CHECK(rep2.pde_residual_max > 1e-5); // PDE residual fails

    // truncated file -> format error
    auto broken = tmpdir() / "broken.json";
    atomic_write(broken, std::string("{\"format\": \"serrin-band/1\", \"x\": [0, 1"));
    CHECK_THROWS_AS(verify_file(broken), FormatError);
    auto wrong = tmpdir() / "wrong.json";
    atomic_write(wrong, std::string("{\"format\": \"other/9\"}"));
    CHECK_THROWS_AS(verify_file(wrong), FormatError);
}

TEST_CASE("SVG emission and re-rendering from JSON") {
    auto bs = small_band();
    auto rep = build_verify(bs);
    auto jsonp = tmpdir() / "band_svg.json";
    write_band_json(bs, rep, std::nullopt, jsonp);
    auto svg1 = tmpdir() / "band.svg";
    write_band_svg(bs, svg1, 3, false);
    auto svg2 = tmpdir() / "band_replot.svg";
    write_svg_from_json(jsonp, svg2);
    for (auto p : {svg1, svg2}) {
        std::ifstream is(p);
        std::string s((std::istreambuf_iterator<char>(is)), {});
        CHECK(s.find("<svg") != std::string::npos);
        CHECK(s.find("boundary") != std::string::npos);
        CHECK(s.find("param") != std::string::npos);
    }
    auto neck = necklace_limit(3, -kPi);
    auto svg3 = tmpdir() / "necklace.svg";
    write_necklace_svg(neck, svg3);
    std::ifstream is(svg3);
    std::string s((std::istreambuf_iterator<char>(is)), {});
    CHECK(s.find("unit") != std::string::npos);
}

TEST_CASE("tolerances: keys, env overrides, validation") {
    Tolerances t;
    t.set("pde", 1e-4);
    CHECK(t.get("pde") == 1e-4);
    CHECK_THROWS_AS(t.set("bogus", 1.0), FormatError);
    CHECK_THROWS_AS(t.set("pde", -1.0), FormatError);
    setenv("SERRIN_TOL_NEUMANN", "2.5e-5", 1);
    t.apply_env();
    CHECK(t.get("neumann") == 2.5e-5);
    unsetenv("SERRIN_TOL_NEUMANN");
}

TEST_CASE("sweep CSV formatting") {
    SweepRow r;
    r.n = 3;
    r.tau = 0.5;
    r.eta = 0.4625405220423;
    r.ok = true;
    auto path = tmpdir() / "sweep.csv";
    write_sweep_csv({r}, path);
    std::ifstream is(path);
    std::string header, line;
    std::getline(is, header);
    std::getline(is, line);
    CHECK(header.find("tau,eta,vartheta") != std::string::npos);
    CHECK(line.find("0.4625405220423") != std::string::npos);
    CHECK(line.find(",ok") != std::string::npos);
}

TEST_SUITE_END();
