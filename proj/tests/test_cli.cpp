#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* small_config = R"({
  // small disc, quick to solve
  "scene": {"shape": "circle", "radius": 0.3, "eps_r": 2.0, "k0": 1.45, "theta_deg": 20},
  "frame": {"X": 0.5, "M": 4, "N": 2, "alpha": 0.816496580927726, "beta": 0.816496580927726},
  "zgrid": {"z_min": -0.4, "z_max": 0.4, "delta": 0.05},
  "dual": {"N_u": 2, "N_v": 3, "fit_tol": 0.05},
  "solver": {"method": "direct"},
  "output": {"nx": 41, "nz": 17, "out_dir": "out"},
  "cache": {"enabled": true, "path": "cache"}
})";

struct TempDir {
    fs::path path;
    TempDir()
    {
        std::random_device rd;
        path = fs::temp_directory_path() / ("gew-cli-" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Run {
    int code;
    std::string out;
};

// Runs the CLI inside dir, capturing stdout.
Run cli(const fs::path& dir, const std::string& args)
{
    const fs::path out = dir / "stdout.txt";
    const std::string cmd = "cd '" + dir.string() + "' && '" GEW_CLI_PATH "' " + args + " > '" + out.string() + "' 2> /dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("frame constraint violation exits 2 with error.json")
{
    TempDir t;
    std::string cfg = small_config;
    cfg.replace(cfg.find("\"alpha\": 0.816496580927726"), 26, "\"alpha\": 1.2");
    cfg.replace(cfg.find("\"beta\": 0.816496580927726"), 25, "\"beta\": 1.0");
    write(t.path / "bad.cfg", cfg);
    const Run r = cli(t.path, "solve bad.cfg");
    CHECK(r.code == 2);
    REQUIRE(fs::exists(t.path / "error.json"));
    const json e = json::parse(slurp(t.path / "error.json"));
    CHECK(e["error"] == "ConfigError");
    CHECK(e["exit_code"] == 2);
    CHECK(e["message"].get<std::string>().find("frame") != std::string::npos);
    CHECK_FALSE(fs::exists(t.path / "out" / "field.csv"));
}

TEST_CASE("unknown config key and bad usage are rejected")
{
    TempDir t;
    std::string cfg = small_config;
    cfg.replace(cfg.find("\"eps_r\""), 7, "\"epsr\"");
    write(t.path / "typo.cfg", cfg);
    CHECK(cli(t.path, "solve typo.cfg").code == 2);
    CHECK(json::parse(slurp(t.path / "error.json"))["message"].get<std::string>().find("epsr") != std::string::npos);
    CHECK(cli(t.path, "solve missing.cfg").code == 2);
    CHECK(cli(t.path, "frobnicate").code == 2);
    CHECK(cli(t.path, "green-check --k0 1").code == 2);
}

TEST_CASE("green-check reports the split error")
{
    TempDir t;
    const Run r = cli(t.path, "green-check --k0 1.45 --rmin 0.001 --rmax 20 --points 12");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["max_rel_error"].get<double>() <= 1e-8);
    CHECK(j["samples"].size() == 12);
}

TEST_CASE("solve writes artifacts and a warm rerun is identical")
{
    TempDir t;
    write(t.path / "small.cfg", small_config);
    const Run cold = cli(t.path, "solve small.cfg");
    REQUIRE(cold.code == 0);
    const json m1 = json::parse(slurp(t.path / "out" / "metrics.json"));
    CHECK(m1["table_cache_hit"] == false);
    CHECK(m1["method"] == "direct");
    CHECK(m1["residual_norm"].get<double>() <= 1e-8);
    for (const char* key : {"iterations", "wall_time_setup", "wall_time_solve", "condition_estimate", "unknowns"})
        CHECK(m1.contains(key));
    CHECK(json::parse(cold.out) == m1);

    const std::string csv = slurp(t.path / "out" / "field.csv");
    CHECK(csv.rfind("x,z,re,im\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 41 * 17);
    const std::string pgm = slurp(t.path / "out" / "field.pgm");
    CHECK(pgm.rfind("P5\n41 17\n255\n", 0) == 0);
    CHECK(pgm.size() == std::string("P5\n41 17\n255\n").size() + 41 * 17);
    const json side = json::parse(slurp(t.path / "out" / "field.pgm.json"));
    CHECK(side["min"].get<double>() <= side["max"].get<double>());

    const Run warm = cli(t.path, "solve small.cfg");
    REQUIRE(warm.code == 0);
    const json m2 = json::parse(slurp(t.path / "out" / "metrics.json"));
    CHECK(m2["table_cache_hit"] == true);
    CHECK(slurp(t.path / "out" / "field.csv") == csv);
    CHECK(slurp(t.path / "out" / "field.pgm") == pgm);

    // a corrupted cache file is rebuilt rather than trusted
    for (const auto& e : fs::directory_iterator(t.path / "cache")) fs::resize_file(e.path(), 10);
    const Run again = cli(t.path, "solve small.cfg --out-dir out2");
    CHECK(again.code == 0);
    CHECK(slurp(t.path / "out2" / "field.csv") == csv);
}

TEST_CASE("dual-window writes samples")
{
    TempDir t;
    write(t.path / "small.cfg", small_config);
    REQUIRE(cli(t.path, "dual-window small.cfg").code == 0);
    const json j = json::parse(slurp(t.path / "out" / "dual_window.json"));
    CHECK(j["residual"].get<double>() <= 0.05);
    CHECK(slurp(t.path / "out" / "dual_window.csv").rfind("x,g,eta_re,eta_im,fit_re,fit_im\n", 0) == 0);
}
