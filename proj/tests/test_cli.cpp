// End-to-end checks of the command-line tool via std::system. The binary
// path comes in through MD2D_CLI_PATH at compile time.

#define CATCH_CONFIG_MAIN
#include <catch2/catch.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(MD2D_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("md2d_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("run executes a single seeded instance") {
    REQUIRE(run_cli("run --users 6 --seed 3 --scheme MD2D") == 0);
    REQUIRE(run_cli("run --users 9 --seed 3 --r-th 6 --theta-th 10") == 0);
}

TEST_CASE("--set overrides arbitrary config fields") {
    REQUIRE(run_cli("run --users 4 --seed 3 --set channel.k0_scale=1e-6") == 0);
    REQUIRE(run_cli("run --users 4 --seed 3 --set channel.k0_scale") == 2);
    REQUIRE(run_cli("run --users 4 --seed 3 --set bogus.key=1") == 2);
}

TEST_CASE("run requires a seed and rejects unknown flags") {
    REQUIRE(run_cli("run --users 6") != 0);
    REQUIRE(run_cli("run --users 6 --seed 1 --no-such-flag") != 0);
}

TEST_CASE("a malformed config makes the tool fail loudly") {
    TempDir tmp;
    fs::path cfg = tmp.path / "bad.cfg";
    std::ofstream(cfg) << "not_a_real_key = 5\n";
    REQUIRE(run_cli("run --users 4 --seed 1 --config " + cfg.string()) == 2);
}

TEST_CASE("trace plus check round trip, and a tampered trace fails") {
    TempDir tmp;
    fs::path trace = tmp.path / "md2d.trace";
    REQUIRE(run_cli("run --users 6 --seed 11 --scheme MD2D --trace " + trace.string()) == 0);
    REQUIRE(fs::exists(trace));
    REQUIRE(run_cli("check " + trace.string()) == 0);

    // cut one slot from the first phase: the demand constraint must trip
    std::string text = slurp(trace);
    std::size_t pos = text.find("slots ");
    REQUIRE(pos != std::string::npos);
    std::size_t end = text.find('\n', pos);
    std::string field = text.substr(pos + 6, end - pos - 6);
    long long slots = std::stoll(field);
    text.replace(pos + 6, field.size(), std::to_string(slots - 1));
    std::ofstream(trace) << text;
    REQUIRE(run_cli("check " + trace.string()) == 1);
}

TEST_CASE("sweep writes raw and aggregate CSV files") {
    TempDir tmp;
    fs::path out = tmp.path / "out";
    REQUIRE(run_cli("sweep --users 4 --runs 3 --seed 5 --schemes MD2D,FDMAC --out " +
                    out.string()) == 0);
    REQUIRE(fs::exists(out / "raw.csv"));
    REQUIRE(fs::exists(out / "aggregate.csv"));

    std::string raw = slurp(out / "raw.csv");
    REQUIRE(raw.find("MD2D") != std::string::npos);
    REQUIRE(raw.find("FDMAC") != std::string::npos);
    // header + 3 runs x 2 schemes
    REQUIRE(std::count(raw.begin(), raw.end(), '\n') == 7);
}

TEST_CASE("oracle solves a serialized topology") {
    TempDir tmp;
    fs::path trace = tmp.path / "oracle.trace";
    REQUIRE(run_cli("run --users 3 --seed 2 --scheme MD2D --trace " + trace.string()) == 0);

    // the trace embeds the topology record; extract it for the oracle
    std::string text = slurp(trace);
    std::size_t topo = text.find("topology v1");
    std::size_t part = text.find("partition ");
    REQUIRE(topo != std::string::npos);
    REQUIRE(part != std::string::npos);
    fs::path topo_file = tmp.path / "topo.txt";
    std::ofstream(topo_file) << text.substr(topo, part - topo);

    REQUIRE(run_cli("oracle " + topo_file.string()) == 0);
    REQUIRE(run_cli("oracle " + topo_file.string() + " --max-group-size 2") == 2);
}
