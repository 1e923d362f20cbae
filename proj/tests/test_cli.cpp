// Drives the installed binary through the documented examples. The path
// comes from the LAPLAX_CLI environment variable (wired up by ctest);
// without it the cases are skipped.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "laplax/io.hpp"

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return std::getenv("LAPLAX_CLI"); }

int run_cli(const std::string& args) {
    std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path dir;
    TempDir() : dir(fs::temp_directory_path() / "laplax_cli_test") {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~TempDir() { fs::remove_all(dir); }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

} // namespace

TEST_CASE("cli solves the two-by-two system against the closed form") {
    if (!cli_path()) return;
    TempDir tmp;
    {
        std::ofstream mtx(tmp.file("a.mtx"));
        mtx << "%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n"
               "1 1 2\n2 2 2\n2 1 -1\n";
        std::ofstream rhs(tmp.file("b.txt"));
        rhs << "1\n-1\n";
    }
    REQUIRE(run_cli("solve --matrix " + tmp.file("a.mtx") + " --rhs " + tmp.file("b.txt") +
                    " --eps 1e-10 --out " + tmp.file("x.txt")) == 0);
    std::vector<double> x = laplax::read_vector_file(tmp.file("x.txt"));
    REQUIRE(x.size() == 2);
    CHECK(x[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
    CHECK(x[1] == doctest::Approx(-1.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("cli iteration count grows modestly with the accuracy target") {
    if (!cli_path()) return;
    TempDir tmp;
    REQUIRE(run_cli("generate --kind grid --rows 24 --cols 24 --seed 3 --out " +
                    tmp.file("g.txt")) == 0);
    auto iterations = [&](const char* eps, const char* rep) {
        REQUIRE(run_cli("solve --graph " + tmp.file("g.txt") + " --rhs-random --seed 4 --eps " +
                        eps + " --report " + tmp.file(rep)) == 0);
        std::string json = slurp(tmp.file(rep));
        std::size_t pos = json.find("\"iterations\":");
        REQUIRE(pos != std::string::npos);
        return std::atoi(json.c_str() + pos + 13);
    };
    int coarse = iterations("1e-4", "r4.json");
    int fine = iterations("1e-8", "r8.json");
    CHECK(fine >= coarse);
    CHECK(double(fine) <= 3.0 * double(coarse));
}

TEST_CASE("cli zero rhs returns the zero vector without iterating") {
    if (!cli_path()) return;
    TempDir tmp;
    REQUIRE(run_cli("generate --kind ring --n 9 --out " + tmp.file("g.txt")) == 0);
    {
        std::ofstream rhs(tmp.file("b.txt"));
        for (int i = 0; i < 9; ++i) rhs << "0\n";
    }
    REQUIRE(run_cli("solve --graph " + tmp.file("g.txt") + " --rhs " + tmp.file("b.txt") +
                    " --out " + tmp.file("x.txt") + " --report " + tmp.file("r.json")) == 0);
    for (double v : laplax::read_vector_file(tmp.file("x.txt"))) CHECK(v == 0.0);
    CHECK(slurp(tmp.file("r.json")).find("\"iterations\": 0") != std::string::npos);
}

TEST_CASE("cli bench with no sizes emits a header-only csv") {
    if (!cli_path()) return;
    TempDir tmp;
    REQUIRE(run_cli("bench --kind grid --out " + tmp.file("b.csv")) == 0);
    std::string csv = slurp(tmp.file("b.csv"));
    CHECK(csv == "# laplax-bench v1\nkind,n,m,build_ms,solve_ms,iterations,edge_touches\n");
}

TEST_CASE("cli rejects bad inputs with a usage exit code") {
    if (!cli_path()) return;
    TempDir tmp;
    {
        std::ofstream bad(tmp.file("bad.txt"));
        bad << "0 1 1.0\n1 1 2.0\n";
    }
    int rc = run_cli("lsst --graph " + tmp.file("bad.txt"));
    CHECK(rc != 0);
    CHECK(WEXITSTATUS(rc) == 1);
}
