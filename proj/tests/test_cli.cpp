#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "mdsq/localfactors.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

int run(const std::string& args) {
    std::string cmd = std::string(MDSQ_BIN) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

fs::path scratch() {
    auto dir = fs::temp_directory_path() / "mdsq-cli-test";
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> csv_lines(const fs::path& p, bool keep_header) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!keep_header && line.rfind("# generated=", 0) == 0) continue;
        out.push_back(line);
    }
    return out;
}

}  // namespace

TEST_CASE("bias-table writes CSV and JSON") {
    auto base = scratch() / "bias";
    REQUIRE(run("bias-table --g 10 --k 3 --out " + base.string()) == 0);

    auto lines = csv_lines(base.string() + ".csv", true);
    size_t header = 0;
    while (header < lines.size() && lines[header].rfind("#", 0) == 0) ++header;
    CHECK(header >= 2);  // mode + generated stamp at least
    REQUIRE(lines.size() == header + 1 + 10);  // column row + one row per digit
    CHECK(lines[header] == "b,r2_sum,member_count,empirical,predicted,ratio");

    std::ifstream js(base.string() + ".json");
    json j = json::parse(js);
    CHECK(j["config"]["mode"] == "bias-table");
    CHECK(j["rows"].size() == 10);
    // digit 1 is over-represented relative to digit 0 already at 10^3
    double r1 = std::stod(j["rows"][1][1].get<std::string>());
    double r0 = std::stod(j["rows"][0][1].get<std::string>());
    CHECK(r1 > r0);
}

TEST_CASE("avg-r2 with a k range") {
    auto base = scratch() / "avg";
    REQUIRE(run("avg-r2 --g 10 --forbidden 7 --k-range 2..3 --out " + base.string()) == 0);
    std::ifstream js(base.string() + ".json");
    json j = json::parse(js);
    REQUIRE(j["rows"].size() == 2);
    CHECK(j["rows"][0][0] == "2");
    CHECK(j["rows"][1][0] == "3");
    double S = j["singular_series"].get<double>();
    double expect = mdsq::singular_series_limit(mdsq::DigitSet::make(10, {7}))
                        .value.convert_to<double>();
    CHECK(S == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("sieve-check and expsum run clean") {
    auto base = scratch() / "sv";
    CHECK(run("sieve-check --z 30 --s 3 --kappa 1 --nmax 20000 --out " + base.string()) == 0);
    std::ifstream js(base.string() + ".json");
    json j = json::parse(js);
    CHECK(j["violations"] == 0);

    auto eb = scratch() / "es";
    CHECK(run("expsum --kind prime-square --alpha 0.25 --x 10000 --out " + eb.string()) == 0);
    CHECK(run("expsum --kind nope --x 100 --out " + eb.string()) == 2);
}

TEST_CASE("error exit codes") {
    auto base = scratch() / "err";
    // forbidden digit out of range for the base
    CHECK(run("offdiag --g 10 --forbidden 10 --k 3 --out " + base.string()) == 2);
    // window too large for the sieve budget
    CHECK(run("primes count --upto 1100000000000 --out " + base.string()) == 3);
}

TEST_CASE("runs are deterministic") {
    auto a = scratch() / "det-a";
    auto b = scratch() / "det-b";
    REQUIRE(run("nonzero --g 10 --forbidden 7 --k 4 --out " + a.string()) == 0);
    REQUIRE(run("nonzero --g 10 --forbidden 7 --k 4 --out " + b.string()) == 0);
    CHECK(csv_lines(a.string() + ".csv", false) == csv_lines(b.string() + ".csv", false));
}
