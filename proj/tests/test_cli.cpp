#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using namespace std::string_literals;
namespace fs = std::filesystem;

namespace {

const std::string kCli = PEGSIM_CLI_PATH;
const std::string kScenarios = PEGSIM_SCENARIOS_DIR;
const std::string kFixtures = PEGSIM_FIXTURES_DIR;

struct TempDir {
    fs::path path;
    TempDir()
    {
        static int c = 0;
        path = fs::temp_directory_path() /
               ("pegsim_cli_" + std::to_string(::getpid()) + "_" + std::to_string(c++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args)
{
    TempDir dir;
    std::string out_file = dir.file("stdout.txt");
    std::string cmd = kCli + " " + args + " > " + out_file + " 2>&1";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(out_file);
    r.out.assign(std::istreambuf_iterator<char>(in), {});
    return r;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace

TEST_CASE("usage errors exit 1")
{
    CHECK(run("").code == 1);
    CHECK(run("simulate").code == 1); // missing required flags
    CHECK(run("simulate --protocol nosuch --scenario x --out y").code == 1);
    CHECK(run("replay --protocol rebase --out r.json").code == 1); // no --stable-csv
    CHECK(run("frobnicate").code == 1);
}

TEST_CASE("simulate runs a bundled scenario and prints the verdict line")
{
    TempDir dir;
    std::string out = dir.file("run.json");
    auto r = run("simulate --scenario " + kScenarios + "/idealized_cycle.cfg --out " + out);
    CHECK(r.code == 0);
    CHECK(r.out.find("verdict: rational=true") != std::string::npos);
    CHECK(fs::exists(out));
}

TEST_CASE("simulate flags override scenario keys")
{
    TempDir dir;
    std::string out = dir.file("short.json");
    auto r = run("simulate --protocol dual --mode endogenous --periods 20 --scenario " +
                 kScenarios + "/death_spiral.cfg --out " + out);
    CHECK(r.code == 0);
    std::string report = slurp(out);
    CHECK(report.find("\"horizon\": 20") != std::string::npos);
}

TEST_CASE("scenario validation failures exit 2")
{
    TempDir dir;
    std::string bad = dir.file("bad.cfg");
    std::ofstream(bad) << "protocol = rebase\nmode = idealized\nhorizon = 0\n"
                          "prices.cycle = 1.0\n";
    auto r = run("simulate --scenario " + bad + " --out " + dir.file("r.json"));
    CHECK(r.code == 2);

    auto missing = run("simulate --scenario " + dir.file("absent.cfg") + " --out " +
                       dir.file("r2.json"));
    CHECK(missing.code == 2);
}

TEST_CASE("replay of the rebase fixture works end to end")
{
    TempDir dir;
    std::string out = dir.file("ampl.json");
    auto r = run("replay --protocol rebase --stable-csv " + kFixtures +
                 "/ampl_2022.csv --out " + out);
    CHECK(r.code == 0);
    CHECK(fs::exists(out));

    auto missing = run("replay --protocol rebase --stable-csv " + dir.file("no.csv") +
                       " --out " + dir.file("x.json"));
    CHECK(missing.code == 2);
}

TEST_CASE("ust replay evaluates to not-rational with condition (ii) failing")
{
    TempDir dir;
    std::string out = dir.file("ust.json");
    auto r = run("replay --protocol dual --stable-csv " + kFixtures +
                 "/ust_2022.csv --share-csv " + kFixtures + "/luna_2022.csv --out " + out);
    CHECK(r.code == 0);
    CHECK(r.out.find("rational=false") != std::string::npos);

    auto ev = run("evaluate --run " + out);
    CHECK(ev.code == 0); // a negative verdict is still a successful evaluation
    CHECK(ev.out.find("\"condition_ii\": false") != std::string::npos);
    CHECK(ev.out.find("\"rational\": false") != std::string::npos);
    CHECK(ev.out.find("\"worst_cohort\"") != std::string::npos);
}

TEST_CASE("idealized replay evaluates with condition (ii) holding")
{
    TempDir dir;
    std::string out = dir.file("ampl_ideal.json");
    auto r = run("simulate --scenario " + kScenarios + "/ampl_idealized.cfg --out " + out);
    CHECK(r.code == 0);
    auto ev = run("evaluate --run " + out);
    CHECK(ev.code == 0);
    CHECK(ev.out.find("\"condition_ii\": true") != std::string::npos);
}

TEST_CASE("evaluate rejects corrupt reports with exit 2")
{
    TempDir dir;
    std::string bad = dir.file("corrupt.json");
    std::ofstream(bad) << "{ not json";
    CHECK(run("evaluate --run " + bad).code == 2);
    CHECK(run("evaluate --run " + dir.file("void.json")).code == 2);
}

TEST_CASE("plot emits the four csv files, byte-stable across runs")
{
    TempDir dir;
    std::string out = dir.file("run.json");
    REQUIRE(run("simulate --scenario " + kScenarios + "/basis_cycle.cfg --out " + out)
                .code == 0);
    std::string plots1 = dir.file("p1");
    std::string plots2 = dir.file("p2");
    CHECK(run("plot --run " + out + " --out " + plots1).code == 0);
    CHECK(run("plot --run " + out + " --out " + plots2).code == 0);
    for (const char* name : {"price.csv", "amounts.csv", "utility.csv", "gamma_d.csv"}) {
        std::string a = slurp(plots1 + "/" + name);
        CHECK(!a.empty());
        CHECK(a == slurp(plots2 + "/" + name));
    }
}

TEST_CASE("reports are byte-identical across invocations")
{
    TempDir dir;
    std::string a = dir.file("a.json");
    std::string b = dir.file("b.json");
    std::string base = "simulate --scenario " + kScenarios + "/death_spiral.cfg --out ";
    REQUIRE(run(base + a).code == 0);
    REQUIRE(run(base + b).code == 0);
    std::string sa = slurp(a);
    CHECK(!sa.empty());
    CHECK(sa == slurp(b));
}
