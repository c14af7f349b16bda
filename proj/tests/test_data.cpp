#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pegsim/engine.hpp"
#include "pegsim/report.hpp"
#include "pegsim/timeseries.hpp"

using namespace pegsim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() /
               ("pegsim_data_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter()
    {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string write_file(const TempDir& dir, const std::string& name, const std::string& body)
{
    std::string p = dir.file(name);
    std::ofstream out(p);
    out << body;
    return p;
}

errc code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const SimError& e) {
        return e.code();
    }
    FAIL("expected a SimError");
    return errc::malformed;
}

const char* kHeader = "timestamp,price_usd,total_supply,market_cap\n";

} // namespace

TEST_CASE("date round trips")
{
    CHECK(days_from_civil(1970, 1, 1) == 0);
    CHECK(days_from_civil(2022, 3, 1) == 19052);
    CHECK(format_timestamp(19052) == "2022-03-01T00:00:00Z");
    CHECK(parse_day("2022-03-01") == 19052);
    CHECK(parse_day("2022-03-01T15:30:00Z") == 19052);
    CHECK_THROWS_AS(parse_day("2022-3-1"), SimError);
    CHECK_THROWS_AS(parse_day("not a date"), SimError);
}

TEST_CASE("a two-row file loads")
{
    TempDir dir;
    auto p = write_file(dir, "s.csv",
                        std::string(kHeader) + "2022-03-01T00:00:00Z,1.0,100,100\n"
                                               "2022-03-02T00:00:00Z,0.99,,\n");
    TimeSeries s = load_csv(p);
    CHECK(s.size() == 2);
    CHECK(s.token == "s");
    CHECK(s.points[0].price_usd == usd_price(1));
    CHECK(s.points[0].total_supply == tokens(100));
    CHECK_FALSE(s.points[1].total_supply.has_value());
    CHECK(s.forward_filled == 0);
}

TEST_CASE("csv validation failures carry the right codes")
{
    TempDir dir;
    CHECK(code_of([&] { load_csv(dir.file("missing.csv")); }) == errc::io_error);
    CHECK(code_of([&] { load_csv(write_file(dir, "e.csv", "")); }) == errc::empty_series);
    CHECK(code_of([&] { load_csv(write_file(dir, "h.csv", "time,price\n")); }) ==
          errc::malformed_csv);
    CHECK(code_of([&] { load_csv(write_file(dir, "only.csv", kHeader)); }) ==
          errc::empty_series);
    CHECK(code_of([&] {
              load_csv(write_file(dir, "o.csv",
                                  std::string(kHeader) +
                                      "2022-03-02T00:00:00Z,1,,\n"
                                      "2022-03-01T00:00:00Z,1,,\n"));
          }) == errc::non_monotonic_timestamps);
    CHECK(code_of([&] {
              load_csv(write_file(dir, "dup.csv",
                                  std::string(kHeader) +
                                      "2022-03-01T00:00:00Z,1,,\n"
                                      "2022-03-01T00:00:00Z,1,,\n"));
          }) == errc::non_monotonic_timestamps);
    CHECK(code_of([&] {
              load_csv(write_file(dir, "bad.csv",
                                  std::string(kHeader) + "2022-03-01T00:00:00Z,abc,,\n"));
          }) == errc::malformed_csv);
    CHECK(code_of([&] {
              load_csv(write_file(dir, "fields.csv",
                                  std::string(kHeader) + "2022-03-01T00:00:00Z,1\n"));
          }) == errc::malformed_csv);
}

TEST_CASE("gaps up to three days are filled and flagged; larger gaps fail")
{
    TempDir dir;
    auto filled = load_csv(write_file(dir, "g3.csv",
                                      std::string(kHeader) +
                                          "2022-03-01T00:00:00Z,1,,\n"
                                          "2022-03-05T00:00:00Z,2,,\n"));
    CHECK(filled.size() == 5);
    CHECK(filled.forward_filled == 3);
    CHECK(filled.points[1].price_usd == usd_price(1)); // copies the last seen row
    CHECK(filled.points[4].price_usd == usd_price(2));

    CHECK(code_of([&] {
              load_csv(write_file(dir, "g4.csv",
                                  std::string(kHeader) +
                                      "2022-03-01T00:00:00Z,1,,\n"
                                      "2022-03-06T00:00:00Z,2,,\n"));
          }) == errc::gap_too_large);
}

TEST_CASE("zero prices load but are flagged")
{
    TempDir dir;
    auto s = load_csv(write_file(dir, "z.csv",
                                 std::string(kHeader) + "2022-03-01T00:00:00Z,0,,\n"));
    CHECK(s.zero_prices == 1);
}

TEST_CASE("canonical csv round trips")
{
    TempDir dir;
    auto p = write_file(dir, "in.csv",
                        std::string(kHeader) +
                            "2022-03-01T00:00:00Z,1.25,1000,1250\n"
                            "2022-03-03T00:00:00Z,0.5,,\n");
    TimeSeries a = load_csv(p);
    std::string canon = dir.file("canon.csv");
    write_canonical_csv(a, canon);
    TimeSeries b = load_csv(canon, a.token);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.points[i].day == b.points[i].day);
        CHECK(a.points[i].price_usd == b.points[i].price_usd);
        CHECK(a.points[i].total_supply == b.points[i].total_supply);
        CHECK(a.points[i].market_cap == b.points[i].market_cap);
    }
    // idempotent: writing the loaded canonical form reproduces the bytes
    std::string canon2 = dir.file("canon2.csv");
    write_canonical_csv(b, canon2);
    std::ifstream f1(canon), f2(canon2);
    std::string s1((std::istreambuf_iterator<char>(f1)), {});
    std::string s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);
}

TEST_CASE("bundled fixtures load cleanly")
{
    TimeSeries ust = load_csv(std::string(PEGSIM_FIXTURES_DIR) + "/ust_2022.csv");
    TimeSeries luna = load_csv(std::string(PEGSIM_FIXTURES_DIR) + "/luna_2022.csv");
    TimeSeries ampl = load_csv(std::string(PEGSIM_FIXTURES_DIR) + "/ampl_2022.csv");
    CHECK(ust.size() == 231);
    CHECK(luna.size() == 231);
    CHECK(ampl.size() == 231);
    CHECK(ust.points.front().price_usd == usd_price(1));
    CHECK(ust.points.back().price_usd.units < kScale / 10);
    CHECK(ust.forward_filled == 0);
}

namespace {

RunRecord small_run()
{
    Scenario s;
    s.protocol = Protocol::rebase;
    s.mode = Mode::idealized;
    s.horizon = 12;
    s.price_cycle = {Price{500'000'000}, Price{1'250'000'000}, usd_price(2),
                     Price{800'000'000}};
    CohortSpec c;
    c.id = "c1";
    c.join_period = 1;
    c.usd = usd(100);
    s.cohorts.push_back(c);
    CohortSpec c2;
    c2.id = "c2";
    c2.join_period = 3;
    c2.exit_period = 9;
    c2.units = tokens(5);
    s.cohorts.push_back(c2);
    s.echo = {{"protocol", "rebase"}, {"mode", "idealized"}};
    return run_scenario(s, std::nullopt);
}

} // namespace

TEST_CASE("report write/read is the identity")
{
    TempDir dir;
    RunRecord run = small_run();
    std::string p1 = dir.file("run.json");
    write_report(run, p1);
    RunRecord back = read_report(p1);

    CHECK(back.horizon == run.horizon);
    CHECK(back.engine_version == run.engine_version);
    CHECK(back.cohorts.size() == run.cohorts.size());
    CHECK(back.periods.size() == run.periods.size());
    CHECK(back.cohorts[1].exit_period == run.cohorts[1].exit_period);
    CHECK(back.cohorts[1].exit_proceeds == run.cohorts[1].exit_proceeds);
    REQUIRE(back.verdict.has_value());
    CHECK(back.verdict->rational == run.verdict->rational);
    CHECK(back.verdict->gamma_d.size() == run.verdict->gamma_d.size());

    // byte-identical re-serialization is the strong form of the round trip
    std::string p2 = dir.file("run2.json");
    write_report(back, p2);
    std::ifstream f1(p1), f2(p2);
    std::string s1((std::istreambuf_iterator<char>(f1)), {});
    std::string s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);
    CHECK(!s1.empty());
}

TEST_CASE("unwritable destinations surface as IoError")
{
    TempDir dir;
    RunRecord run = small_run();
    CHECK(code_of([&] {
              write_report(run, dir.file("no/such/dir/run.json"));
          }) == errc::io_error);
}

TEST_CASE("report reader rejects damage")
{
    TempDir dir;
    RunRecord run = small_run();
    std::string good = report_to_string(run);

    CHECK(code_of([&] { read_report(dir.file("absent.json")); }) == errc::io_error);
    CHECK(code_of([&] {
              report_from_string(good.substr(0, good.size() / 2));
          }) == errc::io_error);

    std::string wrong = good;
    auto pos = wrong.find("\"schema_version\": 1");
    REQUIRE(pos != std::string::npos);
    wrong.replace(pos, 19, "\"schema_version\": 9");
    CHECK(code_of([&] { report_from_string(wrong); }) == errc::schema_mismatch);
}

TEST_CASE("plot csvs are emitted per series and are byte-stable")
{
    TempDir dir;
    RunRecord run = small_run();
    std::string out1 = dir.file("plots1");
    std::string out2 = dir.file("plots2");
    write_plot_csvs(run, out1);
    write_plot_csvs(run, out2);
    for (const char* name : {"price.csv", "amounts.csv", "utility.csv", "gamma_d.csv"}) {
        std::ifstream f1(fs::path(out1) / name), f2(fs::path(out2) / name);
        REQUIRE(f1.good());
        std::string s1((std::istreambuf_iterator<char>(f1)), {});
        std::string s2((std::istreambuf_iterator<char>(f2)), {});
        CHECK(s1 == s2);
        CHECK(s1.rfind("period,value\n", 0) == 0);
        CHECK(std::count(s1.begin(), s1.end(), '\n') == 13); // header + 12 periods
    }

    RunRecord empty;
    CHECK(code_of([&] { write_plot_csvs(empty, dir.file("p")); }) == errc::empty_run);
}
