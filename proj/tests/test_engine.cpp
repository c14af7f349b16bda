#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pegsim/engine.hpp"
#include "pegsim/report.hpp"

using namespace pegsim;

namespace {

TimeSeries series_of(std::initializer_list<const char*> prices)
{
    TimeSeries s;
    s.token = "stable";
    std::int64_t day = days_from_civil(2022, 3, 1);
    for (const char* p : prices)
        s.points.push_back(PricePoint{day++, parse_price(p), std::nullopt, std::nullopt});
    return s;
}

Scenario base_scenario(Protocol p, Mode m, std::size_t horizon)
{
    Scenario s;
    s.protocol = p;
    s.mode = m;
    s.horizon = horizon;
    return s;
}

CohortSpec dollar_cohort(const std::string& id, std::size_t join)
{
    CohortSpec c;
    c.id = id;
    c.join_period = join;
    c.usd = usd(1);
    return c;
}

} // namespace

TEST_CASE("scenario text parses into typed fields")
{
    std::string text = "# comment\n"
                       "protocol = dual\n"
                       "mode = endogenous\n"
                       "horizon = 42\n"
                       "arb.threshold = 0.005\n"
                       "arb.capacity.fraction = 0.01\n"
                       "cohort.1.join = 2\n"
                       "cohort.1.usd = 3.5\n"
                       "shock.1.period = 5\n"
                       "shock.1.token = stable\n"
                       "shock.1.fraction = 0.25\n";
    Scenario s = parse_scenario_text(text, ".");
    CHECK(s.protocol == Protocol::dual);
    CHECK(s.mode == Mode::endogenous);
    CHECK(s.horizon == 42);
    CHECK(s.arb_threshold_ppb == u128(5'000'000));
    REQUIRE(s.cohorts.size() == 1);
    CHECK(s.cohorts[0].join_period == 2);
    CHECK(s.cohorts[0].usd == UsdValue{3'500'000'000});
    REQUIRE(s.shocks.size() == 1);
    CHECK(s.shocks[0].fraction_ppb == u128(250'000'000));
    CHECK(s.echo.size() == 10);
    validate_scenario(s);
}

TEST_CASE("scenario rejections")
{
    auto rejects = [](const std::string& text) {
        try {
            Scenario s = parse_scenario_text(text, ".");
            validate_scenario(s);
            return false;
        } catch (const SimError& e) {
            return e.code() == errc::config_invalid;
        }
    };
    CHECK(rejects("protocol = nope\nhorizon = 1\n"));
    CHECK(rejects("protocol = rebase\nmode = replay\nhorizon = 0\n"));
    CHECK(rejects("bogus.key = 1\nhorizon = 1\n"));
    CHECK(rejects("horizon\n"));
    CHECK(rejects("protocol = rebase\nmode = endogenous\nhorizon = 1\n"));
    CHECK(rejects("protocol = tritoken\nmode = idealized\nhorizon = 1\n"));
    CHECK(rejects("horizon = 5\ncohort.1.join = 9\ncohort.1.usd = 1\n"));
    CHECK(rejects("horizon = 5\ncohort.1.join = 1\n")); // neither usd nor units
    CHECK(rejects("horizon = 5\ncohort.1.join = 1\ncohort.1.usd = 1\ncohort.1.units = 1\n"));
    CHECK(rejects("mode = endogenous\nprotocol = dual\nhorizon = 5\n"
                  "shock.1.period = 1\nshock.1.token = other\nshock.1.fraction = 0.5\n"));
    CHECK(rejects("protocol = dual\nmode = replay\nhorizon = 5\n"
                  "shock.1.period = 1\nshock.1.token = stable\nshock.1.fraction = 0.5\n"));
}

TEST_CASE("replay produces one record per period")
{
    Scenario s = base_scenario(Protocol::rebase, Mode::replay, 3);
    s.cohorts.push_back(dollar_cohort("c1", 1));
    ReplayData data{series_of({"1.0", "1.1", "0.9"}), std::nullopt};
    RunRecord run = run_scenario(s, data);
    CHECK(run.periods.size() == 3);
    CHECK(run.periods[0].period == 1);
    CHECK(run.periods[2].period == 3);
    REQUIRE(run.verdict.has_value());
}

TEST_CASE("a short series exhausts the replay")
{
    Scenario s = base_scenario(Protocol::rebase, Mode::replay, 5);
    ReplayData data{series_of({"1.0", "1.1"}), std::nullopt};
    try {
        run_scenario(s, data);
        FAIL("expected ReplayExhausted");
    } catch (const SimError& e) {
        CHECK(e.code() == errc::replay_exhausted);
    }
}

TEST_CASE("replay never mutates the input series")
{
    Scenario s = base_scenario(Protocol::rebase, Mode::replay, 3);
    s.cohorts.push_back(dollar_cohort("c1", 1));
    ReplayData data{series_of({"1.0", "1.1", "0.9"}), std::nullopt};
    TimeSeries before = data.stable;
    run_scenario(s, data);
    REQUIRE(data.stable.size() == before.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(data.stable.points[i].day == before.points[i].day);
        CHECK(data.stable.points[i].price_usd == before.points[i].price_usd);
    }
}

TEST_CASE("zero horizon is rejected")
{
    Scenario s = base_scenario(Protocol::rebase, Mode::replay, 0);
    try {
        run_scenario(s, std::nullopt);
        FAIL("expected ConfigInvalid");
    } catch (const SimError& e) {
        CHECK(e.code() == errc::config_invalid);
    }
}

TEST_CASE("runs are deterministic byte for byte")
{
    Scenario s = base_scenario(Protocol::rebase, Mode::idealized, 50);
    s.price_cycle = {Price{500'000'000}, Price{1'250'000'000}, usd_price(2),
                     Price{800'000'000}};
    s.cohorts.push_back(dollar_cohort("c1", 1));
    RunRecord a = run_scenario(s, std::nullopt);
    RunRecord b = run_scenario(s, std::nullopt);
    CHECK(report_to_string(a) == report_to_string(b));
}

TEST_CASE("cash flows reconcile with cohort purchases minus redemptions")
{
    Scenario s = base_scenario(Protocol::rebase, Mode::idealized, 30);
    s.price_cycle = {Price{900'000'000}, Price{1'300'000'000}, Price{700'000'000},
                     usd_price(1)};
    auto c1 = dollar_cohort("c1", 1);
    auto c2 = dollar_cohort("c2", 4);
    c2.usd = usd(250);
    c2.exit_period = 20;
    auto c3 = dollar_cohort("c3", 10);
    c3.usd.reset();
    c3.units = tokens(7);
    s.cohorts = {c1, c2, c3};

    RunRecord run = run_scenario(s, std::nullopt);
    for (const auto& p : run.periods) {
        i128 expect = 0;
        for (const auto& c : run.cohorts) {
            if (c.join_period == p.period)
                expect += c.invested.units;
            if (c.exit_period && *c.exit_period == p.period)
                expect -= c.exit_proceeds->units;
        }
        CHECK(p.inflow.units == expect);
    }
}

TEST_CASE("idealized rebase pins every cohort to its investment")
{
    Scenario s = base_scenario(Protocol::rebase, Mode::idealized, 200);
    s.price_cycle = {Price{500'000'000}, Price{1'250'000'000}, usd_price(2),
                     Price{800'000'000}};
    auto c1 = dollar_cohort("c1", 1);
    c1.usd = usd(1000);
    auto c2 = dollar_cohort("c2", 77);
    c2.usd = usd(3);
    s.cohorts = {c1, c2};

    RunRecord run = run_scenario(s, std::nullopt);
    for (const auto& p : run.periods) {
        for (std::size_t i = 0; i < run.cohorts.size(); ++i) {
            const auto& c = run.cohorts[i];
            if (p.period < c.join_period)
                continue;
            double invested = usd_to_double(c.invested);
            double got = usd_to_double(p.cohort_utilities[i]);
            CHECK(std::abs(got - invested) / invested <= 1e-6);
        }
    }
    REQUIRE(run.verdict.has_value());
    CHECK(run.verdict->condition_ii);
    CHECK(run.verdict->rational);
}

TEST_CASE("replay rebase balances track the price while utility floats")
{
    Scenario s = base_scenario(Protocol::rebase, Mode::replay, 3);
    s.cohorts.push_back(dollar_cohort("c1", 1));
    ReplayData data{series_of({"1.0", "1.1", "1.1"}), std::nullopt};
    RunRecord run = run_scenario(s, data);
    // balances scale by p/t each period once the cohort holds
    double u0 = usd_to_double(run.periods[0].cohort_utilities[0]);
    double u1 = usd_to_double(run.periods[1].cohort_utilities[0]);
    CHECK(u0 == doctest::Approx(1.0));
    CHECK(u1 == doctest::Approx(1.21).epsilon(1e-6)); // 1.1x balance at price 1.1
}

TEST_CASE("dual replay keeps quantities constant")
{
    Scenario s = base_scenario(Protocol::dual, Mode::replay, 4);
    s.cohorts.push_back(dollar_cohort("c1", 1));
    ReplayData data;
    data.stable = series_of({"1.0", "0.9", "0.5", "0.02"});
    data.share = series_of({"50", "40", "1", "0.001"});
    data.share->token = "share";
    RunRecord run = run_scenario(s, data);
    for (const auto& p : run.periods)
        CHECK(p.cohort_units[0] == tokens(1));
    CHECK(usd_to_double(run.periods[3].cohort_utilities[0]) == doctest::Approx(0.02));
    CHECK(run.periods[3].prices.at("share") == Price{1'000'000});
    REQUIRE(run.verdict.has_value());
    CHECK_FALSE(run.verdict->condition_ii);
    CHECK_FALSE(run.verdict->rational);
}

TEST_CASE("dual replay without a share series is invalid")
{
    Scenario s = base_scenario(Protocol::dual, Mode::replay, 2);
    ReplayData data{series_of({"1.0", "0.9"}), std::nullopt};
    try {
        run_scenario(s, data);
        FAIL("expected ConfigInvalid");
    } catch (const SimError& e) {
        CHECK(e.code() == errc::config_invalid);
    }
}

TEST_CASE("endogenous dual-coin death spiral")
{
    Scenario s = base_scenario(Protocol::dual, Mode::endogenous, 30);
    s.initial_supply = tokens(1'000'000);
    s.initial_share_supply = tokens(1'000'000);
    s.initial_share_price = usd_price(50);
    s.stable_pool_base = tokens(100'000);
    s.stable_pool_quote = tokens(100'000);
    s.share_pool_base = tokens(100'000);
    s.share_pool_quote = tokens(5'000'000);
    s.cohorts.push_back(dollar_cohort("c1", 1));
    for (std::size_t p = 3; p <= 12; ++p)
        s.shocks.push_back(ShockSpec{p, "stable", 100'000'000}); // 10% per period

    RunRecord run = run_scenario(s, std::nullopt);
    u128 prev_share_supply = 0;
    u128 prev_share_spot = ~u128(0);
    for (const auto& p : run.periods) {
        u128 share_supply = p.supplies.at("share").units;
        u128 share_spot = p.prices.at("share").units;
        CHECK(share_supply >= prev_share_supply);
        if (p.period >= 3 && p.period <= 12) {
            CHECK(share_supply > prev_share_supply);
            CHECK(share_spot < prev_share_spot);
            CHECK(p.prices.at("stable").units < s.peg.units);
        }
        if (p.period > 12)
            CHECK(p.prices.at("stable").units < s.peg.units);
        prev_share_supply = share_supply;
        prev_share_spot = share_spot;
    }
}

TEST_CASE("tritoken script issues bonds below peg and expands above")
{
    Scenario s = base_scenario(Protocol::tritoken, Mode::replay, 8);
    s.initial_supply = tokens(1000);
    s.initial_share_supply = tokens(100);
    s.bond_spend_ppb = 10'000'000; // 1%
    s.price_cycle = {Price{800'000'000}, Price{800'000'000}, Price{800'000'000},
                     Price{800'000'000}, Price{800'000'000}, Price{1'200'000'000},
                     usd_price(1),      usd_price(1)};
    s.cohorts.push_back(dollar_cohort("c1", 1));
    RunRecord run = run_scenario(s, std::nullopt);

    // five below-peg periods build the queue
    u128 prev_cash = s.initial_supply.units;
    for (std::size_t k = 0; k < 5; ++k) {
        const auto& p = run.periods[k];
        CHECK(p.supplies.at("bond_face").units > 0);
        CHECK(p.supplies.at("cash").units < prev_cash);
        prev_cash = p.supplies.at("cash").units;
    }
    // expansion mints exactly (1.2 - 1.0) * supply / 1.0 and clears the queue
    u128 before = run.periods[4].supplies.at("cash").units;
    u128 after = run.periods[5].supplies.at("cash").units;
    CHECK(after - before == mul_div_trunc(before, 200'000'000, kScale));
    CHECK(run.periods[5].supplies.at("bond_face").units == 0);
    // flat tail: nothing moves at the peg
    CHECK(run.periods[6].supplies.at("cash").units == after);
    CHECK(run.periods[7].supplies.at("cash").units == after);
}

TEST_CASE("to_run_view mirrors the record")
{
    Scenario s = base_scenario(Protocol::rebase, Mode::idealized, 6);
    s.price_cycle = {usd_price(1), Price{1'500'000'000}};
    auto c = dollar_cohort("c1", 2);
    c.exit_period = 5;
    s.cohorts.push_back(c);
    RunRecord run = run_scenario(s, std::nullopt);
    RunView view = to_run_view(run);
    CHECK(view.horizon == 6);
    CHECK(view.ledger.periods() == 6);
    REQUIRE(view.cohorts.size() == 1);
    CHECK(view.cohorts[0].exit_period == run.cohorts[0].exit_period);
    CHECK(view.cohorts[0].exit_proceeds == run.cohorts[0].exit_proceeds);
    RunRecord empty;
    CHECK_THROWS_AS(to_run_view(empty), SimError);
}
