#include "pegsim/engine.hpp"

#include <algorithm>

#include "pegsim/amm.hpp"
#include "pegsim/rebase.hpp"
#include "pegsim/seigniorage.hpp"
#include "pegsim/wallet.hpp"

namespace pegsim {

namespace {

// Tracks one cohort position across the run.
struct Position {
    CohortSpec spec;
    std::size_t record_index = 0;
    bool active = false;
    bool done = false;
    Amount units;  // dual/tritoken holdings
    u128 shares = 0; // rebase holdings
};

Amount units_for_usd(UsdValue invested, Price price, const std::string& id)
{
    if (price.units == 0)
        fail(errc::config_invalid, "cohort '" + id + "' would join at a zero price");
    return Amount{mul_div_trunc(u128(invested.units), kScale, price.units)};
}

struct JoinExitOutcome {
    UsdValue inflow; // purchases minus redemptions this period
};

// Phase 4: joins first (a cohort may exit in its join period), then exits at
// the same price. Cash flows are exact in scaled units.
JoinExitOutcome settle_cohorts(std::vector<Position>& positions,
                               std::vector<CohortRecord>& records, std::size_t period,
                               Price price, const Scalar* rebase_scalar)
{
    JoinExitOutcome out;
    for (Position& pos : positions) {
        if (!pos.active && !pos.done && pos.spec.join_period == period) {
            CohortRecord& rec = records[pos.record_index];
            if (pos.spec.usd) {
                rec.invested = *pos.spec.usd;
                pos.units = units_for_usd(*pos.spec.usd, price, pos.spec.id);
            } else {
                pos.units = *pos.spec.units;
                rec.invested = token_value(pos.units, price);
            }
            rec.units_at_join = pos.units;
            if (rebase_scalar)
                pos.shares = shares_for_amount(pos.units, *rebase_scalar);
            pos.active = true;
            out.inflow.units += rec.invested.units;
        }
    }
    for (Position& pos : positions) {
        if (pos.active && pos.spec.exit_period && *pos.spec.exit_period == period) {
            Amount held = pos.units;
            if (rebase_scalar)
                held = Amount{mul_div_trunc(pos.shares, rebase_scalar->num,
                                            rebase_scalar->den)};
            UsdValue proceeds = token_value(held, price);
            CohortRecord& rec = records[pos.record_index];
            rec.exit_period = period;
            rec.exit_proceeds = proceeds;
            pos.active = false;
            pos.done = true;
            pos.units = Amount{0};
            pos.shares = 0;
            out.inflow.units -= proceeds.units;
        }
    }
    return out;
}

void snapshot_cohorts(const std::vector<Position>& positions, PeriodRecord& rec,
                      Price price, const Scalar* rebase_scalar)
{
    rec.cohort_units.resize(positions.size(), Amount{0});
    rec.cohort_utilities.resize(positions.size(), UsdValue{0});
    for (const Position& pos : positions) {
        if (!pos.active)
            continue;
        Amount held = pos.units;
        if (rebase_scalar)
            held = Amount{mul_div_trunc(pos.shares, rebase_scalar->num, rebase_scalar->den)};
        rec.cohort_units[pos.record_index] = held;
        rec.cohort_utilities[pos.record_index] = utility(held, price);
    }
}

std::vector<Position> make_positions(const Scenario& s, std::vector<CohortRecord>& records)
{
    std::vector<Position> positions;
    positions.reserve(s.cohorts.size());
    for (std::size_t i = 0; i < s.cohorts.size(); ++i) {
        Position p;
        p.spec = s.cohorts[i];
        p.record_index = i;
        positions.push_back(p);
        CohortRecord rec;
        rec.id = s.cohorts[i].id;
        rec.join_period = s.cohorts[i].join_period;
        records.push_back(rec);
    }
    return positions;
}

std::vector<Price> replay_prices(const TimeSeries& series, std::size_t horizon,
                                 const std::string& what)
{
    if (series.size() < horizon)
        fail(errc::replay_exhausted, what + " series has " + std::to_string(series.size()) +
                                         " points, horizon needs " +
                                         std::to_string(horizon));
    std::vector<Price> prices(horizon);
    for (std::size_t k = 0; k < horizon; ++k)
        prices[k] = series.points[k].price_usd;
    return prices;
}

std::vector<Price> resolve_price_input(const Scenario& s,
                                       const std::optional<ReplayData>& data,
                                       const std::string& what)
{
    if (data)
        return replay_prices(data->stable, s.horizon, what);
    std::vector<Price> cycle = scenario_cycle_prices(s);
    if (cycle.empty())
        fail(errc::config_invalid,
             "no price input: provide replay series or prices.cycle");
    return cycle;
}

// ---- rebase ----------------------------------------------------------------

void run_rebase(const Scenario& s, const std::optional<ReplayData>& data, RunRecord& out)
{
    std::vector<Price> quotes = resolve_price_input(s, data, "stable");
    RebaseState state = make_rebase_state(s.initial_supply, s.peg);
    std::vector<Position> positions = make_positions(s, out.cohorts);

    // Idealized mode models transient quote deviations around constant
    // aggregate demand: the protocol rebases against the quote, and the
    // market re-marks the token at (initial cap) / (new supply), which is
    // what keeps every holder's utility pinned to their investment.
    const bool idealized = s.mode == Mode::idealized;
    const u128 initial_cap = u128(token_value(s.initial_supply, s.peg).units);

    for (std::size_t period = 1; period <= s.horizon; ++period) {
        Price quote = quotes[period - 1];
        state = apply_rebase(state, quote);
        Price mark = quote;
        if (idealized)
            mark = Price{mul_div_trunc(initial_cap, kScale, state.total_supply.units)};

        PeriodRecord rec;
        rec.period = period;
        JoinExitOutcome settled =
            settle_cohorts(positions, out.cohorts, period, mark, &state.scalar);
        rec.inflow = settled.inflow;
        snapshot_cohorts(positions, rec, mark, &state.scalar);
        rec.prices["stable"] = mark;
        if (idealized)
            rec.prices["quote"] = quote;
        rec.supplies["stable"] = state.total_supply;
        out.periods.push_back(std::move(rec));
    }
}

// ---- dual-coin -------------------------------------------------------------

void run_dual_replay(const Scenario& s, const ReplayData& data, RunRecord& out)
{
    std::vector<Price> stable_prices = replay_prices(data.stable, s.horizon, "stable");
    if (!data.share)
        fail(errc::config_invalid, "dual replay needs a share price series");
    std::vector<Price> share_prices = replay_prices(*data.share, s.horizon, "share");

    std::vector<Position> positions = make_positions(s, out.cohorts);
    for (std::size_t period = 1; period <= s.horizon; ++period) {
        Price price = stable_prices[period - 1];
        PeriodRecord rec;
        rec.period = period;
        JoinExitOutcome settled =
            settle_cohorts(positions, out.cohorts, period, price, nullptr);
        rec.inflow = settled.inflow;
        snapshot_cohorts(positions, rec, price, nullptr);
        rec.prices["stable"] = price;
        rec.prices["share"] = share_prices[period - 1];
        // Passive replay: supplies come from the observed series when present.
        Amount supply = s.initial_supply;
        if (data.stable.points[period - 1].total_supply)
            supply = *data.stable.points[period - 1].total_supply;
        rec.supplies["stable"] = supply;
        out.periods.push_back(std::move(rec));
    }
}

AmmPool init_pool(Amount base, Amount quote, Amount supply, Price price)
{
    // Default depth: 10% of circulating supply on the token side, priced in.
    if (base.units == 0)
        base = Amount{supply.units / 10};
    if (quote.units == 0)
        quote = Amount{mul_div_trunc(base.units, price.units, kScale)};
    if (base.units == 0 || quote.units == 0)
        fail(errc::config_invalid, "pool reserves must be positive");
    return AmmPool{base, quote};
}

void run_dual_endogenous(const Scenario& s, RunRecord& out)
{
    DualCoinState state{s.initial_supply, s.initial_share_supply, s.peg};
    AmmPool stable_pool =
        init_pool(s.stable_pool_base, s.stable_pool_quote, s.initial_supply, s.peg);
    AmmPool share_pool = init_pool(s.share_pool_base, s.share_pool_quote,
                                   s.initial_share_supply, s.initial_share_price);
    std::vector<Position> positions = make_positions(s, out.cohorts);

    for (std::size_t period = 1; period <= s.horizon; ++period) {
        PeriodRecord rec;
        rec.period = period;

        for (const ShockSpec& shock : s.shocks) {
            if (shock.period != period)
                continue;
            if (shock.token == "stable") {
                u128 sell = mul_div_trunc(state.stable_supply.units, shock.fraction_ppb,
                                          kScale);
                if (sell > 0)
                    swap_exact_in(stable_pool, SwapSide::sell_base, Amount{sell});
            } else {
                u128 sell = mul_div_trunc(state.share_supply.units, shock.fraction_ppb,
                                          kScale);
                if (sell > 0)
                    swap_exact_in(share_pool, SwapSide::sell_base, Amount{sell});
            }
        }

        Amount capacity{mul_div_trunc(state.stable_supply.units, s.arb_capacity_ppb,
                                      kScale)};
        ArbitrageTrade trade =
            arbitrage_step(state, stable_pool, share_pool, s.arb_threshold_ppb, capacity);
        rec.arb_usd_spent = trade.usd_spent;
        rec.arb_usd_received = trade.usd_received;

        Price price = spot_price(stable_pool);
        JoinExitOutcome settled =
            settle_cohorts(positions, out.cohorts, period, price, nullptr);
        rec.inflow = settled.inflow;
        snapshot_cohorts(positions, rec, price, nullptr);
        rec.prices["stable"] = price;
        rec.prices["share"] = spot_price(share_pool);
        rec.supplies["stable"] = state.stable_supply;
        rec.supplies["share"] = state.share_supply;
        out.periods.push_back(std::move(rec));
    }
}

// ---- tri-token -------------------------------------------------------------

void run_tritoken(const Scenario& s, const std::optional<ReplayData>& data, RunRecord& out)
{
    std::vector<Price> prices = resolve_price_input(s, data, "stable");
    TriTokenState state;
    state.cash_supply = s.initial_supply;
    state.share_supply = s.initial_share_supply;
    state.peg = s.peg;
    if (state.share_supply.units > 0)
        state.share_registry["shareholders"] = state.share_supply.units;
    std::vector<Position> positions = make_positions(s, out.cohorts);

    for (std::size_t period = 1; period <= s.horizon; ++period) {
        Price price = prices[period - 1];
        if (price.units < s.peg.units && s.bond_spend_ppb > 0 && price.units > 0) {
            // Aggregate bondholder: spends a fixed fraction of the cash
            // supply on discounted bonds every below-peg period.
            Amount spend{mul_div_trunc(state.cash_supply.units, s.bond_spend_ppb, kScale)};
            if (spend.units > 0)
                issue_bond(state, spend, price, period);
        } else if (price.units > s.peg.units) {
            apply_expansion(state, price);
        }

        PeriodRecord rec;
        rec.period = period;
        JoinExitOutcome settled =
            settle_cohorts(positions, out.cohorts, period, price, nullptr);
        rec.inflow = settled.inflow;
        snapshot_cohorts(positions, rec, price, nullptr);
        rec.prices["stable"] = price;
        rec.supplies["cash"] = state.cash_supply;
        rec.supplies["share"] = state.share_supply;
        rec.supplies["bond_face"] = state.bonds.total_face();
        out.periods.push_back(std::move(rec));
    }
}

} // namespace

RunRecord run_scenario(const Scenario& scenario, const std::optional<ReplayData>& data)
{
    validate_scenario(scenario);
    if (scenario.mode == Mode::replay && !data && scenario.price_cycle.empty())
        fail(errc::config_invalid, "replay mode needs input series or a price cycle");
    if (scenario.protocol == Protocol::dual && scenario.mode == Mode::replay && !data)
        fail(errc::config_invalid, "dual replay needs stable and share series");

    RunRecord out;
    out.scenario_echo = scenario.echo;
    out.protocol = protocol_name(scenario.protocol);
    out.mode = mode_name(scenario.mode);
    out.horizon = scenario.horizon;
    out.rates = scenario_rates(scenario);
    out.verdict_window = scenario.verdict_window;
    out.verdict_epsilon = scenario.verdict_epsilon;

    switch (scenario.protocol) {
    case Protocol::rebase:
        run_rebase(scenario, data, out);
        break;
    case Protocol::dual:
        if (scenario.mode == Mode::endogenous)
            run_dual_endogenous(scenario, out);
        else
            run_dual_replay(scenario, *data, out);
        break;
    case Protocol::tritoken:
        run_tritoken(scenario, data, out);
        break;
    }

    out.verdict = classify_rational_ponzi(
        to_run_view(out), ClassifierConfig{out.verdict_window, out.verdict_epsilon});
    return out;
}

RunView to_run_view(const RunRecord& record)
{
    if (record.periods.empty() || record.horizon == 0)
        fail(errc::empty_run, "record has no periods");
    RunView view;
    view.horizon = record.horizon;
    view.curve.rates = record.rates;
    view.ledger.inflows.reserve(record.periods.size());
    for (const auto& p : record.periods)
        view.ledger.inflows.push_back(p.inflow);
    const PeriodRecord& last = record.periods.back();
    for (std::size_t i = 0; i < record.cohorts.size(); ++i) {
        const CohortRecord& c = record.cohorts[i];
        RunView::CohortView cv;
        cv.id = c.id;
        cv.join_period = c.join_period;
        cv.invested = c.invested;
        cv.exit_period = c.exit_period;
        cv.exit_proceeds = c.exit_proceeds;
        if (i < last.cohort_utilities.size())
            cv.final_utility = last.cohort_utilities[i];
        view.cohorts.push_back(std::move(cv));
    }
    return view;
}

} // namespace pegsim
