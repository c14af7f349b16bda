#include "pegsim/seigniorage.hpp"

namespace pegsim {

Amount redeem_stable(DualCoinState& state, Amount stable_in, Price share_price)
{
    if (stable_in.units == 0)
        return Amount{0};
    if (stable_in.units > state.stable_supply.units)
        fail(errc::insufficient_stable, "redeem exceeds stable supply");
    if (share_price.units == 0)
        fail(errc::zero_share_price, "cannot price redemption with a zero share price");
    Amount minted{mul_div_trunc(stable_in.units, state.peg.units, share_price.units)};
    state.stable_supply.units -= stable_in.units;
    state.share_supply.units = checked_add(state.share_supply.units, minted.units);
    return minted;
}

MintResult mint_stable(DualCoinState& state, UsdValue usd_value, Price share_price)
{
    if (usd_value.units < 0)
        fail(errc::zero_amount, "mint value must be non-negative");
    if (usd_value.units == 0)
        return MintResult{};
    if (share_price.units == 0)
        fail(errc::zero_share_price, "cannot burn shares at a zero share price");
    u128 usd_units = u128(usd_value.units);
    Amount burned{mul_div_trunc(usd_units, kScale, share_price.units)};
    if (burned.units > state.share_supply.units)
        fail(errc::insufficient_shares, "burn exceeds share supply");
    Amount minted{mul_div_trunc(usd_units, kScale, state.peg.units)};
    state.share_supply.units -= burned.units;
    state.stable_supply.units = checked_add(state.stable_supply.units, minted.units);
    return MintResult{burned, minted};
}

Amount BondQueue::total_face() const
{
    u128 sum = 0;
    for (const auto& e : entries)
        sum = checked_add(sum, e.face.units);
    return Amount{sum};
}

Amount issue_bond(TriTokenState& state, Amount cash_paid, Price cash_price,
                  std::size_t period)
{
    if (cash_price.units >= state.peg.units)
        fail(errc::not_below_peg, "bonds are only on sale below the peg");
    if (cash_paid.units == 0)
        fail(errc::insufficient_cash, "bond purchase needs a positive payment");
    if (cash_paid.units > state.cash_supply.units)
        fail(errc::insufficient_cash, "bond purchase exceeds cash supply");
    Amount face{mul_div_trunc(cash_paid.units, state.peg.units, cash_price.units)};
    state.cash_supply.units -= cash_paid.units;
    state.bonds.entries.push_back(BondEntry{period, face});
    return face;
}

ExpansionResult apply_expansion(TriTokenState& state, Price price)
{
    if (price.units <= state.peg.units)
        fail(errc::not_above_peg, "expansion requires a price above the peg");
    ExpansionResult r;
    r.minted = Amount{mul_div_trunc(state.cash_supply.units, price.units - state.peg.units,
                                    state.peg.units)};
    u128 remaining = r.minted.units;
    while (remaining > 0 && !state.bonds.entries.empty()) {
        BondEntry& head = state.bonds.entries.front();
        if (head.face.units <= remaining) {
            remaining -= head.face.units;
            state.bonds.entries.pop_front();
        } else {
            head.face.units -= remaining;
            remaining = 0;
        }
    }
    r.to_bonds = Amount{r.minted.units - remaining};
    r.to_shares = Amount{remaining};
    if (remaining > 0 && state.share_supply.units > 0) {
        for (const auto& [wallet, held] : state.share_registry) {
            u128 cut = mul_div_trunc(remaining, held, state.share_supply.units);
            if (cut > 0)
                r.shareholder_payouts.emplace_back(wallet, Amount{cut});
        }
    }
    state.cash_supply = Amount{checked_add(state.cash_supply.units, r.minted.units)};
    return r;
}

ArbitrageTrade arbitrage_step(DualCoinState& state, AmmPool& stable_pool,
                              AmmPool& share_pool, u128 threshold_ppb, Amount capacity)
{
    ArbitrageTrade trade;
    Price spot = spot_price(stable_pool);
    u128 below_bound = mul_div_trunc(state.peg.units, kScale - threshold_ppb, kScale);
    u128 above_bound = mul_div_ceil(state.peg.units, kScale + threshold_ppb, kScale);

    if (spot.units < below_bound) {
        // Stable is cheap: buy it, redeem it at the peg for shares, sell the
        // shares. Pushes the stable spot up and the share spot down.
        Price share_spot = spot_price(share_pool);
        if (share_spot.units == 0)
            return trade;
        u128 buy = capacity.units;
        if (buy >= stable_pool.reserve_base.units)
            buy = stable_pool.reserve_base.units - 1;
        if (buy > state.stable_supply.units)
            buy = state.stable_supply.units;
        if (buy == 0)
            return trade;
        Amount usd_in = swap_for_exact_out(stable_pool, SwapSide::sell_quote, Amount{buy});
        Amount minted = redeem_stable(state, Amount{buy}, share_spot);
        Amount usd_out{0};
        if (minted.units > 0)
            usd_out = swap_exact_in(share_pool, SwapSide::sell_base, minted);
        trade.acted = true;
        trade.bought_stable = true;
        trade.stable_traded = Amount{buy};
        trade.shares_traded = minted;
        trade.usd_spent = UsdValue{i128(usd_in.units)};
        trade.usd_received = UsdValue{i128(usd_out.units)};
        return trade;
    }

    if (spot.units > above_bound) {
        // Stable is rich: buy shares, burn them to mint stable at the peg,
        // sell the stable. Pushes the stable spot back down.
        Price share_spot = spot_price(share_pool);
        if (share_spot.units == 0)
            return trade;
        u128 shares_needed = mul_div_trunc(capacity.units, state.peg.units, share_spot.units);
        if (shares_needed >= share_pool.reserve_base.units)
            shares_needed = share_pool.reserve_base.units - 1;
        if (shares_needed == 0)
            return trade;
        UsdValue usd_value = token_value(Amount{shares_needed}, share_spot);
        if (usd_value.units == 0)
            return trade;
        u128 will_burn = mul_div_trunc(u128(usd_value.units), kScale, share_spot.units);
        if (will_burn > state.share_supply.units)
            return trade;
        Amount usd_in =
            swap_for_exact_out(share_pool, SwapSide::sell_quote, Amount{shares_needed});
        MintResult mint = mint_stable(state, usd_value, share_spot);
        Amount usd_out{0};
        if (mint.stable_minted.units > 0)
            usd_out = swap_exact_in(stable_pool, SwapSide::sell_base, mint.stable_minted);
        trade.acted = true;
        trade.bought_stable = false;
        trade.stable_traded = mint.stable_minted;
        trade.shares_traded = mint.shares_burned;
        trade.usd_spent = UsdValue{i128(usd_in.units)};
        trade.usd_received = UsdValue{i128(usd_out.units)};
        return trade;
    }

    return trade;
}

} // namespace pegsim
