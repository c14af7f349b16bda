#include "pegsim/amm.hpp"

namespace pegsim {

namespace {

void require_live(const AmmPool& pool)
{
    if (pool.reserve_base.units == 0 || pool.reserve_quote.units == 0)
        fail(errc::empty_pool, "pool reserves must both be positive");
}

} // namespace

Price spot_price(const AmmPool& pool)
{
    require_live(pool);
    return Price{mul_div_trunc(pool.reserve_quote.units, kScale, pool.reserve_base.units)};
}

Amount swap_exact_in(AmmPool& pool, SwapSide side, Amount amount_in)
{
    require_live(pool);
    if (amount_in.units == 0)
        fail(errc::zero_amount, "swap input must be positive");

    u128& r_in = (side == SwapSide::sell_base) ? pool.reserve_base.units
                                               : pool.reserve_quote.units;
    u128& r_out = (side == SwapSide::sell_base) ? pool.reserve_quote.units
                                                : pool.reserve_base.units;
    u128 new_in = checked_add(r_in, amount_in.units);
    // out = r_out - ceil(k / new_in); the ceiling keeps the product >= k.
    u128 kept = mul_div_ceil(r_out, r_in, new_in);
    u128 out = r_out - kept; // kept >= 1, so the reserve never drains
    r_in = new_in;
    r_out = kept;
    return Amount{out};
}

Amount swap_for_exact_out(AmmPool& pool, SwapSide side, Amount amount_out)
{
    require_live(pool);
    if (amount_out.units == 0)
        fail(errc::zero_amount, "swap output must be positive");

    u128& r_in = (side == SwapSide::sell_base) ? pool.reserve_base.units
                                               : pool.reserve_quote.units;
    u128& r_out = (side == SwapSide::sell_base) ? pool.reserve_quote.units
                                                : pool.reserve_base.units;
    if (amount_out.units >= r_out)
        fail(errc::excessive_output, "requested output would drain the reserve");
    u128 remaining = r_out - amount_out.units;
    // in = ceil(k / remaining) - r_in; the ceiling keeps the product >= k.
    u128 needed = mul_div_ceil(r_in, r_out, remaining);
    u128 in = needed - r_in;
    r_in = needed;
    r_out = remaining;
    return Amount{in};
}

} // namespace pegsim
