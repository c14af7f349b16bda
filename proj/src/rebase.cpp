#include "pegsim/rebase.hpp"

namespace pegsim {

RebaseState make_rebase_state(Amount initial_supply, Price target)
{
    if (initial_supply.units == 0)
        fail(errc::config_invalid, "rebase token needs a positive initial supply");
    if (target.units == 0)
        fail(errc::zero_target, "rebase target price must be positive");
    RebaseState s;
    s.total_supply = initial_supply;
    // Share pool == initial supply units, so shares and balances start 1:1.
    s.scalar = Scalar{initial_supply.units, initial_supply.units};
    s.target = target;
    return s;
}

SupplyDelta supply_delta(Price price, Price target, Amount total_supply)
{
    if (target.units == 0)
        fail(errc::zero_target, "supply_delta target price must be positive");
    SupplyDelta d;
    if (price.units >= target.units) {
        d.negative = false;
        d.magnitude = Amount{mul_div_trunc(total_supply.units, price.units - target.units,
                                           target.units)};
    } else {
        d.negative = true;
        d.magnitude = Amount{mul_div_trunc(total_supply.units, target.units - price.units,
                                           target.units)};
    }
    return d;
}

RebaseState apply_rebase(const RebaseState& state, Price oracle_price)
{
    if (oracle_price.units == 0)
        fail(errc::zero_target, "rebase oracle price must be positive");
    SupplyDelta d = supply_delta(oracle_price, state.target, state.total_supply);
    u128 step = state.lag_divisor > 1 ? d.magnitude.units / state.lag_divisor
                                      : d.magnitude.units;
    RebaseState next = state;
    if (d.negative) {
        if (step >= state.total_supply.units)
            fail(errc::supply_underflow, "rebase would contract supply below one base unit");
        next.total_supply = Amount{state.total_supply.units - step};
    } else {
        next.total_supply = Amount{checked_add(state.total_supply.units, step)};
    }
    next.scalar = Scalar{next.total_supply.units, state.scalar.den};
    next.epoch = state.epoch + 1;
    return next;
}

} // namespace pegsim
