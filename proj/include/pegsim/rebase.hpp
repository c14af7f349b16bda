#pragma once

#include <cstdint>
#include <string>

#include "pegsim/fixed.hpp"
#include "pegsim/wallet.hpp"

namespace pegsim {

// Elastic-supply state machine. Balances are stored as shares against a
// global scalar whose denominator is the share pool fixed at creation; a
// rebase rewrites only the scalar numerator (the current supply in base
// units), so the adjustment is O(1) and exactly pro-rata.
struct RebaseState {
    std::string token = "stable";
    Amount total_supply;
    Scalar scalar;
    Price target = usd_price(1);
    std::uint64_t epoch = 0;
    u128 lag_divisor = 1; // full adjustment per rebase; raise to damp
};

RebaseState make_rebase_state(Amount initial_supply, Price target);

// Signed supply adjustment (price - target) * total_supply / target,
// truncated toward zero. Positive above the peg, negative below.
struct SupplyDelta {
    bool negative = false;
    Amount magnitude;

    i128 signed_units() const
    {
        return negative ? -i128(magnitude.units) : i128(magnitude.units);
    }
};

SupplyDelta supply_delta(Price price, Price target, Amount total_supply);

// One rebase: supply moves by supply_delta / lag_divisor, the scalar follows
// so every wallet's external balance scales by the same ratio, and the epoch
// advances. Wallet share counts are untouched.
RebaseState apply_rebase(const RebaseState& state, Price oracle_price);

} // namespace pegsim
