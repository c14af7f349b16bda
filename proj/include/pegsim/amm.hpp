#pragma once

#include "pegsim/fixed.hpp"

namespace pegsim {

// Constant-product pool, zero fee. All rounding favors the pool, so the
// reserve product never decreases across swaps.
struct AmmPool {
    Amount reserve_base;  // token
    Amount reserve_quote; // USD
};

enum class SwapSide {
    sell_base,  // trader deposits base, withdraws quote
    sell_quote, // trader deposits quote, withdraws base
};

// Spot quote in USD per token: reserve_quote / reserve_base, truncated to 1e-9.
Price spot_price(const AmmPool& pool);

// Swap a fixed input; returns the output amount and updates the reserves.
Amount swap_exact_in(AmmPool& pool, SwapSide side, Amount amount_in);

// Swap for a fixed output (`side` names the direction as above: sell_quote
// withdraws base). Returns the required input. Throws excessive_output when
// the request would drain the output reserve.
Amount swap_for_exact_out(AmmPool& pool, SwapSide side, Amount amount_out);

} // namespace pegsim
