#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "pegsim/amm.hpp"
#include "pegsim/fixed.hpp"

namespace pegsim {

// Dual-coin design: a price-stable coin plus a volatile share coin that
// absorbs its volatility through mint/burn arbitrage at the peg.
struct DualCoinState {
    Amount stable_supply;
    Amount share_supply;
    Price peg = usd_price(1);
};

// Burn `stable_in` stable coins and mint peg-value worth of shares at the
// quoted share price. Returns the shares minted.
Amount redeem_stable(DualCoinState& state, Amount stable_in, Price share_price);

struct MintResult {
    Amount shares_burned;
    Amount stable_minted;
};

// Burn `usd_value` worth of shares and mint stable at the peg.
MintResult mint_stable(DualCoinState& state, UsdValue usd_value, Price share_price);

// --- three-token design -----------------------------------------------------

struct BondEntry {
    std::size_t issue_period = 0;
    Amount face;
};

struct BondQueue {
    std::deque<BondEntry> entries;

    Amount total_face() const;
    bool empty() const { return entries.empty(); }
};

struct TriTokenState {
    Amount cash_supply;                          // price-stable coin
    BondQueue bonds;                             // outstanding discounted debt
    Amount share_supply;                         // seigniorage claim
    std::map<std::string, u128> share_registry;  // wallet -> share units
    Price peg = usd_price(1);
};

// Below the peg, cash buys bonds at the spot price: the cash is burned and a
// face claim of cash_paid * peg / price joins the back of the queue.
Amount issue_bond(TriTokenState& state, Amount cash_paid, Price cash_price,
                  std::size_t period);

struct ExpansionResult {
    Amount minted;
    Amount to_bonds;
    Amount to_shares;
    // Pro-rata payouts by registry; truncation dust stays undistributed.
    std::vector<std::pair<std::string, Amount>> shareholder_payouts;
};

// Above the peg, mint (price - peg) * cash_supply / peg new cash. Bonds are
// redeemed at face strictly FIFO until the mint runs out; only then does the
// remainder go to shareholders.
ExpansionResult apply_expansion(TriTokenState& state, Price price);

// --- peg arbitrage over AMM pools -------------------------------------------

struct ArbitrageTrade {
    bool acted = false;
    bool bought_stable = false;   // below-peg direction (redeem leg)
    Amount stable_traded;         // stable bought (below peg) or sold (above peg)
    Amount shares_traded;         // shares minted+sold (below) or bought+burned (above)
    UsdValue usd_spent;           // arbitrageur USD into pools
    UsdValue usd_received;        // arbitrageur USD out of pools
};

// One arbitrage pass against the dual-coin system. Below peg*(1-threshold):
// buy up to `capacity` stable from the pool, redeem it for shares, dump the
// shares. Above peg*(1+threshold): buy shares, mint stable against them, dump
// the stable. Inside the band: no-op. `threshold_ppb` is parts-per-1e9.
ArbitrageTrade arbitrage_step(DualCoinState& state, AmmPool& stable_pool,
                              AmmPool& share_pool, u128 threshold_ppb, Amount capacity);

} // namespace pegsim
