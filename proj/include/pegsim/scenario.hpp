#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pegsim/fixed.hpp"

namespace pegsim {

enum class Protocol { rebase, dual, tritoken };
enum class Mode { replay, endogenous, idealized };

const char* protocol_name(Protocol p);
const char* mode_name(Mode m);
Protocol parse_protocol(std::string_view s);
Mode parse_mode(std::string_view s);

struct CohortSpec {
    std::string id;
    std::size_t join_period = 1;
    std::optional<std::size_t> exit_period;
    std::optional<UsdValue> usd;  // invest this much USD at the join price
    std::optional<Amount> units;  // or buy exactly this many tokens
};

struct ShockSpec {
    std::size_t period = 0;
    std::string token = "stable"; // "stable" or "share"
    u128 fraction_ppb = 0;        // fraction of circulating supply sold, per 1e9
};

// A run configuration. Scenario files are flat `key = value` documents; see
// the README for the full key list. Defaults here are the desk defaults.
struct Scenario {
    Protocol protocol = Protocol::rebase;
    Mode mode = Mode::replay;
    std::size_t horizon = 0;
    Price peg = usd_price(1);

    Amount initial_supply = tokens(1'000'000);
    Amount initial_share_supply = tokens(1'000'000);
    Price initial_share_price = usd_price(1);

    // Endogenous pools; zero means "derive from the 10%-depth default".
    Amount stable_pool_base, stable_pool_quote;
    Amount share_pool_base, share_pool_quote;

    u128 arb_threshold_ppb = 5'000'000;  // 0.5% band around the peg
    u128 arb_capacity_ppb = 10'000'000;  // 1% of stable supply per period
    u128 bond_spend_ppb = 10'000'000;    // 1% of cash supply per below-peg period

    double discount_rate = 0.0;
    std::vector<double> discount_rates; // explicit per-period curve, optional

    std::vector<CohortSpec> cohorts;
    std::vector<ShockSpec> shocks;

    // Price input for simulate runs: a cycle repeated across the horizon.
    std::vector<Price> price_cycle;
    // Replay sources; paths are resolved against the scenario file directory.
    std::string replay_stable_csv;
    std::string replay_share_csv;

    std::size_t verdict_window = 30;
    double verdict_epsilon = 1e-6;

    // Raw key/value pairs in file order, echoed into the run report.
    std::vector<std::pair<std::string, std::string>> echo;
};

Scenario parse_scenario_text(const std::string& text, const std::string& base_dir);
Scenario parse_scenario_file(const std::string& path);

// Structural checks shared by every entry point; throws config_invalid.
void validate_scenario(const Scenario& s);

// Per-period rate curve for the run (explicit list or the constant rate).
std::vector<double> scenario_rates(const Scenario& s);

// Expands the price cycle across the horizon; empty when no cycle is set.
std::vector<Price> scenario_cycle_prices(const Scenario& s);

// Parses a fraction in [0, 1] with at most 9 decimals into parts-per-1e9.
u128 parse_fraction_ppb(std::string_view text);

} // namespace pegsim
