#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pegsim/ponzi.hpp"
#include "pegsim/scenario.hpp"
#include "pegsim/timeseries.hpp"

namespace pegsim {

inline constexpr const char* kEngineVersion = "pegsim/0.1.0";

struct CohortRecord {
    std::string id;
    std::size_t join_period = 1;
    UsdValue invested;
    Amount units_at_join;
    std::optional<std::size_t> exit_period;
    std::optional<UsdValue> exit_proceeds;
};

struct PeriodRecord {
    std::size_t period = 0;                 // 1-based
    std::map<std::string, Price> prices;    // "stable", "share", "quote"
    std::map<std::string, Amount> supplies; // "stable", "share", "cash", "bond_face"
    UsdValue inflow;                        // I_s: cohort purchases minus redemptions
    UsdValue arb_usd_spent;
    UsdValue arb_usd_received;
    std::vector<Amount> cohort_units;       // aligned with RunRecord::cohorts
    std::vector<UsdValue> cohort_utilities;
};

struct RunRecord {
    std::string engine_version = kEngineVersion;
    std::vector<std::pair<std::string, std::string>> scenario_echo;
    std::string protocol;
    std::string mode;
    std::size_t horizon = 0;
    std::vector<double> rates;
    std::size_t verdict_window = 30;
    double verdict_epsilon = 1e-6;
    std::vector<CohortRecord> cohorts;
    std::vector<PeriodRecord> periods;
    std::optional<PonziVerdict> verdict;
};

struct ReplayData {
    TimeSeries stable;
    std::optional<TimeSeries> share;
};

// Runs one scenario to completion and classifies the result. Fully
// deterministic: the same scenario and input series produce an identical
// RunRecord. Each period steps through the same phases: read prices, apply
// shocks, run the protocol hook, settle cohort joins/exits, snapshot.
RunRecord run_scenario(const Scenario& scenario, const std::optional<ReplayData>& data);

// Classifier inputs extracted from a finished record.
RunView to_run_view(const RunRecord& record);

} // namespace pegsim
