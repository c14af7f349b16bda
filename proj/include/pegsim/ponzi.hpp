#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pegsim/discount.hpp"
#include "pegsim/fixed.hpp"

namespace pegsim {

// One investor position: joined at `join_period` paying `invested` USD for
// `units` tokens, optionally exited at `exit_period` for `exit_proceeds`.
struct Cohort {
    std::string id;
    std::size_t join_period = 1; // 1-based
    UsdValue invested;
    Amount units;
    std::optional<std::size_t> exit_period;
    std::optional<UsdValue> exit_proceeds;
};

// Investor utility: the USD market value of the held position, Q x P.
UsdValue utility(Amount units, Price price);

struct CohortOutcome {
    std::string id;
    double entry_pv = 0.0;
    double exit_pv = 0.0;
    bool worse_off = false;
    bool strictly_better = false;
};

// Cash comparison tolerance for the Pareto test, in USD.
inline constexpr double kParetoToleranceUsd = 1e-6;

// Both legs are discounted to period 0: the entry leg at the join period, the
// exit leg at the exit period (realized proceeds) or at T (mark-to-market of
// the final holding).
CohortOutcome cohort_outcome(const Cohort& c, const DiscountCurve& curve, Price final_price,
                             std::size_t t_max);

struct ParetoResult {
    bool weak = false;
    bool strict = false;
    bool vacuous = false; // no outcomes at all; weak holds vacuously
};

ParetoResult pareto_check(const std::vector<CohortOutcome>& outcomes);

struct WorstCohort {
    std::string id;
    double shortfall = 0.0; // entry_pv - exit_pv
};

struct PonziVerdict {
    bool condition_i = false;
    bool condition_ii = false;
    bool rational = false;
    bool weak_pareto = false;
    bool strict_pareto = false;
    bool pareto_vacuous = false;
    std::vector<double> gamma_d;
    std::optional<WorstCohort> worst_cohort;
    std::size_t window = 0;
    double epsilon = 0.0;
};

struct ClassifierConfig {
    std::size_t window = 30;  // trailing periods that must keep Gamma(t)*D_t positive
    double epsilon = 1e-6;    // strict-positivity threshold, USD
};

// Everything the classifier needs from a finished run.
struct RunView {
    CashFlowLedger ledger;
    DiscountCurve curve;
    struct CohortView {
        std::string id;
        std::size_t join_period = 1;
        UsdValue invested;
        std::optional<std::size_t> exit_period;
        std::optional<UsdValue> exit_proceeds;
        UsdValue final_utility; // mark-to-market value of the final holding
    };
    std::vector<CohortView> cohorts;
    std::size_t horizon = 0;
};

// Condition (i): Gamma(t) * D_t stays above epsilon on the trailing window.
// The window is anchored at the last period with activity (a nonzero inflow
// or rate); trailing quiet periods extend the series with a constant value
// and must not move the check.
// Condition (ii): weak Pareto over all cohort outcomes.
PonziVerdict classify_rational_ponzi(const RunView& run, const ClassifierConfig& config);

} // namespace pegsim
