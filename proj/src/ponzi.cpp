#include "pegsim/ponzi.hpp"

#include <algorithm>
#include <cmath>

namespace pegsim {

UsdValue utility(Amount units, Price price)
{
    return token_value(units, price);
}

CohortOutcome cohort_outcome(const Cohort& c, const DiscountCurve& curve, Price final_price,
                             std::size_t t_max)
{
    if (c.join_period > t_max)
        fail(errc::index_out_of_range, "cohort joined after the horizon");
    CohortOutcome out;
    out.id = c.id;
    out.entry_pv = discount_factor(curve, c.join_period) * usd_to_double(c.invested);
    if (c.exit_period && c.exit_proceeds) {
        out.exit_pv = discount_factor(curve, *c.exit_period) * usd_to_double(*c.exit_proceeds);
    } else {
        out.exit_pv =
            discount_factor(curve, t_max) * usd_to_double(utility(c.units, final_price));
    }
    out.worse_off = out.exit_pv < out.entry_pv - kParetoToleranceUsd;
    out.strictly_better = out.exit_pv > out.entry_pv + kParetoToleranceUsd;
    return out;
}

ParetoResult pareto_check(const std::vector<CohortOutcome>& outcomes)
{
    ParetoResult r;
    r.vacuous = outcomes.empty();
    r.weak = std::none_of(outcomes.begin(), outcomes.end(),
                          [](const CohortOutcome& o) { return o.worse_off; });
    bool any_better = std::any_of(outcomes.begin(), outcomes.end(),
                                  [](const CohortOutcome& o) { return o.strictly_better; });
    r.strict = r.weak && any_better;
    return r;
}

PonziVerdict classify_rational_ponzi(const RunView& run, const ClassifierConfig& config)
{
    std::size_t t_max = run.horizon;
    if (t_max == 0 || run.ledger.periods() < t_max || run.curve.periods() < t_max)
        fail(errc::empty_run, "run must cover at least one period with ledger and curve");

    PonziVerdict v;
    v.window = config.window;
    v.epsilon = config.epsilon;
    v.gamma_d = gamma_d_series(run.ledger, run.curve);
    v.gamma_d.resize(t_max);

    // Last period that carries information: a nonzero flow or a nonzero rate.
    // Gamma(t)*D_t is constant past it, so anchoring the window there makes
    // the verdict invariant under appended quiet periods.
    std::size_t last_active = 0;
    for (std::size_t t = t_max; t >= 1; --t) {
        if (run.ledger.inflows[t - 1].units != 0 || run.curve.rates[t - 1] != 0.0) {
            last_active = t;
            break;
        }
    }
    if (last_active == 0) {
        v.condition_i = false; // no flows at all: Gamma(t)*D_t == 0 everywhere
    } else {
        std::size_t w = std::max<std::size_t>(config.window, 1);
        std::size_t first = last_active > w ? last_active - w + 1 : 1;
        bool positive = true;
        for (std::size_t t = first; t <= t_max; ++t)
            positive = positive && (v.gamma_d[t - 1] > config.epsilon);
        v.condition_i = positive;
    }

    std::vector<CohortOutcome> outcomes;
    outcomes.reserve(run.cohorts.size());
    for (const auto& c : run.cohorts) {
        CohortOutcome o;
        o.id = c.id;
        o.entry_pv = discount_factor(run.curve, c.join_period) * usd_to_double(c.invested);
        if (c.exit_period && c.exit_proceeds)
            o.exit_pv =
                discount_factor(run.curve, *c.exit_period) * usd_to_double(*c.exit_proceeds);
        else
            o.exit_pv = discount_factor(run.curve, t_max) * usd_to_double(c.final_utility);
        o.worse_off = o.exit_pv < o.entry_pv - kParetoToleranceUsd;
        o.strictly_better = o.exit_pv > o.entry_pv + kParetoToleranceUsd;
        outcomes.push_back(o);
    }
    ParetoResult pareto = pareto_check(outcomes);
    v.weak_pareto = pareto.weak;
    v.strict_pareto = pareto.strict;
    v.pareto_vacuous = pareto.vacuous;
    v.condition_ii = pareto.weak;
    v.rational = v.condition_i && v.condition_ii;

    const CohortOutcome* worst = nullptr;
    for (const auto& o : outcomes) {
        if (!o.worse_off)
            continue;
        if (!worst || (o.entry_pv - o.exit_pv) > (worst->entry_pv - worst->exit_pv))
            worst = &o;
    }
    if (worst)
        v.worst_cohort = WorstCohort{worst->id, worst->entry_pv - worst->exit_pv};
    return v;
}

} // namespace pegsim
