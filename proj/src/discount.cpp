#include "pegsim/discount.hpp"

namespace pegsim {

double discount_factor(const DiscountCurve& curve, std::size_t s)
{
    if (s > curve.periods())
        fail(errc::index_out_of_range, "discount_factor index past end of curve");
    double gamma = 1.0;
    for (std::size_t j = 0; j < s; ++j) {
        double growth = 1.0 + curve.rates[j];
        if (growth <= 0.0)
            fail(errc::config_invalid, "discount rate at or below -100%");
        gamma /= growth;
    }
    return gamma;
}

IndebtednessResult present_indebtedness(const CashFlowLedger& ledger,
                                        const DiscountCurve& curve, std::size_t t_max)
{
    if (t_max > ledger.periods() || t_max > curve.periods())
        fail(errc::index_out_of_range, "horizon past end of ledger or curve");
    double gamma = 1.0;
    double sum = 0.0;
    for (std::size_t s = 0; s < t_max; ++s) {
        double growth = 1.0 + curve.rates[s];
        if (growth <= 0.0)
            fail(errc::config_invalid, "discount rate at or below -100%");
        gamma /= growth;
        sum += gamma * usd_to_double(ledger.inflows[s]);
    }
    return IndebtednessResult{sum, gamma == 0.0 ? 0.0 : sum / gamma};
}

std::vector<double> gamma_d_series(const CashFlowLedger& ledger, const DiscountCurve& curve)
{
    std::size_t t_max = ledger.periods();
    if (t_max > curve.periods())
        fail(errc::index_out_of_range, "ledger longer than curve");
    std::vector<double> series(t_max);
    double gamma = 1.0;
    double sum = 0.0;
    for (std::size_t s = 0; s < t_max; ++s) {
        double growth = 1.0 + curve.rates[s];
        if (growth <= 0.0)
            fail(errc::config_invalid, "discount rate at or below -100%");
        gamma /= growth;
        sum += gamma * usd_to_double(ledger.inflows[s]);
        series[s] = sum;
    }
    return series;
}

} // namespace pegsim
