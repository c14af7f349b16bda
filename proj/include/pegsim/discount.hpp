#pragma once

#include <cstddef>
#include <vector>

#include "pegsim/fixed.hpp"

namespace pegsim {

// Per-period rates r_j, indexed 1..T (rates[0] is r_1). The discount factor
// applied to a period-s cash flow is the product over j=1..s of 1/(1+r_j).
// Rates are analytical inputs and live in double precision; all money stays
// fixed-point.
struct DiscountCurve {
    std::vector<double> rates;

    static DiscountCurve constant(double r, std::size_t periods)
    {
        return DiscountCurve{std::vector<double>(periods, r)};
    }

    std::size_t periods() const { return rates.size(); }
};

// Net cash inflows I_s from lenders to the borrower, indexed 1..T.
// Positive = money entering the game, negative = redemptions.
struct CashFlowLedger {
    std::vector<UsdValue> inflows;

    std::size_t periods() const { return inflows.size(); }
};

// Gamma(s) = prod_{j=1..s} 1/(1+r_j); Gamma(0) is the empty product 1.
double discount_factor(const DiscountCurve& curve, std::size_t s);

struct IndebtednessResult {
    double gamma_d = 0.0; // Gamma(T) * D_T  =  sum_{s=1..T} Gamma(s) * I_s
    double d = 0.0;       // D_T itself
};

// Present value of the borrower's net indebtedness through period T,
// accumulated incrementally with a running discount factor.
IndebtednessResult present_indebtedness(const CashFlowLedger& ledger,
                                        const DiscountCurve& curve, std::size_t t_max);

// Gamma(t) * D_t for every t in 1..T (one incremental pass).
std::vector<double> gamma_d_series(const CashFlowLedger& ledger, const DiscountCurve& curve);

inline double usd_to_double(UsdValue v)
{
    return double(v.units) / double(kScale);
}

} // namespace pegsim
