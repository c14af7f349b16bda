#include "pegsim/wallet.hpp"

namespace pegsim {

Amount external_balance(const Wallet& w, const std::string& token, Scalar s)
{
    if (s.den == 0)
        fail(errc::division_by_zero, "scalar denominator is zero");
    return Amount{mul_div_trunc(w.shares_of(token), s.num, s.den)};
}

u128 shares_for_amount(Amount external, Scalar s)
{
    if (s.num == 0)
        fail(errc::division_by_zero, "scalar numerator is zero");
    return mul_div_trunc(external.units, s.den, s.num);
}

} // namespace pegsim
