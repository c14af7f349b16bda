#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "pegsim/errors.hpp"

namespace pegsim {

using u128 = unsigned __int128;
using i128 = __int128;

// All token quantities and USD values use a single 1e-9 fixed-point scale.
// One token (or one USD) equals kScale base units. 128-bit storage keeps
// supplies up to 1e15 tokens (1e24 base units) exactly representable.
inline constexpr u128 kScale = 1'000'000'000u;
inline constexpr int kFractionDigits = 9;

// Non-negative token quantity, 1e-9 token per unit.
struct Amount {
    u128 units = 0;

    friend constexpr bool operator==(const Amount&, const Amount&) = default;
    friend constexpr auto operator<=>(const Amount& a, const Amount& b)
    {
        return a.units <=> b.units;
    }
};

// Non-negative USD-per-token quote, 1e-9 USD per unit. Zero is only legal in
// raw replay data; every protocol operation requires a strictly positive price.
struct Price {
    u128 units = 0;

    friend constexpr bool operator==(const Price&, const Price&) = default;
    friend constexpr auto operator<=>(const Price& a, const Price& b)
    {
        return a.units <=> b.units;
    }
};

// Signed USD value, 1e-9 USD per unit. Used for cash flows and utilities.
struct UsdValue {
    i128 units = 0;

    friend constexpr bool operator==(const UsdValue&, const UsdValue&) = default;
    friend constexpr auto operator<=>(const UsdValue& a, const UsdValue& b)
    {
        return a.units <=> b.units;
    }
};

constexpr Amount tokens(std::uint64_t whole) { return Amount{u128(whole) * kScale}; }
constexpr Price usd_price(std::uint64_t whole) { return Price{u128(whole) * kScale}; }
constexpr UsdValue usd(std::int64_t whole) { return UsdValue{i128(whole) * i128(kScale)}; }

// floor(a * num / den), with the product computed in 256-bit arithmetic so it
// is exact before the division. Throws division_by_zero, or overflow when the
// quotient does not fit back into 128 bits.
u128 mul_div_trunc(u128 a, u128 num, u128 den);

// ceil(a * num / den) under the same wide-arithmetic contract.
u128 mul_div_ceil(u128 a, u128 num, u128 den);

// Checked addition/subtraction on raw 128-bit units.
u128 checked_add(u128 a, u128 b);
u128 checked_sub(u128 a, u128 b); // throws overflow on underflow

// Decimal-string conversions. parse_amount accepts a non-negative decimal
// with at most 9 fractional digits; format_amount emits the minimal form
// (no trailing fractional zeros, no decimal point for whole values) and
// round-trips exactly through parse_amount.
Amount parse_amount(std::string_view text);
std::string format_amount(Amount a);

Price parse_price(std::string_view text);
std::string format_price(Price p);

// Signed variant used for cash flows in reports; accepts a leading '-'.
UsdValue parse_usd(std::string_view text);
std::string format_usd(UsdValue v);

std::string format_units(u128 units);

// Q x P: USD market value of `units` tokens at price `p`, truncated to 1e-9.
UsdValue token_value(Amount units, Price p);

} // namespace pegsim
