#include "pegsim/fixed.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace pegsim {

namespace {

using u256 = boost::multiprecision::uint256_t;

constexpr u128 kMaxU128 = ~u128(0);

u128 narrow_u256(const u256& v, const char* what)
{
    if (v > u256(kMaxU128))
        fail(errc::overflow, what);
    return static_cast<u128>(v);
}

} // namespace

const char* errc_name(errc c)
{
    switch (c) {
    case errc::malformed: return "Malformed";
    case errc::negative_amount: return "NegativeAmount";
    case errc::too_many_decimals: return "TooManyDecimals";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::overflow: return "Overflow";
    case errc::zero_amount: return "ZeroAmount";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::empty_run: return "EmptyRun";
    case errc::zero_target: return "ZeroTarget";
    case errc::supply_underflow: return "SupplyUnderflow";
    case errc::insufficient_stable: return "InsufficientStable";
    case errc::zero_share_price: return "ZeroSharePrice";
    case errc::insufficient_shares: return "InsufficientShares";
    case errc::not_below_peg: return "NotBelowPeg";
    case errc::insufficient_cash: return "InsufficientCash";
    case errc::not_above_peg: return "NotAbovePeg";
    case errc::empty_pool: return "EmptyPool";
    case errc::excessive_output: return "ExcessiveOutput";
    case errc::replay_exhausted: return "ReplayExhausted";
    case errc::config_invalid: return "ConfigInvalid";
    case errc::malformed_csv: return "MalformedCsv";
    case errc::non_monotonic_timestamps: return "NonMonotonicTimestamps";
    case errc::gap_too_large: return "GapTooLarge";
    case errc::empty_series: return "EmptySeries";
    case errc::coin_not_found: return "CoinNotFound";
    case errc::remote_error: return "RemoteError";
    case errc::rate_limited: return "RateLimited";
    case errc::io_error: return "IoError";
    case errc::schema_mismatch: return "SchemaMismatch";
    }
    return "Unknown";
}

bool SimError::is_data_error() const noexcept
{
    switch (code_) {
    case errc::malformed:
    case errc::negative_amount:
    case errc::too_many_decimals:
    case errc::config_invalid:
    case errc::malformed_csv:
    case errc::non_monotonic_timestamps:
    case errc::gap_too_large:
    case errc::empty_series:
    case errc::coin_not_found:
    case errc::io_error:
    case errc::schema_mismatch:
    case errc::replay_exhausted:
    case errc::empty_run:
        return true;
    default:
        return false;
    }
}

u128 mul_div_trunc(u128 a, u128 num, u128 den)
{
    if (den == 0)
        fail(errc::division_by_zero, "mul_div_trunc denominator is zero");
    u256 product = u256(a) * u256(num);
    return narrow_u256(product / u256(den), "mul_div_trunc quotient exceeds 128 bits");
}

u128 mul_div_ceil(u128 a, u128 num, u128 den)
{
    if (den == 0)
        fail(errc::division_by_zero, "mul_div_ceil denominator is zero");
    u256 product = u256(a) * u256(num);
    u256 q = product / u256(den);
    if (product % u256(den) != 0)
        q += 1;
    return narrow_u256(q, "mul_div_ceil quotient exceeds 128 bits");
}

u128 checked_add(u128 a, u128 b)
{
    u128 s = a + b;
    if (s < a)
        fail(errc::overflow, "128-bit addition overflow");
    return s;
}

u128 checked_sub(u128 a, u128 b)
{
    if (b > a)
        fail(errc::overflow, "128-bit subtraction underflow");
    return a - b;
}

namespace {

// Shared digits parser for the 1e-9 decimal format. Returns scaled units.
u128 parse_units(std::string_view text)
{
    if (text.empty())
        fail(errc::malformed, "empty amount");
    if (text.front() == '-')
        fail(errc::negative_amount, "amount must be non-negative: " + std::string(text));
    size_t dot = text.find('.');
    std::string_view whole = (dot == std::string_view::npos) ? text : text.substr(0, dot);
    std::string_view frac = (dot == std::string_view::npos) ? std::string_view{} : text.substr(dot + 1);
    if (dot != std::string_view::npos && text.find('.', dot + 1) != std::string_view::npos)
        fail(errc::malformed, "multiple decimal points: " + std::string(text));
    if (whole.empty() && frac.empty())
        fail(errc::malformed, "no digits: " + std::string(text));
    if (frac.size() > size_t(kFractionDigits))
        fail(errc::too_many_decimals,
             "more than 9 fractional digits: " + std::string(text));

    constexpr u128 kMax = ~u128(0);
    u128 value = 0;
    auto push_digit = [&](char c) {
        if (c < '0' || c > '9')
            fail(errc::malformed, "invalid character in amount: " + std::string(text));
        u128 d = u128(c - '0');
        if (value > (kMax - d) / 10)
            fail(errc::malformed, "amount out of range: " + std::string(text));
        value = value * 10 + d;
    };
    for (char c : whole)
        push_digit(c);
    for (char c : frac)
        push_digit(c);
    for (size_t i = frac.size(); i < size_t(kFractionDigits); ++i) {
        if (value > kMax / 10)
            fail(errc::malformed, "amount out of range: " + std::string(text));
        value *= 10;
    }
    return value;
}

} // namespace

std::string format_units(u128 units)
{
    // Render the integer, then split off the 9 fractional digits and strip
    // trailing zeros so the output is the minimal exact form.
    char digits[48];
    int n = 0;
    if (units == 0)
        digits[n++] = '0';
    while (units > 0) {
        digits[n++] = char('0' + int(units % 10));
        units /= 10;
    }
    while (n <= kFractionDigits)
        digits[n++] = '0'; // guarantee at least one whole digit
    std::string out;
    out.reserve(size_t(n) + 1);
    for (int i = n - 1; i >= kFractionDigits; --i)
        out.push_back(digits[i]);
    int last = 0;
    while (last < kFractionDigits && digits[last] == '0')
        ++last;
    if (last < kFractionDigits) {
        out.push_back('.');
        for (int i = kFractionDigits - 1; i >= last; --i)
            out.push_back(digits[i]);
    }
    return out;
}

Amount parse_amount(std::string_view text) { return Amount{parse_units(text)}; }
std::string format_amount(Amount a) { return format_units(a.units); }

Price parse_price(std::string_view text) { return Price{parse_units(text)}; }
std::string format_price(Price p) { return format_units(p.units); }

UsdValue parse_usd(std::string_view text)
{
    if (!text.empty() && text.front() == '-') {
        u128 mag = parse_units(text.substr(1));
        if (mag > u128(1) << 126)
            fail(errc::malformed, "value out of range: " + std::string(text));
        return UsdValue{-i128(mag)};
    }
    u128 mag = parse_units(text);
    if (mag > u128(1) << 126)
        fail(errc::malformed, "value out of range: " + std::string(text));
    return UsdValue{i128(mag)};
}

std::string format_usd(UsdValue v)
{
    if (v.units < 0)
        return "-" + format_units(u128(-v.units));
    return format_units(u128(v.units));
}

UsdValue token_value(Amount units, Price p)
{
    u128 v = mul_div_trunc(units.units, p.units, kScale);
    if (v > u128(1) << 126)
        fail(errc::overflow, "token value exceeds signed range");
    return UsdValue{i128(v)};
}

} // namespace pegsim
