#pragma once

#include <map>
#include <string>

#include "pegsim/fixed.hpp"

namespace pegsim {

// Pro-rata balance scalar. A wallet's external balance is
// floor(shares * num / den); rebasing a token touches only the scalar, never
// the per-wallet share counts, so every balance scales by exactly the same
// ratio and ownership fractions are preserved bit-for-bit.
struct Scalar {
    u128 num = 1;
    u128 den = 1;

    friend bool operator==(const Scalar&, const Scalar&) = default;
};

struct Wallet {
    std::string id;
    std::map<std::string, u128> shares; // token-id -> internal shares

    u128 shares_of(const std::string& token) const
    {
        auto it = shares.find(token);
        return it == shares.end() ? u128(0) : it->second;
    }
};

// External (user-visible) balance of `token` in `w` under scalar `s`.
// A token absent from the wallet reads as zero.
Amount external_balance(const Wallet& w, const std::string& token, Scalar s);

// Shares that represent `external` units under scalar `s`: floor of the
// inverse mapping, so the resulting balance never exceeds `external`.
u128 shares_for_amount(Amount external, Scalar s);

} // namespace pegsim
