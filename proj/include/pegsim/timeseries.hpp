#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pegsim/fixed.hpp"

namespace pegsim {

// Proleptic-Gregorian day arithmetic (days since 1970-01-01).
std::int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(std::int64_t days, int& year, unsigned& month, unsigned& day);

// Accepts "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM:SSZ"; sub-day time is truncated.
std::int64_t parse_day(std::string_view text);
// Canonical timestamp form used in CSV files.
std::string format_timestamp(std::int64_t day);

struct PricePoint {
    std::int64_t day = 0; // days since epoch, UTC
    Price price_usd;
    std::optional<Amount> total_supply;
    std::optional<UsdValue> market_cap;
};

struct TimeSeries {
    std::string token;
    std::vector<PricePoint> points;
    std::size_t forward_filled = 0; // points synthesized by gap filling
    std::size_t zero_prices = 0;    // raw zero quotes, legal but flagged

    std::size_t size() const { return points.size(); }
};

// CSV schema (exact): header `timestamp,price_usd,total_supply,market_cap`,
// timestamps strictly increasing at day resolution, numeric fields in the
// ledger decimal-string format, empty field = missing. Gaps of at most three
// missing days are forward-filled and counted; larger gaps are an error.
TimeSeries load_csv(const std::string& path, const std::string& token = "");

// Writes the canonical form of `series` (atomic: temp file then rename).
void write_canonical_csv(const TimeSeries& series, const std::string& path);

// Shared atomic file writer (temp + rename in the destination directory).
void atomic_write_file(const std::string& path, const std::string& content);

} // namespace pegsim
