#pragma once

#include <cstdint>
#include <string>

#include "pegsim/timeseries.hpp"

namespace pegsim {

// Remote source compatible with a "market chart range" endpoint:
//   GET {api_base}/coins/{id}/market_chart/range?vs_currency=usd&from=S&to=S
// answering {"prices": [[ms, value], ...], "market_caps": [[ms, value], ...]}.
struct FetchOptions {
    std::string api_base; // e.g. http://localhost:8080/api/v3
    std::string coin_id;
    std::int64_t from_day = 0; // days since epoch, inclusive
    std::int64_t to_day = 0;   // inclusive
    std::string cache_dir;     // empty: $PEGSIM_CACHE_DIR, else ./cache
    int max_attempts = 3;
};

// Resolved cache location for a request (canonical CSV).
std::string fetch_cache_path(const FetchOptions& opt);

// Returns the daily series, serving from the cache when the canonical CSV is
// already present (no network request) and writing it atomically otherwise.
TimeSeries fetch_series(const FetchOptions& opt);

} // namespace pegsim
