#include "pegsim/fetch.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace pegsim {

namespace {

std::string resolve_cache_dir(const FetchOptions& opt)
{
    if (!opt.cache_dir.empty())
        return opt.cache_dir;
    if (const char* env = std::getenv("PEGSIM_CACHE_DIR"); env && *env)
        return env;
    return "cache";
}

std::string day_stamp(std::int64_t day)
{
    return format_timestamp(day).substr(0, 10);
}

// Price doubles from the wire become ledger decimals with full 9-digit scale.
std::string decimal_from_double(double v)
{
    if (v < 0)
        v = 0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

struct HostSplit {
    std::string host_port; // scheme://host:port
    std::string prefix;    // leading path, possibly empty
};

HostSplit split_base(const std::string& api_base)
{
    auto scheme_end = api_base.find("://");
    if (scheme_end == std::string::npos)
        fail(errc::config_invalid, "api base must include a scheme: " + api_base);
    auto path_start = api_base.find('/', scheme_end + 3);
    if (path_start == std::string::npos)
        return HostSplit{api_base, ""};
    return HostSplit{api_base.substr(0, path_start), api_base.substr(path_start)};
}

} // namespace

std::string fetch_cache_path(const FetchOptions& opt)
{
    namespace fs = std::filesystem;
    std::string name =
        opt.coin_id + "_" + day_stamp(opt.from_day) + "_" + day_stamp(opt.to_day) + ".csv";
    return (fs::path(resolve_cache_dir(opt)) / name).string();
}

TimeSeries fetch_series(const FetchOptions& opt)
{
    namespace fs = std::filesystem;
    if (opt.coin_id.empty())
        fail(errc::config_invalid, "coin id must not be empty");
    if (opt.to_day < opt.from_day)
        fail(errc::config_invalid, "fetch range is inverted");

    std::string cache_path = fetch_cache_path(opt);
    if (fs::exists(cache_path))
        return load_csv(cache_path, opt.coin_id);

    HostSplit base = split_base(opt.api_base);
    httplib::Client client(base.host_port);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);

    // Inclusive day range in epoch seconds; the extra day covers providers
    // that stamp the daily close at the following midnight.
    std::int64_t from_s = opt.from_day * 86400;
    std::int64_t to_s = (opt.to_day + 1) * 86400;
    std::string path = base.prefix + "/coins/" + opt.coin_id +
                       "/market_chart/range?vs_currency=usd&from=" +
                       std::to_string(from_s) + "&to=" + std::to_string(to_s);

    httplib::Result res;
    std::string last_error = "no response";
    for (int attempt = 1; attempt <= opt.max_attempts; ++attempt) {
        res = client.Get(path);
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 404)
            fail(errc::coin_not_found, "remote has no coin '" + opt.coin_id + "'");
        if (res->status == 429) {
            last_error = "rate limited";
            if (attempt == opt.max_attempts)
                fail(errc::rate_limited, "still rate limited after " +
                                             std::to_string(opt.max_attempts) + " attempts");
            int wait_s = 1;
            if (res->has_header("Retry-After"))
                wait_s = std::max(0, std::atoi(res->get_header_value("Retry-After").c_str()));
            std::this_thread::sleep_for(std::chrono::seconds(std::min(wait_s, 10)));
            continue;
        }
        if (res->status >= 200 && res->status < 300)
            break;
        last_error = "status " + std::to_string(res->status);
    }
    if (!res || res->status < 200 || res->status >= 300) {
        if (last_error == "rate limited")
            fail(errc::rate_limited, "still rate limited after retries");
        fail(errc::remote_error, "fetch failed after " + std::to_string(opt.max_attempts) +
                                     " attempts (" + last_error + ")");
    }

    nlohmann::json body;
    try {
        body = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        fail(errc::remote_error, std::string("unparseable response: ") + e.what());
    }

    // Last sample per UTC day wins; that matches daily-granularity sources.
    std::map<std::int64_t, PricePoint> by_day;
    auto take = [&](const char* key, auto&& assign) {
        if (!body.contains(key) || !body[key].is_array())
            return;
        for (const auto& pair : body[key]) {
            if (!pair.is_array() || pair.size() < 2)
                continue;
            std::int64_t day = pair[0].get<std::int64_t>() / 86400000;
            if (day < opt.from_day || day > opt.to_day)
                continue;
            PricePoint& p = by_day[day];
            p.day = day;
            assign(p, pair[1].get<double>());
        }
    };
    take("prices", [](PricePoint& p, double v) {
        p.price_usd = parse_price(decimal_from_double(v));
    });
    take("market_caps", [](PricePoint& p, double v) {
        p.market_cap = parse_usd(decimal_from_double(v));
    });
    take("total_supplies", [](PricePoint& p, double v) {
        p.total_supply = parse_amount(decimal_from_double(v));
    });

    TimeSeries series;
    series.token = opt.coin_id;
    for (auto& [day, point] : by_day)
        series.points.push_back(point);
    if (series.points.empty())
        fail(errc::empty_series, "remote returned no samples in range");

    fs::create_directories(resolve_cache_dir(opt));
    write_canonical_csv(series, cache_path);
    return load_csv(cache_path, opt.coin_id);
}

} // namespace pegsim
