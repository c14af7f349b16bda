#include "pegsim/timeseries.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pegsim {

std::int64_t days_from_civil(int y, unsigned m, unsigned d)
{
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, unsigned& month, unsigned& day)
{
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = doy - (153 * mp + 2) / 5 + 1;
    month = mp + (mp < 10 ? 3 : -9);
    year = static_cast<int>(y + (month <= 2));
}

std::int64_t parse_day(std::string_view text)
{
    int y = 0;
    unsigned m = 0, d = 0, hh = 0, mm = 0, ss = 0;
    std::string s(text);
    if (s.size() == 10) {
        if (std::sscanf(s.c_str(), "%d-%u-%u", &y, &m, &d) != 3)
            fail(errc::malformed_csv, "bad date: " + s);
    } else if (s.size() == 20 && s.back() == 'Z') {
        if (std::sscanf(s.c_str(), "%d-%u-%uT%u:%u:%uZ", &y, &m, &d, &hh, &mm, &ss) != 6)
            fail(errc::malformed_csv, "bad timestamp: " + s);
    } else {
        fail(errc::malformed_csv, "bad timestamp: " + s);
    }
    if (m < 1 || m > 12 || d < 1 || d > 31 || hh > 23 || mm > 59 || ss > 60)
        fail(errc::malformed_csv, "bad timestamp: " + s);
    return days_from_civil(y, m, d);
}

std::string format_timestamp(std::int64_t day)
{
    int y;
    unsigned m, d;
    civil_from_days(day, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT00:00:00Z", y, m, d);
    return buf;
}

namespace {

constexpr const char* kCsvHeader = "timestamp,price_usd,total_supply,market_cap";
constexpr std::int64_t kMaxGapDays = 3;

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

} // namespace

TimeSeries load_csv(const std::string& path, const std::string& token)
{
    std::ifstream in(path);
    if (!in)
        fail(errc::io_error, "cannot open " + path);

    TimeSeries series;
    series.token = token.empty() ? std::filesystem::path(path).stem().string() : token;

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        fail(errc::empty_series, path + " is empty");
    ++line_no;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kCsvHeader)
        fail(errc::malformed_csv, path + ":1 expected header '" + kCsvHeader + "'");

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto fields = split_fields(line);
        if (fields.size() != 4)
            fail(errc::malformed_csv,
                 path + ":" + std::to_string(line_no) + " expected 4 fields");
        PricePoint p;
        try {
            p.day = parse_day(fields[0]);
            p.price_usd = parse_price(fields[1]);
            if (!fields[2].empty())
                p.total_supply = parse_amount(fields[2]);
            if (!fields[3].empty())
                p.market_cap = parse_usd(fields[3]);
        } catch (const SimError& e) {
            if (e.code() == errc::malformed_csv)
                throw;
            fail(errc::malformed_csv, path + ":" + std::to_string(line_no) + " " + e.what());
        }
        if (p.price_usd.units == 0)
            ++series.zero_prices;

        if (!series.points.empty()) {
            std::int64_t prev = series.points.back().day;
            if (p.day <= prev)
                fail(errc::non_monotonic_timestamps,
                     path + ":" + std::to_string(line_no) + " timestamps must increase");
            std::int64_t missing = p.day - prev - 1;
            if (missing > kMaxGapDays)
                fail(errc::gap_too_large, path + ":" + std::to_string(line_no) + " gap of " +
                                              std::to_string(missing) + " missing days");
            for (std::int64_t i = 0; i < missing; ++i) {
                PricePoint fill = series.points.back();
                fill.day += 1;
                series.points.push_back(fill);
                ++series.forward_filled;
            }
        }
        series.points.push_back(p);
    }
    if (series.points.empty())
        fail(errc::empty_series, path + " has no data rows");
    return series;
}

void write_canonical_csv(const TimeSeries& series, const std::string& path)
{
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& p : series.points) {
        out << format_timestamp(p.day) << ',' << format_price(p.price_usd) << ',';
        if (p.total_supply)
            out << format_amount(*p.total_supply);
        out << ',';
        if (p.market_cap)
            out << format_usd(*p.market_cap);
        out << '\n';
    }
    atomic_write_file(path, out.str());
}

void atomic_write_file(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            fail(errc::io_error, "cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            fail(errc::io_error, "short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        fail(errc::io_error, "cannot rename " + tmp.string() + " to " + path);
    }
}

} // namespace pegsim
