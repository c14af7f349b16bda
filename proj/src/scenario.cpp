#include "pegsim/scenario.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace pegsim {

const char* protocol_name(Protocol p)
{
    switch (p) {
    case Protocol::rebase: return "rebase";
    case Protocol::dual: return "dual";
    case Protocol::tritoken: return "tritoken";
    }
    return "?";
}

const char* mode_name(Mode m)
{
    switch (m) {
    case Mode::replay: return "replay";
    case Mode::endogenous: return "endogenous";
    case Mode::idealized: return "idealized";
    }
    return "?";
}

Protocol parse_protocol(std::string_view s)
{
    if (s == "rebase")
        return Protocol::rebase;
    if (s == "dual")
        return Protocol::dual;
    if (s == "tritoken")
        return Protocol::tritoken;
    fail(errc::config_invalid, "unknown protocol '" + std::string(s) + "'");
}

Mode parse_mode(std::string_view s)
{
    if (s == "replay")
        return Mode::replay;
    if (s == "endogenous")
        return Mode::endogenous;
    if (s == "idealized")
        return Mode::idealized;
    fail(errc::config_invalid, "unknown mode '" + std::string(s) + "'");
}

u128 parse_fraction_ppb(std::string_view text)
{
    u128 ppb;
    try {
        ppb = parse_amount(text).units;
    } catch (const SimError& e) {
        fail(errc::config_invalid, std::string("bad fraction: ") + e.what());
    }
    if (ppb > kScale)
        fail(errc::config_invalid, "fraction exceeds 1: " + std::string(text));
    return ppb;
}

namespace {

std::string trim(std::string s)
{
    auto issp = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && issp(s.front()))
        s.erase(s.begin());
    while (!s.empty() && issp(s.back()))
        s.pop_back();
    return s;
}

std::size_t parse_index(const std::string& key, const std::string& value)
{
    char* end = nullptr;
    unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        fail(errc::config_invalid, key + " must be a non-negative integer, got '" + value + "'");
    return std::size_t(v);
}

double parse_real(const std::string& key, const std::string& value)
{
    char* end = nullptr;
    double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        fail(errc::config_invalid, key + " must be a number, got '" + value + "'");
    return v;
}

Amount parse_amount_key(const std::string& key, const std::string& value)
{
    try {
        return parse_amount(value);
    } catch (const SimError& e) {
        fail(errc::config_invalid, key + ": " + e.what());
    }
}

Price parse_price_key(const std::string& key, const std::string& value)
{
    try {
        return parse_price(value);
    } catch (const SimError& e) {
        fail(errc::config_invalid, key + ": " + e.what());
    }
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

// cohort.<n>.<field> / shock.<n>.<field>
bool split_indexed(const std::string& key, const std::string& group, std::size_t& index,
                   std::string& field)
{
    if (key.rfind(group + ".", 0) != 0)
        return false;
    std::size_t start = group.size() + 1;
    std::size_t dot = key.find('.', start);
    if (dot == std::string::npos)
        fail(errc::config_invalid, "expected " + group + ".<n>.<field>, got '" + key + "'");
    index = parse_index(key, key.substr(start, dot - start));
    field = key.substr(dot + 1);
    return true;
}

} // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& base_dir)
{
    Scenario s;
    std::map<std::size_t, CohortSpec> cohorts;
    std::map<std::size_t, ShockSpec> shocks;

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#')
            continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            fail(errc::config_invalid,
                 "line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            fail(errc::config_invalid,
                 "line " + std::to_string(line_no) + ": empty key or value");
        s.echo.emplace_back(key, value);

        std::size_t idx = 0;
        std::string field;
        if (key == "protocol") {
            s.protocol = parse_protocol(value);
        } else if (key == "mode") {
            s.mode = parse_mode(value);
        } else if (key == "horizon") {
            s.horizon = parse_index(key, value);
        } else if (key == "peg") {
            s.peg = parse_price_key(key, value);
        } else if (key == "supply.initial") {
            s.initial_supply = parse_amount_key(key, value);
        } else if (key == "share.supply.initial") {
            s.initial_share_supply = parse_amount_key(key, value);
        } else if (key == "share.price.initial") {
            s.initial_share_price = parse_price_key(key, value);
        } else if (key == "pool.stable.base") {
            s.stable_pool_base = parse_amount_key(key, value);
        } else if (key == "pool.stable.quote") {
            s.stable_pool_quote = parse_amount_key(key, value);
        } else if (key == "pool.share.base") {
            s.share_pool_base = parse_amount_key(key, value);
        } else if (key == "pool.share.quote") {
            s.share_pool_quote = parse_amount_key(key, value);
        } else if (key == "arb.threshold") {
            s.arb_threshold_ppb = parse_fraction_ppb(value);
        } else if (key == "arb.capacity.fraction") {
            s.arb_capacity_ppb = parse_fraction_ppb(value);
        } else if (key == "bond.spend.fraction") {
            s.bond_spend_ppb = parse_fraction_ppb(value);
        } else if (key == "discount.rate") {
            s.discount_rate = parse_real(key, value);
        } else if (key == "discount.rates") {
            for (const auto& item : split_list(value))
                s.discount_rates.push_back(parse_real(key, item));
        } else if (key == "prices.cycle") {
            for (const auto& item : split_list(value))
                s.price_cycle.push_back(parse_price_key(key, item));
        } else if (key == "replay.stable_csv") {
            s.replay_stable_csv = (std::filesystem::path(base_dir) / value).string();
        } else if (key == "replay.share_csv") {
            s.replay_share_csv = (std::filesystem::path(base_dir) / value).string();
        } else if (key == "verdict.window") {
            s.verdict_window = parse_index(key, value);
        } else if (key == "verdict.epsilon") {
            s.verdict_epsilon = parse_real(key, value);
        } else if (split_indexed(key, "cohort", idx, field)) {
            CohortSpec& c = cohorts[idx];
            if (c.id.empty())
                c.id = "cohort-" + std::to_string(idx);
            if (field == "join")
                c.join_period = parse_index(key, value);
            else if (field == "exit")
                c.exit_period = parse_index(key, value);
            else if (field == "usd")
                c.usd = UsdValue{i128(parse_amount_key(key, value).units)};
            else if (field == "units")
                c.units = parse_amount_key(key, value);
            else if (field == "id")
                c.id = value;
            else
                fail(errc::config_invalid, "unknown cohort field '" + field + "'");
        } else if (split_indexed(key, "shock", idx, field)) {
            ShockSpec& sh = shocks[idx];
            if (field == "period")
                sh.period = parse_index(key, value);
            else if (field == "token")
                sh.token = value;
            else if (field == "fraction")
                sh.fraction_ppb = parse_fraction_ppb(value);
            else
                fail(errc::config_invalid, "unknown shock field '" + field + "'");
        } else {
            fail(errc::config_invalid, "unknown key '" + key + "'");
        }
    }

    for (auto& [idx, c] : cohorts)
        s.cohorts.push_back(std::move(c));
    for (auto& [idx, sh] : shocks)
        s.shocks.push_back(sh);
    return s;
}

Scenario parse_scenario_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(errc::io_error, "cannot open scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), std::filesystem::path(path).parent_path().string());
}

void validate_scenario(const Scenario& s)
{
    if (s.horizon < 1)
        fail(errc::config_invalid, "horizon must be at least 1");
    if (s.peg.units == 0)
        fail(errc::config_invalid, "peg must be positive");
    if (s.initial_supply.units == 0)
        fail(errc::config_invalid, "supply.initial must be positive");

    switch (s.protocol) {
    case Protocol::rebase:
        if (s.mode == Mode::endogenous)
            fail(errc::config_invalid, "rebase protocol supports replay and idealized modes");
        break;
    case Protocol::dual:
        if (s.mode == Mode::idealized)
            fail(errc::config_invalid, "dual protocol supports replay and endogenous modes");
        break;
    case Protocol::tritoken:
        if (s.mode != Mode::replay)
            fail(errc::config_invalid, "tritoken protocol supports replay mode only");
        break;
    }
    if (s.mode != Mode::replay && !s.price_cycle.empty()) {
        for (const Price& p : s.price_cycle)
            if (p.units == 0 && s.protocol == Protocol::rebase)
                fail(errc::config_invalid, "price cycle values must be positive");
    }
    if (!s.discount_rates.empty() && s.discount_rates.size() < s.horizon)
        fail(errc::config_invalid, "discount.rates shorter than the horizon");
    for (const auto& r : s.discount_rates.empty()
                             ? std::vector<double>{s.discount_rate}
                             : s.discount_rates)
        if (1.0 + r <= 0.0)
            fail(errc::config_invalid, "discount rate at or below -100%");

    for (const auto& c : s.cohorts) {
        if (c.join_period < 1 || c.join_period > s.horizon)
            fail(errc::config_invalid, "cohort '" + c.id + "' joins outside the horizon");
        if (c.exit_period) {
            if (*c.exit_period < c.join_period)
                fail(errc::config_invalid, "cohort '" + c.id + "' exits before joining");
            if (*c.exit_period > s.horizon)
                fail(errc::config_invalid, "cohort '" + c.id + "' exits after the horizon");
        }
        if (c.usd.has_value() == c.units.has_value())
            fail(errc::config_invalid,
                 "cohort '" + c.id + "' needs exactly one of usd or units");
        if (c.usd && c.usd->units <= 0)
            fail(errc::config_invalid, "cohort '" + c.id + "' investment must be positive");
        if (c.units && c.units->units == 0)
            fail(errc::config_invalid, "cohort '" + c.id + "' units must be positive");
    }
    for (const auto& sh : s.shocks) {
        if (sh.period < 1 || sh.period > s.horizon)
            fail(errc::config_invalid, "shock outside the horizon");
        if (sh.fraction_ppb == 0 || sh.fraction_ppb > kScale)
            fail(errc::config_invalid, "shock fraction must be in (0, 1]");
        if (sh.token != "stable" && sh.token != "share")
            fail(errc::config_invalid, "shock token must be 'stable' or 'share'");
        if (s.mode != Mode::endogenous)
            fail(errc::config_invalid, "shocks require endogenous mode");
    }
}

std::vector<double> scenario_rates(const Scenario& s)
{
    if (!s.discount_rates.empty()) {
        std::vector<double> rates = s.discount_rates;
        rates.resize(s.horizon, rates.empty() ? 0.0 : rates.back());
        return rates;
    }
    return std::vector<double>(s.horizon, s.discount_rate);
}

std::vector<Price> scenario_cycle_prices(const Scenario& s)
{
    std::vector<Price> prices;
    if (s.price_cycle.empty())
        return prices;
    prices.reserve(s.horizon);
    for (std::size_t k = 0; k < s.horizon; ++k)
        prices.push_back(s.price_cycle[k % s.price_cycle.size()]);
    return prices;
}

} // namespace pegsim
