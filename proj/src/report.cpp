#include "pegsim/report.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pegsim/timeseries.hpp"

namespace pegsim {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double_str(const std::string& s)
{
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        fail(errc::io_error, "malformed number in report: '" + s + "'");
    return v;
}

namespace {

ordered_json verdict_to_json(const PonziVerdict& v)
{
    ordered_json j;
    j["condition_i"] = v.condition_i;
    j["condition_ii"] = v.condition_ii;
    j["rational"] = v.rational;
    j["weak_pareto"] = v.weak_pareto;
    j["strict_pareto"] = v.strict_pareto;
    j["pareto_vacuous"] = v.pareto_vacuous;
    j["window"] = v.window;
    j["epsilon"] = format_double(v.epsilon);
    ordered_json series = ordered_json::array();
    for (double g : v.gamma_d)
        series.push_back(format_double(g));
    j["gamma_d"] = std::move(series);
    if (v.worst_cohort) {
        j["worst_cohort"] = {{"id", v.worst_cohort->id},
                             {"shortfall", format_double(v.worst_cohort->shortfall)}};
    } else {
        j["worst_cohort"] = nullptr;
    }
    return j;
}

PonziVerdict verdict_from_json(const ordered_json& j)
{
    PonziVerdict v;
    v.condition_i = j.at("condition_i").get<bool>();
    v.condition_ii = j.at("condition_ii").get<bool>();
    v.rational = j.at("rational").get<bool>();
    v.weak_pareto = j.at("weak_pareto").get<bool>();
    v.strict_pareto = j.at("strict_pareto").get<bool>();
    v.pareto_vacuous = j.at("pareto_vacuous").get<bool>();
    v.window = j.at("window").get<std::size_t>();
    v.epsilon = parse_double_str(j.at("epsilon").get<std::string>());
    for (const auto& g : j.at("gamma_d"))
        v.gamma_d.push_back(parse_double_str(g.get<std::string>()));
    if (!j.at("worst_cohort").is_null()) {
        WorstCohort w;
        w.id = j.at("worst_cohort").at("id").get<std::string>();
        w.shortfall = parse_double_str(j.at("worst_cohort").at("shortfall").get<std::string>());
        v.worst_cohort = w;
    }
    return v;
}

ordered_json record_to_json(const RunRecord& run)
{
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["engine_version"] = run.engine_version;
    j["protocol"] = run.protocol;
    j["mode"] = run.mode;
    j["horizon"] = run.horizon;
    ordered_json echo = ordered_json::array();
    for (const auto& [k, v] : run.scenario_echo)
        echo.push_back(ordered_json::array({k, v}));
    j["scenario"] = std::move(echo);
    ordered_json rates = ordered_json::array();
    for (double r : run.rates)
        rates.push_back(format_double(r));
    j["rates"] = std::move(rates);
    j["verdict_window"] = run.verdict_window;
    j["verdict_epsilon"] = format_double(run.verdict_epsilon);

    ordered_json cohorts = ordered_json::array();
    for (const auto& c : run.cohorts) {
        ordered_json cj;
        cj["id"] = c.id;
        cj["join_period"] = c.join_period;
        cj["invested"] = format_usd(c.invested);
        cj["units_at_join"] = format_amount(c.units_at_join);
        if (c.exit_period)
            cj["exit_period"] = *c.exit_period;
        if (c.exit_proceeds)
            cj["exit_proceeds"] = format_usd(*c.exit_proceeds);
        cohorts.push_back(std::move(cj));
    }
    j["cohorts"] = std::move(cohorts);

    ordered_json periods = ordered_json::array();
    for (const auto& p : run.periods) {
        ordered_json pj;
        pj["period"] = p.period;
        ordered_json prices;
        for (const auto& [token, price] : p.prices)
            prices[token] = format_price(price);
        pj["prices"] = std::move(prices);
        ordered_json supplies;
        for (const auto& [token, amount] : p.supplies)
            supplies[token] = format_amount(amount);
        pj["supplies"] = std::move(supplies);
        pj["inflow"] = format_usd(p.inflow);
        pj["arb_usd_spent"] = format_usd(p.arb_usd_spent);
        pj["arb_usd_received"] = format_usd(p.arb_usd_received);
        ordered_json units = ordered_json::array();
        for (const auto& u : p.cohort_units)
            units.push_back(format_amount(u));
        pj["cohort_units"] = std::move(units);
        ordered_json utils = ordered_json::array();
        for (const auto& u : p.cohort_utilities)
            utils.push_back(format_usd(u));
        pj["cohort_utilities"] = std::move(utils);
        periods.push_back(std::move(pj));
    }
    j["series"] = std::move(periods);

    j["verdict"] = run.verdict ? verdict_to_json(*run.verdict) : ordered_json(nullptr);
    return j;
}

RunRecord record_from_json(const ordered_json& j)
{
    if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer())
        fail(errc::schema_mismatch, "report lacks a schema_version");
    int version = j.at("schema_version").get<int>();
    if (version != kReportSchemaVersion)
        fail(errc::schema_mismatch,
             "report schema_version " + std::to_string(version) + ", expected " +
                 std::to_string(kReportSchemaVersion));

    RunRecord run;
    run.engine_version = j.at("engine_version").get<std::string>();
    run.protocol = j.at("protocol").get<std::string>();
    run.mode = j.at("mode").get<std::string>();
    run.horizon = j.at("horizon").get<std::size_t>();
    for (const auto& kv : j.at("scenario"))
        run.scenario_echo.emplace_back(kv.at(0).get<std::string>(),
                                       kv.at(1).get<std::string>());
    for (const auto& r : j.at("rates"))
        run.rates.push_back(parse_double_str(r.get<std::string>()));
    run.verdict_window = j.at("verdict_window").get<std::size_t>();
    run.verdict_epsilon = parse_double_str(j.at("verdict_epsilon").get<std::string>());

    for (const auto& cj : j.at("cohorts")) {
        CohortRecord c;
        c.id = cj.at("id").get<std::string>();
        c.join_period = cj.at("join_period").get<std::size_t>();
        c.invested = parse_usd(cj.at("invested").get<std::string>());
        c.units_at_join = parse_amount(cj.at("units_at_join").get<std::string>());
        if (cj.contains("exit_period"))
            c.exit_period = cj.at("exit_period").get<std::size_t>();
        if (cj.contains("exit_proceeds"))
            c.exit_proceeds = parse_usd(cj.at("exit_proceeds").get<std::string>());
        run.cohorts.push_back(std::move(c));
    }

    for (const auto& pj : j.at("series")) {
        PeriodRecord p;
        p.period = pj.at("period").get<std::size_t>();
        for (const auto& [token, price] : pj.at("prices").items())
            p.prices[token] = parse_price(price.get<std::string>());
        for (const auto& [token, amount] : pj.at("supplies").items())
            p.supplies[token] = parse_amount(amount.get<std::string>());
        p.inflow = parse_usd(pj.at("inflow").get<std::string>());
        p.arb_usd_spent = parse_usd(pj.at("arb_usd_spent").get<std::string>());
        p.arb_usd_received = parse_usd(pj.at("arb_usd_received").get<std::string>());
        for (const auto& u : pj.at("cohort_units"))
            p.cohort_units.push_back(parse_amount(u.get<std::string>()));
        for (const auto& u : pj.at("cohort_utilities"))
            p.cohort_utilities.push_back(parse_usd(u.get<std::string>()));
        run.periods.push_back(std::move(p));
    }

    if (!j.at("verdict").is_null())
        run.verdict = verdict_from_json(j.at("verdict"));
    return run;
}

} // namespace

std::string report_to_string(const RunRecord& run)
{
    return record_to_json(run).dump(2) + "\n";
}

void write_report(const RunRecord& run, const std::string& path)
{
    atomic_write_file(path, report_to_string(run));
}

RunRecord report_from_string(const std::string& text)
{
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(errc::io_error, std::string("cannot parse report: ") + e.what());
    }
    try {
        return record_from_json(j);
    } catch (const SimError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        fail(errc::io_error, std::string("malformed report: ") + e.what());
    } catch (const std::exception& e) {
        fail(errc::io_error, std::string("malformed report: ") + e.what());
    }
}

RunRecord read_report(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(errc::io_error, "cannot open report " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return report_from_string(buf.str());
}

void write_plot_csvs(const RunRecord& run, const std::string& dir)
{
    if (run.periods.empty())
        fail(errc::empty_run, "nothing to plot: run has no periods");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        fail(errc::io_error, "cannot create " + dir);

    auto write_series = [&](const std::string& name, auto&& value_at) {
        std::ostringstream out;
        out << "period,value\n";
        for (std::size_t i = 0; i < run.periods.size(); ++i)
            out << run.periods[i].period << ',' << value_at(i) << '\n';
        atomic_write_file((fs::path(dir) / name).string(), out.str());
    };

    write_series("price.csv", [&](std::size_t i) {
        auto it = run.periods[i].prices.find("stable");
        return it == run.periods[i].prices.end() ? std::string("0")
                                                 : format_price(it->second);
    });
    write_series("amounts.csv", [&](std::size_t i) {
        const auto& units = run.periods[i].cohort_units;
        return units.empty() ? std::string("0") : format_amount(units.front());
    });
    write_series("utility.csv", [&](std::size_t i) {
        const auto& utils = run.periods[i].cohort_utilities;
        return utils.empty() ? std::string("0") : format_usd(utils.front());
    });
    write_series("gamma_d.csv", [&](std::size_t i) {
        if (run.verdict && i < run.verdict->gamma_d.size())
            return format_double(run.verdict->gamma_d[i]);
        return std::string("0");
    });
}

} // namespace pegsim
