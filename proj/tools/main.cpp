#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pegsim/engine.hpp"
#include "pegsim/fetch.hpp"
#include "pegsim/report.hpp"

namespace {

using namespace pegsim;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

void print_verdict_line(const RunRecord& run)
{
    if (!run.verdict)
        return;
    const PonziVerdict& v = *run.verdict;
    std::cout << "verdict: rational=" << (v.rational ? "true" : "false")
              << " condition_i=" << (v.condition_i ? "true" : "false")
              << " condition_ii=" << (v.condition_ii ? "true" : "false")
              << " weak_pareto=" << (v.weak_pareto ? "true" : "false")
              << " strict_pareto=" << (v.strict_pareto ? "true" : "false") << "\n";
}

struct SimulateArgs {
    std::string protocol, mode, scenario_path, out_path;
    std::size_t periods = 0;
};

int run_simulate(const SimulateArgs& args)
{
    Scenario scenario = parse_scenario_file(args.scenario_path);
    if (!args.protocol.empty())
        scenario.protocol = parse_protocol(args.protocol);
    if (!args.mode.empty())
        scenario.mode = parse_mode(args.mode);
    if (args.periods > 0)
        scenario.horizon = args.periods;

    std::optional<ReplayData> data;
    if (!scenario.replay_stable_csv.empty()) {
        ReplayData rd;
        rd.stable = load_csv(scenario.replay_stable_csv, "stable");
        if (!scenario.replay_share_csv.empty())
            rd.share = load_csv(scenario.replay_share_csv, "share");
        if (scenario.horizon == 0)
            scenario.horizon = rd.stable.size();
        data = std::move(rd);
    }
    RunRecord run = run_scenario(scenario, data);
    write_report(run, args.out_path);
    print_verdict_line(run);
    return kExitOk;
}

struct ReplayArgs {
    std::string protocol, stable_csv, share_csv, scenario_path, out_path;
};

int run_replay(const ReplayArgs& args)
{
    Scenario scenario;
    if (!args.scenario_path.empty())
        scenario = parse_scenario_file(args.scenario_path);
    scenario.protocol = parse_protocol(args.protocol);
    scenario.mode = Mode::replay;

    ReplayData data;
    data.stable = load_csv(args.stable_csv, "stable");
    if (!args.share_csv.empty())
        data.share = load_csv(args.share_csv, "share");
    if (scenario.protocol == Protocol::dual && !data.share)
        fail(errc::config_invalid, "dual replay needs --share-csv");

    if (scenario.horizon == 0)
        scenario.horizon = data.share ? std::min(data.stable.size(), data.share->size())
                                      : data.stable.size();
    if (scenario.cohorts.empty()) {
        // Default: one buy-and-hold dollar from period one.
        CohortSpec c;
        c.id = "cohort-1";
        c.join_period = 1;
        c.usd = usd(1);
        scenario.cohorts.push_back(c);
    }
    RunRecord run = run_scenario(scenario, data);
    write_report(run, args.out_path);
    print_verdict_line(run);
    return kExitOk;
}

struct EvaluateArgs {
    std::string run_path;
    std::size_t window = 0;
    double epsilon = -1.0;
};

int run_evaluate(const EvaluateArgs& args)
{
    RunRecord run = read_report(args.run_path);
    ClassifierConfig config{run.verdict_window, run.verdict_epsilon};
    if (args.window > 0)
        config.window = args.window;
    if (args.epsilon >= 0.0)
        config.epsilon = args.epsilon;
    PonziVerdict v = classify_rational_ponzi(to_run_view(run), config);

    nlohmann::ordered_json j;
    j["condition_i"] = v.condition_i;
    j["condition_ii"] = v.condition_ii;
    j["rational"] = v.rational;
    j["weak_pareto"] = v.weak_pareto;
    j["strict_pareto"] = v.strict_pareto;
    j["pareto_vacuous"] = v.pareto_vacuous;
    j["window"] = v.window;
    j["epsilon"] = format_double(v.epsilon);
    if (v.worst_cohort)
        j["worst_cohort"] = {{"id", v.worst_cohort->id},
                             {"shortfall", format_double(v.worst_cohort->shortfall)}};
    else
        j["worst_cohort"] = nullptr;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

struct PlotArgs {
    std::string run_path, out_dir;
};

int run_plot(const PlotArgs& args)
{
    RunRecord run = read_report(args.run_path);
    write_plot_csvs(run, args.out_dir);
    return kExitOk;
}

struct FetchArgs {
    std::string api_base, coin_id, from, to, cache_dir;
};

int run_fetch(const FetchArgs& args)
{
    FetchOptions opt;
    opt.api_base = args.api_base;
    opt.coin_id = args.coin_id;
    opt.from_day = parse_day(args.from);
    opt.to_day = parse_day(args.to);
    opt.cache_dir = args.cache_dir;
    TimeSeries series = fetch_series(opt);
    std::cout << fetch_cache_path(opt) << " " << series.size() << " points\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"algorithmic-stablecoin simulator and rational-Ponzi evaluator"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "run a scenario file");
    simulate->add_option("--protocol", sim.protocol, "rebase | dual | tritoken")
        ->check(CLI::IsMember({"rebase", "dual", "tritoken"}));
    simulate->add_option("--mode", sim.mode, "replay | endogenous | idealized")
        ->check(CLI::IsMember({"replay", "endogenous", "idealized"}));
    simulate->add_option("--periods", sim.periods, "override the scenario horizon");
    simulate->add_option("--scenario", sim.scenario_path, "scenario file")->required();
    simulate->add_option("--out", sim.out_path, "report output path")->required();

    ReplayArgs rep;
    CLI::App* replay = app.add_subcommand("replay", "replay historical CSV series");
    replay->add_option("--protocol", rep.protocol, "rebase | dual | tritoken")
        ->check(CLI::IsMember({"rebase", "dual", "tritoken"}))
        ->required();
    replay->add_option("--stable-csv", rep.stable_csv, "price series for the stable token")
        ->required();
    replay->add_option("--share-csv", rep.share_csv, "price series for the share token");
    replay->add_option("--scenario", rep.scenario_path, "optional scenario file");
    replay->add_option("--out", rep.out_path, "report output path")->required();

    EvaluateArgs eval;
    CLI::App* evaluate = app.add_subcommand("evaluate", "classify a finished run report");
    evaluate->add_option("--run", eval.run_path, "run report")->required();
    evaluate->add_option("--window", eval.window, "trailing window for condition (i)");
    evaluate->add_option("--epsilon", eval.epsilon, "positivity threshold in USD");

    PlotArgs plot;
    CLI::App* plot_cmd = app.add_subcommand("plot", "emit plot-ready CSV series");
    plot_cmd->add_option("--run", plot.run_path, "run report")->required();
    plot_cmd->add_option("--out", plot.out_dir, "output directory")->required();

    FetchArgs fetch;
    CLI::App* fetch_cmd =
        app.add_subcommand("fetch", "fetch and cache a daily price series");
    fetch_cmd->add_option("--api-base", fetch.api_base, "market-chart-range API base URL")
        ->required();
    fetch_cmd->add_option("--coin-id", fetch.coin_id, "remote coin id")->required();
    fetch_cmd->add_option("--from", fetch.from, "start date YYYY-MM-DD")->required();
    fetch_cmd->add_option("--to", fetch.to, "end date YYYY-MM-DD")->required();
    fetch_cmd->add_option("--cache-dir", fetch.cache_dir,
                          "cache directory (default $PEGSIM_CACHE_DIR or ./cache)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed())
            return run_simulate(sim);
        if (replay->parsed())
            return run_replay(rep);
        if (evaluate->parsed())
            return run_evaluate(eval);
        if (plot_cmd->parsed())
            return run_plot(plot);
        if (fetch_cmd->parsed())
            return run_fetch(fetch);
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_data_error() ? kExitData : kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
