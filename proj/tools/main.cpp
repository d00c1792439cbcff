#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bdos/csv.hpp"
#include "bdos/econ.hpp"
#include "bdos/equilibrium.hpp"
#include "bdos/markov.hpp"
#include "bdos/sim.hpp"
#include "scenario.hpp"

namespace {

using namespace bdos;

/** Grid flag value: a single number, a comma list, or lo:hi:step (inclusive).
 *  An empty string is an empty grid. */
std::vector<double> parse_grid(const std::string& text)
{
    std::vector<double> grid;
    if (text.empty()) return grid;
    if (text.find(':') != std::string::npos) {
        auto first = text.find(':');
        auto second = text.find(':', first + 1);
        if (second == std::string::npos) {
            throw std::runtime_error("range must be lo:hi:step: " + text);
        }
        double lo = csv::parse_double(text.substr(0, first));
        double hi = csv::parse_double(text.substr(first + 1, second - first - 1));
        double step = csv::parse_double(text.substr(second + 1));
        if (!(step > 0.0)) throw std::runtime_error("range step must be positive");
        for (double v = lo; v <= hi + step * 1e-9; v += step) {
            grid.push_back(v);
        }
        return grid;
    }
    for (const std::string& field : csv::split_line(text)) {
        grid.push_back(csv::parse_double(field));
    }
    return grid;
}

unsigned thread_budget()
{
    unsigned budget = std::thread::hardware_concurrency();
    if (budget == 0) budget = 1;
    if (const char* env = std::getenv("BDOS_THREADS")) {
        long requested = std::strtol(env, nullptr, 10);
        if (requested >= 1 && static_cast<unsigned>(requested) < budget) {
            budget = static_cast<unsigned>(requested);
        }
    }
    return budget;
}

/** Index-parallel map with results stored by index; output order never
 *  depends on the thread count. */
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn)
{
    unsigned threads = thread_budget();
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, count); ++t) {
        pool.emplace_back(worker);
    }
    for (std::thread& t : pool) t.join();
}

/** Collects finished artifacts and writes them only after the whole command
 *  succeeded; a failed write removes everything already written. */
class OutputSet {
public:
    void add(std::optional<std::string> path, std::string content)
    {
        artifacts_.push_back({std::move(path), std::move(content)});
    }

    void commit()
    {
        std::vector<std::string> written;
        for (const auto& [path, content] : artifacts_) {
            if (!path) {
                std::cout << content;
                continue;
            }
            std::ofstream out(*path, std::ios::binary);
            if (!out || !(out << content) || !out.flush()) {
                for (const std::string& w : written) {
                    std::error_code ec;
                    std::filesystem::remove(w, ec);
                }
                throw std::runtime_error("cannot write output file: " + *path);
            }
            written.push_back(*path);
        }
    }

private:
    std::vector<std::pair<std::optional<std::string>, std::string>> artifacts_;
};

int run_threshold(const std::string& alpha_a, const std::string& gamma,
                  const std::string& alpha_i, const std::string& sigma,
                  bool sigma_mode, const std::optional<std::string>& out)
{
    auto alpha_a_grid = parse_grid(alpha_a);
    auto gamma_grid = parse_grid(gamma);
    auto alpha_i_grid = parse_grid(alpha_i);
    auto sigma_grid = sigma_mode ? parse_grid(sigma) : std::vector<double>{0.0};

    std::ostringstream csv_text;
    if (sigma_mode) {
        csv_text << "alpha_a,gamma,alpha_i,sigma,omega_threshold\n";
    } else {
        csv_text << "alpha_a,gamma,alpha_i,omega_threshold\n";
    }
    for (double a : alpha_a_grid) {
        for (double g : gamma_grid) {
            for (double i : alpha_i_grid) {
                for (double s : sigma_grid) {
                    double threshold;
                    if (sigma_mode) {
                        double bstar = s * (1.0 - a - i);
                        threshold = stop_bound(make_threshold_context(a, g, i, bstar));
                    } else {
                        threshold = complete_shutdown_threshold(a, g, i);
                    }
                    csv_text << csv::format(a) << ',' << csv::format(g) << ','
                             << csv::format(i) << ',';
                    if (sigma_mode) csv_text << csv::format(s) << ',';
                    csv_text << csv::format(threshold) << '\n';
                }
            }
        }
    }
    OutputSet outputs;
    outputs.add(out, csv_text.str());
    outputs.commit();
    return 0;
}

int run_partial(const std::string& alpha_a, const std::string& sigma,
                const std::optional<std::string>& out)
{
    std::ostringstream csv_text;
    csv_text << "alpha_a,sigma,relative_throughput,relative_cost\n";
    for (double a : parse_grid(alpha_a)) {
        for (double s : parse_grid(sigma)) {
            auto [throughput, cost] = partial_shutdown(a, s);
            csv_text << csv::format(a) << ',' << csv::format(s) << ','
                     << csv::format(throughput) << ',' << csv::format(cost) << '\n';
        }
    }
    OutputSet outputs;
    outputs.add(out, csv_text.str());
    outputs.commit();
    return 0;
}

int run_two_coin(const std::string& alpha_a, const std::string& gamma,
                 const std::optional<std::string>& out)
{
    std::ostringstream csv_text;
    csv_text << "alpha_a,gamma,r_star\n";
    for (double a : parse_grid(alpha_a)) {
        for (double g : parse_grid(gamma)) {
            csv_text << csv::format(a) << ',' << csv::format(g) << ','
                     << csv::format(two_coin_r_star(a, g)) << '\n';
        }
    }
    OutputSet outputs;
    outputs.add(out, csv_text.str());
    outputs.commit();
    return 0;
}

int run_simulate(const std::string& scenario_path, std::optional<std::uint64_t> seed,
                 std::optional<std::int64_t> rounds, std::optional<std::string> out)
{
    tools::SimulateScenario scenario = tools::load_simulate_scenario(scenario_path);
    if (seed) scenario.config.seed = *seed;      // flags override file values
    if (rounds) scenario.config.rounds = *rounds;
    if (out) scenario.out = *out;

    SimReport report = run(scenario.config);
    std::cerr << "seed: " << report.seed << '\n';
    if (report.clamped_delivery_rounds > 0) {
        std::cerr << "warning: delivery probability clamped to 1 in "
                  << report.clamped_delivery_rounds << " race rounds\n";
    }

    std::ostringstream csv_text;
    write_report_csv(report, scenario.config, csv_text);
    OutputSet outputs;
    outputs.add(scenario.out, csv_text.str());
    outputs.commit();
    return 0;
}

int run_equilibrium(const std::string& scenario_path, std::optional<std::string> out)
{
    tools::EquilibriumScenario scenario = tools::load_equilibrium_scenario(scenario_path);
    if (out) scenario.out = *out;

    struct Cell {
        double omega, eta, alpha_a;
        EquilibriumResult result;
    };
    std::vector<Cell> cells;
    for (double omega : scenario.omega_b) {
        for (double eta : scenario.eta) {
            for (double alpha_a : scenario.alpha_a) {
                cells.push_back({omega, eta, alpha_a, {}});
            }
        }
    }
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;
    parallel_for(cells.size(), [&](std::size_t i) {
        if (failed.load()) return;
        try {
            PowerDistribution dist = scenario.miners;
            dist.eta = cells[i].eta;
            cells[i].result = best_response_fixed_point(dist, cells[i].alpha_a,
                                                        scenario.gamma, cells[i].omega);
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            failed = true;
            failure = e.what();
        }
    });
    if (failed) throw std::runtime_error(failure);

    std::ostringstream csv_text;
    csv_text << "omega_b,eta,alpha_a,relative_throughput,stopped_count,active_power\n";
    for (const Cell& cell : cells) {
        csv_text << csv::format(cell.omega) << ',' << csv::format(cell.eta) << ','
                 << csv::format(cell.alpha_a) << ','
                 << csv::format(cell.result.relative_throughput) << ','
                 << cell.result.stopped.size() << ','
                 << csv::format(cell.result.active_power) << '\n';
    }
    OutputSet outputs;
    outputs.add(scenario.out, csv_text.str());
    outputs.commit();
    return 0;
}

int run_empirical(const std::string& scenario_path, std::optional<std::string> out_prefix)
{
    tools::EmpiricalScenario scenario = tools::load_empirical_scenario(scenario_path);
    if (out_prefix) scenario.out_prefix = *out_prefix;
    if (!scenario.out_prefix) {
        throw std::runtime_error("empirical needs --out PREFIX (three files)");
    }

    std::ifstream market_in(scenario.market_path);
    if (!market_in) throw std::runtime_error("cannot open " + scenario.market_path);
    auto records = load_market_csv(market_in);
    std::ifstream hardware_in(scenario.hardware_path);
    if (!hardware_in) throw std::runtime_error("cannot open " + scenario.hardware_path);
    auto rigs = load_hardware_csv(hardware_in);

    CostModel cost{scenario.electricity_price, scenario.opex_overhead};
    auto profits = profitability_series(records, rigs, cost);

    std::ostringstream profitability_csv;
    profitability_csv << "date,omega_b,rig\n";
    for (const ProfitabilityPoint& p : profits) {
        profitability_csv << to_string(p.date) << ',' << csv::format(p.omega_b) << ','
                          << p.rig << '\n';
    }

    auto thresholds = threshold_series(records, rigs, cost, scenario.gamma,
                                       scenario.largest_rational_share, scenario.eta);
    std::ostringstream threshold_csv;
    threshold_csv << "date,eta,alpha_a_min\n";
    for (const ThresholdPoint& row : thresholds) {
        threshold_csv << to_string(row.date) << ',' << csv::format(row.eta) << ',';
        if (row.alpha_a_min) {
            threshold_csv << csv::format(*row.alpha_a_min);
        } else {
            threshold_csv << "inf";
        }
        threshold_csv << '\n';
    }

    // Daily cost of an attacker sized at the threshold, with the altruistic
    // fraction still mining, on the day's best rig.
    std::ostringstream cost_csv;
    cost_csv << "date,alpha_a,eta,daily_cost\n";
    for (std::size_t r = 0; r < records.size(); ++r) {
        const HardwareSpec* rig = nullptr;
        for (const HardwareSpec& candidate : rigs) {
            if (candidate.name == profits[r].rig) rig = &candidate;
        }
        if (!rig) continue;
        for (std::size_t e = 0; e < scenario.eta.size(); ++e) {
            const ThresholdPoint& row = thresholds[r * scenario.eta.size() + e];
            if (!row.alpha_a_min) continue;
            double daily = attack_daily_cost(records[r], *rig, cost, *row.alpha_a_min,
                                             scenario.eta[e], scenario.lambda);
            cost_csv << to_string(records[r].date) << ','
                     << csv::format(*row.alpha_a_min) << ','
                     << csv::format(scenario.eta[e]) << ',' << csv::format(daily) << '\n';
        }
    }

    OutputSet outputs;
    outputs.add(*scenario.out_prefix + "_profitability.csv", profitability_csv.str());
    outputs.add(*scenario.out_prefix + "_threshold.csv", threshold_csv.str());
    outputs.add(*scenario.out_prefix + "_cost.csv", cost_csv.str());
    outputs.commit();
    return 0;
}

int run_majority_cost(double network_ths, const std::string& hardware_path,
                      double electricity_price, double opex_overhead,
                      const std::optional<std::string>& out)
{
    std::ifstream hardware_in(hardware_path);
    if (!hardware_in) throw std::runtime_error("cannot open " + hardware_path);
    auto rigs = load_hardware_csv(hardware_in);
    CostModel cost{electricity_price, opex_overhead};

    std::ostringstream csv_text;
    csv_text << "rig,units,capex,daily_opex\n";
    for (const HardwareSpec& rig : rigs) {
        MajorityAttackCost result = majority_attack_cost(network_ths * 1e12, rig, cost);
        csv_text << rig.name << ',' << result.units << ',' << csv::format(result.capex)
                 << ',' << csv::format(result.daily_opex) << '\n';
    }
    OutputSet outputs;
    outputs.add(out, csv_text.str());
    outputs.commit();
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"BDoS mining-attack laboratory: closed-form sweeps, Monte Carlo "
                 "simulation and economic estimation, all emitting plot-ready CSV"};
    app.require_subcommand(1);

    std::string alpha_a = "0.2";
    std::string gamma = "0.5";
    std::string alpha_i = "0.1";
    std::string sigma;
    std::string scenario_path;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> rounds;
    double network_ths = 0.0;
    std::string hardware_path;
    double electricity_price = 0.04;
    double opex_overhead = 1.15;

    auto* threshold = app.add_subcommand(
        "threshold", "Profitability threshold for stopping a rational miner");
    threshold->add_option("--alpha-a", alpha_a, "attacker power grid");
    threshold->add_option("--gamma", gamma, "rushing factor grid");
    threshold->add_option("--alpha-i", alpha_i, "focal miner power grid");
    auto* sigma_opt = threshold->add_option(
        "--sigma", sigma, "fraction of other rational miners still mining");
    threshold->add_option("--out", out, "output CSV path (default stdout)");

    auto* partial = app.add_subcommand(
        "partial", "Relative throughput and attacker cost of a partial shutdown");
    partial->add_option("--alpha-a", alpha_a, "attacker power grid");
    partial->add_option("--sigma", sigma, "surviving miner fraction grid")->required();
    partial->add_option("--out", out, "output CSV path (default stdout)");

    auto* two_coin = app.add_subcommand(
        "two-coin", "Profitability ratio letting miners defect to a second coin");
    two_coin->add_option("--alpha-a", alpha_a, "attacker power grid");
    two_coin->add_option("--gamma", gamma, "rushing factor grid");
    two_coin->add_option("--out", out, "output CSV path (default stdout)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of the mining game");
    simulate->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    simulate->add_option("--seed", seed, "override the scenario seed");
    simulate->add_option("--rounds", rounds, "override the scenario round count");
    simulate->add_option("--out", out, "output CSV path (default stdout)");

    auto* equilibrium = app.add_subcommand(
        "equilibrium", "Best-response equilibrium throughput curves");
    equilibrium->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    equilibrium->add_option("--out", out, "output CSV path (default stdout)");

    auto* empirical = app.add_subcommand(
        "empirical", "Profitability, attack threshold and cost from market data");
    empirical->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    empirical->add_option("--out", out, "output prefix for the three CSV files");

    auto* majority = app.add_subcommand(
        "majority-cost", "Hardware bill for matching the whole network");
    majority->add_option("--network-ths", network_ths, "network hashrate in TH/s")
        ->required();
    majority->add_option("--hardware", hardware_path, "hardware catalog CSV")->required();
    majority->add_option("--electricity-price", electricity_price, "fiat per kWh");
    majority->add_option("--opex-overhead", opex_overhead, "cooling and other OPEX factor");
    majority->add_option("--out", out, "output CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (threshold->parsed()) {
            return run_threshold(alpha_a, gamma, alpha_i, sigma, sigma_opt->count() > 0,
                                 out);
        }
        if (partial->parsed()) return run_partial(alpha_a, sigma, out);
        if (two_coin->parsed()) return run_two_coin(alpha_a, gamma, out);
        if (simulate->parsed()) return run_simulate(scenario_path, seed, rounds, out);
        if (equilibrium->parsed()) return run_equilibrium(scenario_path, out);
        if (empirical->parsed()) return run_empirical(scenario_path, out);
        if (majority->parsed()) {
            return run_majority_cost(network_ths, hardware_path, electricity_price,
                                     opex_overhead, out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
