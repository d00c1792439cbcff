#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CommandResult {
    int status = -1;
    std::string output;
};

CommandResult run_cli(const std::string& args)
{
    std::string command = std::string(BDOS_BIN_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CommandResult result;
    char buffer[4096];
    std::size_t got;
    while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
        result.output.append(buffer, got);
    }
    int rc = pclose(pipe);
    result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return result;
}

fs::path temp_dir()
{
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("bdos_cli_test_" + std::to_string(getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path);
    REQUIRE(out.is_open());
    out << content;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.is_open());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const std::string SIM_SCENARIO = R"({
  "alpha_a": 0.2,
  "gamma": 0.5,
  "lambda": 1.0,
  "block_reward": 2.0,
  "miners": [{"alpha": 0.8, "cost": 1.0, "strategy": "mine"}],
  "rounds": 20000,
  "seed": 12345
})";

const std::string HARDWARE_CSV =
    "name,hashrate_ths,power_kw,unit_price,available_from\n"
    "s17_pro,50,1.975,2128,2019-04-01\n"
    "s9_se,16,1.280,350,2019-07-01\n";

}  // namespace

TEST_CASE("threshold emits the published anchor row")
{
    auto r = run_cli("threshold --alpha-a 0.2 --gamma 0.5 --alpha-i 0.1");
    CHECK(r.status == 0);
    CHECK(r.output == "alpha_a,gamma,alpha_i,omega_threshold\n0.2,0.5,0.1,1.6\n");
}

TEST_CASE("threshold sigma mode evaluates the fixed-survivor bound")
{
    auto r = run_cli("threshold --alpha-a 0.2 --gamma 0.5 --alpha-i 0.16 --sigma 1.0");
    CHECK(r.status == 0);
    CHECK(r.output ==
          "alpha_a,gamma,alpha_i,sigma,omega_threshold\n0.2,0.5,0.16,1,2.00276243\n");
}

TEST_CASE("an empty grid yields a header-only file and success")
{
    auto r = run_cli("threshold --alpha-a \"\" --gamma 0.5 --alpha-i 0.1");
    CHECK(r.status == 0);
    CHECK(r.output == "alpha_a,gamma,alpha_i,omega_threshold\n");
}

TEST_CASE("grid ranges expand inclusively")
{
    auto r = run_cli("two-coin --alpha-a 0:0.2:0.1 --gamma 0.5");
    CHECK(r.status == 0);
    CHECK(r.output ==
          "alpha_a,gamma,r_star\n0,0.5,1\n0.1,0.5,0.949541284\n0.2,0.5,0.896551724\n");
}

TEST_CASE("partial shutdown rows")
{
    auto r = run_cli("partial --alpha-a 0,0.2 --sigma 0,1");
    CHECK(r.status == 0);
    CHECK(r.output ==
          "alpha_a,sigma,relative_throughput,relative_cost\n"
          "0,0,1,1\n0,1,1,1\n0.2,0,0,0\n0.2,1,0.827586207,0.827586207\n");
}

TEST_CASE("simulate is byte-identical for a fixed scenario and seed")
{
    fs::path scenario = temp_dir() / "sim.json";
    write_file(scenario, SIM_SCENARIO);
    fs::path out_a = temp_dir() / "report_a.csv";
    fs::path out_b = temp_dir() / "report_b.csv";

    auto a = run_cli("simulate --scenario " + scenario.string() + " --out " + out_a.string());
    auto b = run_cli("simulate --scenario " + scenario.string() + " --out " + out_b.string());
    CHECK(a.status == 0);
    CHECK(b.status == 0);
    CHECK(read_file(out_a) == read_file(out_b));

    auto c = run_cli("simulate --scenario " + scenario.string() + " --seed 999 --out " +
                     out_b.string());
    CHECK(c.status == 0);
    CHECK(read_file(out_a) != read_file(out_b));
}

TEST_CASE("simulate rejects unknown scenario keys")
{
    fs::path scenario = temp_dir() / "bad.json";
    write_file(scenario, R"({"alpha_a": 0.2, "gamma": 0.5, "lambda": 1.0,
        "block_reward": 2.0, "rounds": 10, "seed": 1, "typo_key": true,
        "miners": [{"alpha": 0.8, "cost": 1.0, "strategy": "mine"}]})");
    auto r = run_cli("simulate --scenario " + scenario.string());
    CHECK(r.status == 1);
}

TEST_CASE("equilibrium scenario end to end")
{
    fs::path scenario = temp_dir() / "eq.json";
    write_file(scenario, R"({
      "gamma": 0.5,
      "omega_b": [10.0],
      "eta": [0.0],
      "alpha_a": [0.0, 0.2],
      "miners": [{"label": "a", "power": 0.6}, {"label": "b", "power": 0.4}]
    })");
    auto r = run_cli("equilibrium --scenario " + scenario.string());
    CHECK(r.status == 0);
    CHECK(r.output ==
          "omega_b,eta,alpha_a,relative_throughput,stopped_count,active_power\n"
          "10,0,0,1,0,1\n10,0,0.2,0.827586207,0,0.8\n");
}

TEST_CASE("empirical pipeline writes the three figure tables")
{
    fs::path market = temp_dir() / "market.csv";
    // s17 rig with the price calibrated so omega comes out at exactly 1.47.
    double difficulty = 1e20 / 4294967296.0;  // 1e20 hashes per block
    double cost_per_block = 1e20 / 50e12 * 1975.0 / 3.6e6 * 0.04 * 1.15;
    std::ostringstream market_csv;
    market_csv << std::setprecision(17);
    market_csv << "date,difficulty,coin_price,block_reward\n";
    market_csv << "2020-03-13," << difficulty << ',' << 1.47 * cost_per_block << ",1\n";
    market_csv << "2020-03-14," << difficulty << ',' << 1.47 * cost_per_block << ",1\n";
    write_file(market, market_csv.str());

    fs::path hardware = temp_dir() / "hardware.csv";
    write_file(hardware, HARDWARE_CSV);

    fs::path scenario = temp_dir() / "empirical.json";
    write_file(scenario, R"({
      "market": ")" + market.string() + R"(",
      "hardware": ")" + hardware.string() + R"(",
      "electricity_price": 0.04,
      "opex_overhead": 1.15,
      "gamma": 0.5,
      "largest_rational_share": 0.2,
      "eta": [0.0, 0.2]
    })");

    fs::path prefix = temp_dir() / "attack_econ";
    auto r = run_cli("empirical --scenario " + scenario.string() + " --out " +
                     prefix.string());
    CHECK(r.status == 0);

    std::string profits = read_file(prefix.string() + "_profitability.csv");
    CHECK(profits.find("date,omega_b,rig") == 0);
    CHECK(profits.find("2020-03-13,1.47,s17_pro") != std::string::npos);

    std::string thresholds = read_file(prefix.string() + "_threshold.csv");
    CHECK(thresholds.find("date,eta,alpha_a_min") == 0);
    CHECK(thresholds.find("2020-03-13,0,0.212") != std::string::npos);

    std::string costs = read_file(prefix.string() + "_cost.csv");
    CHECK(costs.find("date,alpha_a,eta,daily_cost") == 0);
    // Complete shutdown at eta = 0 costs nothing.
    CHECK(costs.find("2020-03-13,0.212") != std::string::npos);
    CHECK(costs.find(",0,0\n") != std::string::npos);
}

TEST_CASE("empirical failure leaves no partial outputs behind")
{
    fs::path market = temp_dir() / "bad_market.csv";
    write_file(market, "date,difficulty,coin_price,block_reward\n2020-03-13,-1,1,1\n");
    fs::path hardware = temp_dir() / "hardware2.csv";
    write_file(hardware, HARDWARE_CSV);
    fs::path scenario = temp_dir() / "bad_empirical.json";
    write_file(scenario, R"({
      "market": ")" + market.string() + R"(",
      "hardware": ")" + hardware.string() + R"(",
      "electricity_price": 0.04,
      "gamma": 0.5,
      "largest_rational_share": 0.2,
      "eta": [0.0]
    })");
    fs::path prefix = temp_dir() / "fail7";
    auto r = run_cli("empirical --scenario " + scenario.string() + " --out " +
                     prefix.string());
    CHECK(r.status == 1);
    CHECK(!fs::exists(prefix.string() + "_profitability.csv"));
    CHECK(!fs::exists(prefix.string() + "_threshold.csv"));
    CHECK(!fs::exists(prefix.string() + "_cost.csv"));
}

TEST_CASE("majority-cost reproduces the rig bill")
{
    fs::path hardware = temp_dir() / "hardware3.csv";
    write_file(hardware, HARDWARE_CSV);
    auto r = run_cli("majority-cost --network-ths 120000000 --hardware " +
                     hardware.string());
    CHECK(r.status == 0);
    CHECK(r.output ==
          "rig,units,capex,daily_opex\n"
          "s17_pro,2400000,5.1072e+09,5232960\n"
          "s9_se,7500000,2.625e+09,10598400\n");
}

TEST_CASE("equilibrium output does not depend on the thread budget")
{
    fs::path scenario = temp_dir() / "eq_threads.json";
    write_file(scenario, R"({
      "gamma": 0.5,
      "omega_b": [1.5, 1.75],
      "eta": [0.0, 0.2],
      "alpha_a": [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3],
      "miners": [{"label": "a", "power": 0.5}, {"label": "b", "power": 0.3},
                 {"label": "c", "power": 0.2}]
    })");
    auto serial = run_cli("equilibrium --scenario " + scenario.string());
    CHECK(serial.status == 0);
    std::string env_cmd = "BDOS_THREADS=2 " + std::string(BDOS_BIN_PATH) +
                          " equilibrium --scenario " + scenario.string() +
                          " 2>/dev/null";
    FILE* pipe = popen(env_cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string parallel_output;
    char buffer[4096];
    std::size_t got;
    while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
        parallel_output.append(buffer, got);
    }
    pclose(pipe);
    CHECK(parallel_output == serial.output);
}

TEST_CASE("invalid flag values exit nonzero")
{
    CHECK(run_cli("threshold --alpha-a 1.5 --gamma 0.5 --alpha-i 0.1").status == 1);
    CHECK(run_cli("partial --alpha-a 0.2 --sigma 2.0").status == 1);
    CHECK(run_cli("simulate --scenario /nonexistent/path.json").status == 1);
    CHECK(run_cli("no-such-command").status != 0);
}
