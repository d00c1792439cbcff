#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "bdos/equilibrium.hpp"
#include "bdos/markov.hpp"

using namespace bdos;
using doctest::Approx;

namespace {

// Pool-sized snapshot in the style of early-2020 hashrate distributions;
// the largest miner holds roughly a fifth of the rational power.
PowerDistribution march2020_style(double eta)
{
    PowerDistribution dist;
    dist.rational = {{"pool_a", 0.21}, {"pool_b", 0.18}, {"pool_c", 0.14},
                     {"pool_d", 0.11}, {"pool_e", 0.09}, {"pool_f", 0.07},
                     {"pool_g", 0.06}, {"pool_h", 0.05}, {"pool_i", 0.04},
                     {"pool_j", 0.03}, {"pool_k", 0.02}};
    dist.eta = eta;
    return dist;
}

}  // namespace

TEST_CASE("no adversary means nobody stops")
{
    auto result = best_response_fixed_point(march2020_style(0.1), 0.0, 0.5, 1.3);
    CHECK(result.stopped.empty());
    CHECK(result.relative_throughput == 1.0);
}

TEST_CASE("a lone rational miner stops below her shutdown threshold")
{
    PowerDistribution dist;
    dist.rational = {{"solo", 1.0}};
    dist.eta = 0.0;
    double alpha_a = 0.2;
    double threshold = complete_shutdown_threshold(alpha_a, 0.5, 1.0 - alpha_a);

    auto stopped = best_response_fixed_point(dist, alpha_a, 0.5, threshold - 0.01);
    CHECK(stopped.stopped == std::vector<std::string>{"solo"});
    CHECK(stopped.relative_throughput == 0.0);
    CHECK(stopped.active_power == 0.0);

    auto mining = best_response_fixed_point(dist, alpha_a, 0.5, threshold + 0.01);
    CHECK(mining.stopped.empty());
}

TEST_CASE("profitability below every bound stops everyone")
{
    PowerDistribution dist = march2020_style(0.0);
    double alpha_a = 0.25;
    // The largest miner has the lowest complete-shutdown bound; anything
    // below it stops the whole field.
    double largest = 0.21 * (1.0 - alpha_a);
    double bound = complete_shutdown_threshold(alpha_a, 0.5, largest);
    auto result = best_response_fixed_point(dist, alpha_a, 0.5, bound - 1e-6);
    CHECK(result.stopped.size() == dist.rational.size());
    CHECK(result.relative_throughput == 0.0);
}

TEST_CASE("very high profitability keeps everyone mining")
{
    for (double alpha_a : {0.05, 0.15, 0.3}) {
        auto result = best_response_fixed_point(march2020_style(0.2), alpha_a, 0.5, 10.0);
        CHECK(result.stopped.empty());
    }
}

TEST_CASE("result does not depend on the input order")
{
    PowerDistribution dist = march2020_style(0.2);
    auto expected = best_response_fixed_point(dist, 0.2, 0.5, 1.75);

    std::mt19937 rng(5);
    for (int i = 0; i < 10; ++i) {
        std::shuffle(dist.rational.begin(), dist.rational.end(), rng);
        auto result = best_response_fixed_point(dist, 0.2, 0.5, 1.75);
        auto sorted_a = expected.stopped;
        auto sorted_b = result.stopped;
        std::sort(sorted_a.begin(), sorted_a.end());
        std::sort(sorted_b.begin(), sorted_b.end());
        CHECK(sorted_a == sorted_b);
        CHECK(result.relative_throughput == expected.relative_throughput);
    }
}

TEST_CASE("strategic substitutes can cycle; the fallback still finds an equilibrium")
{
    // Two equal miners with omega between the bound against a stopped peer
    // and the bound against a mining peer: all-stop and all-mine both fail,
    // only the asymmetric profiles are fixed points.
    PowerDistribution dist;
    dist.rational = {{"a", 0.5}, {"b", 0.5}};
    dist.eta = 0.0;
    double alpha_a = 0.2;
    double q_alone = stop_bound(make_threshold_context(alpha_a, 0.5, 0.4, 0.0));
    double q_crowded = stop_bound(make_threshold_context(alpha_a, 0.5, 0.4, 0.4));
    REQUIRE(q_alone < q_crowded);
    double omega = 0.5 * (q_alone + q_crowded);

    auto result = best_response_fixed_point(dist, alpha_a, 0.5, omega);
    CHECK(result.stopped.size() == 1);
    CHECK(result.active_power == Approx(0.4).epsilon(1e-12));
}

TEST_CASE("randomized configurations always return verified fixed points")
{
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> count(1, 12);
    for (int trial = 0; trial < 300; ++trial) {
        PowerDistribution dist;
        int n = count(rng);
        for (int i = 0; i < n; ++i) {
            dist.rational.emplace_back("m" + std::to_string(i), 0.01 + unit(rng));
        }
        dist.eta = unit(rng) * 0.5;
        double alpha_a = unit(rng) * 0.45;
        double gamma = unit(rng);
        double omega = 1.0 + unit(rng) * 2.0;

        // best_response_fixed_point re-verifies the fixed point internally
        // and throws if the returned state is not one.
        auto result = best_response_fixed_point(dist, alpha_a, gamma, omega);
        CHECK(result.stopped.size() <= dist.rational.size());
        CHECK(result.active_power >= dist.eta * (1.0 - alpha_a) - 1e-12);
        CHECK(result.relative_throughput >= 0.0);
        CHECK(result.relative_throughput <= 1.0);
    }
}

TEST_CASE("throughput curve is non-increasing in the attacker size")
{
    std::vector<double> grid;
    for (int i = 0; i <= 30; ++i) grid.push_back(i * 0.01);
    for (double omega : {1.5, 1.75, 2.5}) {
        for (double eta : {0.0, 0.2}) {
            auto curve = throughput_curve(march2020_style(eta), 0.5, omega, grid);
            REQUIRE(curve.size() == grid.size());
            for (std::size_t i = 1; i < curve.size(); ++i) {
                CHECK(curve[i].second.relative_throughput <=
                      curve[i - 1].second.relative_throughput + 1e-9);
            }
        }
    }
}

TEST_CASE("a fifth of the power slows the March-2020-style field by roughly 40%")
{
    auto result = best_response_fixed_point(march2020_style(0.2), 0.2, 0.5, 1.75);
    double reduction = 1.0 - result.relative_throughput;
    CHECK(reduction > 0.30);
    CHECK(reduction < 0.50);
}

TEST_CASE("invalid inputs are rejected")
{
    PowerDistribution dist = march2020_style(0.2);
    CHECK_THROWS_AS(best_response_fixed_point(dist, 1.0, 0.5, 1.5),
                    std::invalid_argument);
    dist.eta = 1.5;
    CHECK_THROWS_AS(best_response_fixed_point(dist, 0.2, 0.5, 1.5),
                    std::invalid_argument);
    dist = march2020_style(0.2);
    dist.rational.clear();
    CHECK_THROWS_AS(best_response_fixed_point(dist, 0.2, 0.5, 1.5),
                    std::invalid_argument);
    dist = march2020_style(0.2);
    dist.rational[0].second = 0.0;
    CHECK_THROWS_AS(best_response_fixed_point(dist, 0.2, 0.5, 1.5),
                    std::invalid_argument);
}
