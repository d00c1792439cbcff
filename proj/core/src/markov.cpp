#include "bdos/markov.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bdos {

namespace {

constexpr double BUDGET_TOLERANCE = 1e-12;

void check_unit_interval(double v, const char* name, bool open_top)
{
    bool ok = std::isfinite(v) && v >= 0.0 && (open_top ? v < 1.0 : v <= 1.0);
    if (!ok) {
        throw std::invalid_argument(std::string(name) + " out of range");
    }
}

/** Stationary distribution of the chain with rates
 *  0->1: lambda*alpha_a, 1->2: lambda*b, 1->0: lambda*a, 2->0: lambda.
 *  The lambda factor cancels. */
StateDistribution chain_distribution(double alpha_a, double b, double a)
{
    if (alpha_a == 0.0) {
        return {1.0, 0.0, 0.0};  // no adversary: the chain never leaves state 0
    }
    double z = alpha_a * b + alpha_a + a + b;
    return {(b + a) / z, alpha_a / z, alpha_a * b / z};
}

double race_bonus(const AnalysisContext& ctx)
{
    // Expected share of the block reward a miner keeps when her block starts
    // a fork race against the released adversary block.
    return (1.0 - ctx.gamma) * (1.0 - ctx.alpha_a);
}

}  // namespace

AnalysisContext make_context(double alpha_a, double gamma, double lambda,
                             double block_reward, double alpha_i, double cost_i,
                             double alpha_bstar, double alpha_ba)
{
    check_unit_interval(alpha_a, "alpha_a", true);
    check_unit_interval(gamma, "gamma", false);
    if (!(lambda > 0.0) || !(block_reward > 0.0) || !(cost_i > 0.0)) {
        throw std::invalid_argument("lambda, block_reward and cost_i must be positive");
    }
    if (!(alpha_i >= 0.0) || !(alpha_bstar >= 0.0) || !(alpha_ba >= 0.0)) {
        throw std::invalid_argument("power fractions must be non-negative");
    }
    if (alpha_bstar + alpha_ba > 1.0 - alpha_a - alpha_i + BUDGET_TOLERANCE) {
        throw std::invalid_argument("alpha_bstar + alpha_ba exceeds the power budget");
    }
    AnalysisContext ctx;
    ctx.alpha_a = alpha_a;
    ctx.gamma = gamma;
    ctx.lambda = lambda;
    ctx.block_reward = block_reward;
    ctx.alpha_i = alpha_i;
    ctx.cost_i = cost_i;
    ctx.alpha_bstar = alpha_bstar;
    ctx.alpha_ba = alpha_ba;
    ctx.omega_b = lambda * block_reward / cost_i;
    return ctx;
}

AnalysisContext make_context(const GameParams& params, std::size_t miner_index,
                             double alpha_bstar, double alpha_ba)
{
    if (auto err = validate(params)) {
        throw std::invalid_argument(std::string("invalid params: ") +
                                    std::string(to_string(*err)));
    }
    if (miner_index >= params.miners.size()) {
        throw std::invalid_argument("miner_index out of range");
    }
    const MinerSpec& m = params.miners[miner_index];
    return make_context(params.alpha_a, params.gamma, params.lambda,
                        params.block_reward, m.alpha, m.cost, alpha_bstar, alpha_ba);
}

AnalysisContext make_threshold_context(double alpha_a, double gamma,
                                       double alpha_i, double alpha_bstar,
                                       double alpha_ba)
{
    return make_context(alpha_a, gamma, 1.0, 1.0, alpha_i, 1.0, alpha_bstar, alpha_ba);
}

TwoCoinContext make_two_coin_context(AnalysisContext base, double omega_b_prime)
{
    if (!(omega_b_prime > 0.0)) {
        throw std::invalid_argument("omega_b_prime must be positive");
    }
    return TwoCoinContext{base, omega_b_prime};
}

double defection_ratio(const TwoCoinContext& ctx)
{
    return ctx.omega_b_prime / ctx.base.omega_b;
}

bool attack_drives_defection(const TwoCoinContext& ctx)
{
    return defection_ratio(ctx) > two_coin_w(ctx.base);
}

std::pair<double, double> effective_power(const AnalysisContext& ctx, Strategy s)
{
    switch (s) {
    case Strategy::Mine: return {ctx.alpha_bstar + ctx.alpha_i, ctx.alpha_ba};
    case Strategy::Stop: return {ctx.alpha_bstar, ctx.alpha_ba};
    case Strategy::Spv: return {ctx.alpha_bstar, ctx.alpha_ba + ctx.alpha_i};
    }
    throw std::invalid_argument("unknown strategy");
}

StateDistribution state_distribution(const AnalysisContext& ctx, Strategy s)
{
    auto [b, a] = effective_power(ctx, s);
    return chain_distribution(ctx.alpha_a, b, a);
}

double utility_stop(const AnalysisContext& ctx)
{
    StateDistribution d = state_distribution(ctx, Strategy::Stop);
    double lk = ctx.lambda * ctx.block_reward;
    return (d.p0 + d.p2) * lk - (1.0 - d.p1) * ctx.cost_i;
}

double utility_mine(const AnalysisContext& ctx)
{
    StateDistribution d = state_distribution(ctx, Strategy::Mine);
    double lk = ctx.lambda * ctx.block_reward;
    return (d.p0 + d.p2 + race_bonus(ctx) * d.p1) * lk - ctx.cost_i;
}

double utility_spv(const AnalysisContext& ctx)
{
    StateDistribution d = state_distribution(ctx, Strategy::Spv);
    double lk = ctx.lambda * ctx.block_reward;
    return (d.p0 + d.p2) * lk - ctx.cost_i;
}

double utility_general(const AnalysisContext& ctx, ActionProfile profile)
{
    if (ctx.alpha_ba != 0.0) {
        throw std::invalid_argument("utility_general requires alpha_ba == 0");
    }
    bool m0 = profile.in_state0 == Action::Mine;
    bool m1 = profile.in_state1 == Action::Mine;
    bool m2 = profile.in_state2 == Action::Mine;
    double lk = ctx.lambda * ctx.block_reward;

    if (ctx.alpha_a == 0.0) {
        // The chain sits in state 0; mining there is the whole game.
        return m0 ? lk - ctx.cost_i : 0.0;
    }

    // Transition rates (lambda cancels): the focal miner's power joins each
    // state according to the profile. Others mine in states 0 and 2;
    // alpha_bstar of them mine in state 1.
    double r01 = ctx.alpha_a;
    double r12 = ctx.alpha_bstar + (m1 ? ctx.alpha_i : 0.0);
    double r20 = 1.0 - (m2 ? 0.0 : ctx.alpha_i);

    StateDistribution d;
    if (r12 == 0.0) {
        d = {0.0, 1.0, 0.0};  // nobody challenges the withheld block
    } else {
        double w1 = r01 / r12;
        double w2 = r01 / r20;
        double total = 1.0 + w1 + w2;
        d = {1.0 / total, w1 / total, w2 / total};
    }

    double mined0 = m0 ? d.p0 : 0.0;
    double mined1 = m1 ? d.p1 : 0.0;
    double mined2 = m2 ? d.p2 : 0.0;
    double revenue = lk * (mined0 + race_bonus(ctx) * mined1 + mined2);
    double cost = ctx.cost_i * (mined0 + mined1 + mined2);
    return revenue - cost;
}

double utility_difference(const AnalysisContext& ctx)
{
    return (utility_stop(ctx) - utility_mine(ctx)) / ctx.cost_i;
}

double stop_bound(const AnalysisContext& ctx)
{
    if (ctx.alpha_a == 0.0) {
        return 1.0;  // limit of the threshold as the adversary vanishes
    }
    StateDistribution stop = state_distribution(ctx, Strategy::Stop);
    StateDistribution mine = state_distribution(ctx, Strategy::Mine);
    double denom = mine.p0 + mine.p2 + race_bonus(ctx) * mine.p1 - (stop.p0 + stop.p2);
    if (denom <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return stop.p1 / denom;
}

double complete_shutdown_threshold(double alpha_a, double gamma, double alpha_i)
{
    check_unit_interval(alpha_a, "alpha_a", true);
    check_unit_interval(gamma, "gamma", false);
    if (!(alpha_i >= 0.0) || alpha_a + alpha_i > 1.0 + BUDGET_TOLERANCE) {
        throw std::invalid_argument("alpha_i out of range");
    }
    if (alpha_a == 0.0) {
        return 1.0;
    }
    double numerator = alpha_a + alpha_i + alpha_a * alpha_i;
    double denominator =
        alpha_i + alpha_a * alpha_i + (1.0 - gamma) * alpha_a * (1.0 - alpha_a);
    return numerator / denominator;
}

double spv_dominance_gap(const AnalysisContext& ctx)
{
    return utility_mine(ctx) - utility_spv(ctx);
}

double two_coin_w(const AnalysisContext& ctx)
{
    if (ctx.alpha_ba != 0.0) {
        throw std::invalid_argument("two_coin_w requires alpha_ba == 0");
    }
    StateDistribution d = state_distribution(ctx, Strategy::Mine);
    return d.p0 + d.p2 + race_bonus(ctx) * d.p1;
}

double two_coin_r_star(double alpha_a, double gamma)
{
    check_unit_interval(alpha_a, "alpha_a", true);
    check_unit_interval(gamma, "gamma", false);
    return (1.0 - alpha_a) * (alpha_a * (gamma - 2.0) - 1.0) /
           (alpha_a * alpha_a - alpha_a - 1.0);
}

std::pair<double, double> partial_shutdown(double alpha_a, double sigma)
{
    check_unit_interval(alpha_a, "alpha_a", true);
    check_unit_interval(sigma, "sigma", false);
    StateDistribution d = chain_distribution(alpha_a, sigma * (1.0 - alpha_a), 0.0);
    double retained = 1.0 - d.p1;
    return {retained, retained};
}

}  // namespace bdos
