#ifndef BDOS_MARKOV_HPP
#define BDOS_MARKOV_HPP

#include <cstddef>
#include <utility>

#include "bdos/model.hpp"

namespace bdos {

/** Stationary probabilities of the three-state attack chain: attack inactive
 *  (0), header withheld (1), fork race pending (2). */
struct StateDistribution {
    double p0 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
};

/** Everything the closed forms need about one focal rational miner and the
 *  behavior of the others while the attack is active.
 *
 *  alpha_bstar is the total power of OTHER rational miners mining on the
 *  public tip during the attack; alpha_ba the total power of OTHER miners
 *  mining on the adversary's withheld header (zero in the base model).
 *  Neither includes the focal miner: her own power joins one of them
 *  depending on the strategy under evaluation (see effective_power).
 */
struct AnalysisContext {
    double alpha_a = 0.0;
    double gamma = 0.0;
    double lambda = 1.0;
    double block_reward = 1.0;
    double alpha_i = 0.0;
    double cost_i = 1.0;
    double alpha_bstar = 0.0;
    double alpha_ba = 0.0;
    double omega_b = 1.0;  //!< honest-game profitability, lambda*K/cost_i
};

/** Validating constructor; throws std::invalid_argument on any violated
 *  range or power-budget invariant. omega_b is derived, never supplied. */
AnalysisContext make_context(double alpha_a, double gamma, double lambda,
                             double block_reward, double alpha_i, double cost_i,
                             double alpha_bstar, double alpha_ba = 0.0);

/** Context for the focal miner params.miners[miner_index]. */
AnalysisContext make_context(const GameParams& params, std::size_t miner_index,
                             double alpha_bstar, double alpha_ba = 0.0);

/** Shape-only context (unit lambda, reward and cost) for threshold work where
 *  only the power fractions and gamma matter. */
AnalysisContext make_threshold_context(double alpha_a, double gamma,
                                       double alpha_i, double alpha_bstar,
                                       double alpha_ba = 0.0);

/** Two-coin setting: the focal miner may defect from the attacked coin to a
 *  competitor coin with honest profitability omega_b_prime. */
struct TwoCoinContext {
    AnalysisContext base;
    double omega_b_prime = 1.0;
};

TwoCoinContext make_two_coin_context(AnalysisContext base, double omega_b_prime);

//! omega_b_prime / omega_b; the attack drives defection when this ratio
//! exceeds two_coin_w for every achievable alpha_bstar, i.e. two_coin_r_star.
double defection_ratio(const TwoCoinContext& ctx);
bool attack_drives_defection(const TwoCoinContext& ctx);

/** Power mining on the public tip / on the withheld header in state 1, as a
 *  function of the focal miner's strategy. */
std::pair<double, double> effective_power(const AnalysisContext& ctx, Strategy s);

/** Stationary distribution of the attack chain under the given strategy.
 *  Degenerate case alpha_a = 0: the chain never leaves state 0. */
StateDistribution state_distribution(const AnalysisContext& ctx, Strategy s);

//! Expected utility (currency per second, normalized by power) of playing
//! stop / mine / spv-mine while the attack is active.
double utility_stop(const AnalysisContext& ctx);
double utility_mine(const AnalysisContext& ctx);
double utility_spv(const AnalysisContext& ctx);

/** Utility of an arbitrary per-state action profile. The chain fixes other
 *  miners' behavior as in the strategy chains (everybody mines in states 0
 *  and 2, alpha_bstar of them in state 1) and varies only the focal miner's
 *  actions. Requires alpha_ba == 0. */
double utility_general(const AnalysisContext& ctx, ActionProfile profile);

/** (utility_stop - utility_mine) / cost_i. Positive means stopping pays. */
double utility_difference(const AnalysisContext& ctx);

/** The bound on omega_b below which stop beats mine given the other miners'
 *  behavior in ctx. Returns +infinity when the attack succeeds at any
 *  profitability (non-positive denominator). At alpha_a == 0 the bound
 *  degenerates to 1: mining pays whenever it pays in the honest game. */
double stop_bound(const AnalysisContext& ctx);

/** Tight profitability threshold for a complete shutdown (all other rational
 *  miners already stopped, no spv mining). */
double complete_shutdown_threshold(double alpha_a, double gamma, double alpha_i);

/** utility_mine - utility_spv; strictly positive whenever alpha_a and
 *  alpha_i are both positive, so spv mining is strictly dominated. */
double spv_dominance_gap(const AnalysisContext& ctx);

/** Retained utility fraction of mining through the attack; the defection
 *  ratio omega'/omega must exceed it for the miner to leave the coin.
 *  Requires alpha_ba == 0. */
double two_coin_w(const AnalysisContext& ctx);

/** Worst-case (over alpha_bstar) defection threshold; independent of the
 *  focal miner's power. */
double two_coin_r_star(double alpha_a, double gamma);

/** Relative throughput and relative attacker cost when a portion sigma of
 *  non-adversarial power keeps mining through the attack. Both equal 1 - p1
 *  of the stop chain with alpha_bstar = sigma * (1 - alpha_a). */
std::pair<double, double> partial_shutdown(double alpha_a, double sigma);

}  // namespace bdos

#endif
