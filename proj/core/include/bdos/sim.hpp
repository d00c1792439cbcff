#ifndef BDOS_SIM_HPP
#define BDOS_SIM_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bdos/model.hpp"

namespace bdos {

/** One Monte Carlo run: the scenario, each rational miner's fixed strategy
 *  for the withheld-header state, and the number of scheduler rounds. */
struct SimConfig {
    GameParams params;
    std::vector<Strategy> strategy_table;  //!< one entry per rational miner
    bool spv_extension = false;  //!< adversary abandons headers extended by spv blocks
    std::int64_t rounds = 0;
    std::uint64_t seed = 0;
};

/** Throws std::invalid_argument when the config violates any invariant
 *  (bad params, table size mismatch, spv strategy without the extension). */
void validate_config(const SimConfig& config);

struct MinerStats {
    double revenue = 0.0;  //!< block_reward x blocks_on_main_chain at run end
    double cost = 0.0;     //!< integral of alpha_i * cost_i over active time
    std::int64_t blocks_mined = 0;
    std::int64_t blocks_on_main_chain = 0;
    std::int64_t blocks_orphaned = 0;
    double utility_estimate = 0.0;  //!< (revenue - cost) / (elapsed * alpha_i)
};

struct AdversaryStats {
    std::int64_t blocks_mined = 0;
    std::int64_t blocks_on_main_chain = 0;
    std::int64_t blocks_orphaned = 0;
    double active_time = 0.0;  //!< seconds spent mining; active_time/elapsed is
                               //!< the attacker's relative cost
};

struct SimReport {
    std::vector<MinerStats> per_miner;  //!< same order as SimConfig miners
    AdversaryStats adversary;
    //! Fraction of model time with the attack inactive / header withheld /
    //! race pending. Sums to 1.
    std::array<double, 3> state_occupancy{1.0, 0.0, 0.0};
    double relative_throughput = 0.0;  //!< main-chain blocks per second / lambda
    double elapsed_model_time = 0.0;   //!< +infinity when the run deadlocked
    bool deadlocked = false;  //!< every participant stopped; state 1 absorbs
    std::int64_t rounds_executed = 0;
    std::int64_t clamped_delivery_rounds = 0;  //!< races whose delivery
                                               //!< probability exceeded 1
    std::uint64_t seed = 0;
};

/** Runs the scheduler loop for config.rounds rounds (or until a complete
 *  standstill). Deterministic for a fixed config and seed.
 *
 *  Randomness comes from a single mt19937_64 stream seeded with config.seed.
 *  Draw order within a round is fixed: (1) round duration, (2) winner,
 *  (3) in race-starting rounds only, one delivery-order draw for the race
 *  winner and then one per other rational miner in index order. Uniform
 *  doubles are built from the top 53 bits of the engine output, so runs are
 *  reproducible across platforms and standard libraries. */
SimReport run(const SimConfig& config);

/** Per-miner utility estimates, (revenue - cost) / (elapsed * alpha_i). */
std::vector<double> estimate_utilities(const SimReport& report, const GameParams& params);

/** Flat CSV: one row per rational miner, then one summary row. */
void write_report_csv(const SimReport& report, const SimConfig& config, std::ostream& out);

}  // namespace bdos

#endif
