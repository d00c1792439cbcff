#include "bdos/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "bdos/csv.hpp"
#include "bdos/ledger.hpp"

namespace bdos {

namespace {

enum class Phase { Inactive = 0, Withheld = 1, Race = 2 };

/** Uniform double in [0, 1) from the top 53 bits of the engine output;
 *  identical on every platform for a given seed. */
double uniform01(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double exponential(std::mt19937_64& rng, double rate)
{
    return -std::log1p(-uniform01(rng)) / rate;
}

struct ArenaBlock {
    BlockId parent = -1;  //!< -1 for genesis
    int owner = NOBODY_ID;
    int height = 0;
    bool header_only = false;
};

}  // namespace

void validate_config(const SimConfig& config)
{
    if (auto err = validate(config.params)) {
        throw std::invalid_argument(std::string("invalid params: ") +
                                    std::string(to_string(*err)));
    }
    if (config.strategy_table.size() != config.params.miners.size()) {
        throw std::invalid_argument("strategy_table size must match the miner list");
    }
    if (config.rounds <= 0) {
        throw std::invalid_argument("rounds must be positive");
    }
    for (Strategy s : config.strategy_table) {
        if (s == Strategy::Spv && !config.spv_extension) {
            throw std::invalid_argument("spv strategy requires spv_extension");
        }
    }
}

SimReport run(const SimConfig& config)
{
    validate_config(config);
    const GameParams& params = config.params;
    const std::size_t n = params.miners.size();
    const double lambda = params.lambda;

    std::mt19937_64 rng(config.seed);

    // Global block arena; indices are block ids. All full blocks are known to
    // everyone (the scheduler broadcasts them), so per-miner state reduces to
    // the main-chain tip each miner would mine on. Tips diverge only during a
    // race, where delivery order decides each miner's first-seen branch.
    std::vector<ArenaBlock> arena;
    arena.reserve(static_cast<std::size_t>(config.rounds) + 1);
    arena.push_back(ArenaBlock{});  // genesis, height 0

    std::vector<BlockId> tip(n, 0);
    BlockId adversary_tip = 0;
    auto tip_height = [&](BlockId id) { return arena[id].height; };

    Phase phase = Phase::Inactive;
    BlockId withheld = -1;  // valid while phase == Withheld

    SimReport report;
    report.per_miner.resize(n);
    report.seed = config.seed;
    std::array<double, 3> occupancy_time{0.0, 0.0, 0.0};
    double elapsed = 0.0;

    std::vector<double> weights(n + 1, 0.0);  // index 0 = adversary
    for (std::int64_t round = 0; round < config.rounds; ++round) {
        // Activity and mining parent per participant. The strategy table
        // governs only the withheld-header state; everyone mines otherwise.
        bool adversary_active = phase != Phase::Withheld;
        weights[0] = adversary_active ? params.alpha_a : 0.0;
        double total = weights[0];
        int last_active = weights[0] > 0.0 ? ADVERSARY_ID : NOBODY_ID;
        for (std::size_t i = 0; i < n; ++i) {
            bool active = phase != Phase::Withheld ||
                          config.strategy_table[i] != Strategy::Stop;
            weights[i + 1] = active ? params.miners[i].alpha : 0.0;
            total += weights[i + 1];
            if (weights[i + 1] > 0.0) last_active = static_cast<int>(i);
        }
        if (total <= 0.0) {
            // Complete standstill: nothing can ever change anyone's decision
            // again, so the withheld state absorbs the rest of model time.
            report.deadlocked = true;
            break;
        }

        double duration = exponential(rng, lambda * total);
        elapsed += duration;
        occupancy_time[static_cast<int>(phase)] += duration;
        if (adversary_active) {
            report.adversary.active_time += duration;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (weights[i + 1] > 0.0) {
                report.per_miner[i].cost +=
                    duration * params.miners[i].alpha * params.miners[i].cost;
            }
        }

        // Winner, proportional to active power. Zero-weight participants can
        // never be selected (their cumulative interval is empty); the
        // fallback covers u rounding up to exactly total.
        double u = uniform01(rng) * total;
        double cumulative = 0.0;
        int winner = last_active;
        for (std::size_t k = 0; k <= n; ++k) {
            cumulative += weights[k];
            if (cumulative > u) {
                winner = static_cast<int>(k) - 1;  // -1 = adversary
                break;
            }
        }

        BlockId parent;
        if (winner == ADVERSARY_ID) {
            parent = adversary_tip;
        } else if (phase == Phase::Withheld &&
                   config.strategy_table[winner] == Strategy::Spv) {
            parent = withheld;
        } else {
            parent = tip[winner];
        }
        BlockId id = static_cast<BlockId>(arena.size());
        arena.push_back(ArenaBlock{parent, winner, arena[parent].height + 1, false});
        if (winner == ADVERSARY_ID) {
            ++report.adversary.blocks_mined;
        } else {
            ++report.per_miner[winner].blocks_mined;
        }

        auto broadcast = [&](BlockId block) {
            for (std::size_t i = 0; i < n; ++i) {
                if (arena[block].height > tip_height(tip[i])) tip[i] = block;
            }
            if (arena[block].height > tip_height(adversary_tip)) adversary_tip = block;
        };

        if (winner == ADVERSARY_ID) {
            if (phase == Phase::Inactive) {
                // Withhold the block, publish only its header.
                arena[id].header_only = true;
                withheld = id;
                phase = Phase::Withheld;
            } else {
                // Race round: publishing in full makes her branch strictly
                // longest for everyone and resolves the race.
                broadcast(id);
                phase = Phase::Inactive;
            }
        } else if (phase == Phase::Withheld) {
            if (config.strategy_table[winner] == Strategy::Spv) {
                // A full block now extends the withheld header: the adversary
                // abandons it and resumes on the public tip. The header's data
                // is never published, so neither block can ever join a main
                // chain; tips are unchanged.
                withheld = -1;
                phase = Phase::Inactive;
            } else {
                // A block at the withheld height: the adversary releases the
                // full withheld block and a race begins. Delivery order
                // decides each miner's first-seen branch; nothing else needs
                // the pair once the tips are set.
                arena[withheld].header_only = false;
                BlockId race_adv = withheld;
                BlockId race_rat = id;
                withheld = -1;
                phase = Phase::Race;

                adversary_tip = race_adv;  // adversary-first for the adversary
                double alpha_w = params.miners[winner].alpha;
                double others = 1.0 - params.alpha_a - alpha_w;
                double rushed = params.gamma * (1.0 - params.alpha_a);
                // The winner sees her own block first. When she holds more
                // power than the non-rushed share, the others alone cannot
                // carry the expected gamma*(1-alpha_a) adoption of the
                // adversary's block, so the excess rushes the winner herself;
                // otherwise the expected race split matches the rushing
                // factor exactly.
                double q;
                double winner_q = 0.0;
                if (rushed > others) {
                    q = 1.0;
                    winner_q = (rushed - others) / alpha_w;
                    ++report.clamped_delivery_rounds;
                } else {
                    q = others > 0.0 ? rushed / others : 0.0;
                }
                tip[winner] = uniform01(rng) < winner_q ? race_adv : race_rat;
                for (std::size_t i = 0; i < n; ++i) {
                    if (static_cast<int>(i) == winner) continue;
                    tip[i] = uniform01(rng) < q ? race_adv : race_rat;
                }
            }
        } else {
            // Plain publication; in a race round the new block also makes its
            // parent branch strictly longest and resolves the race.
            broadcast(id);
            phase = Phase::Inactive;
        }
        ++report.rounds_executed;
    }

    // Final accounting. Every view agrees on the main chain except during a
    // pending race, which is resolved in favor of the adversary's first-seen
    // branch (her own); walking her tip covers both cases.
    for (BlockId b = adversary_tip; arena[b].parent >= 0; b = arena[b].parent) {
        int owner = arena[b].owner;
        if (owner == ADVERSARY_ID) {
            ++report.adversary.blocks_on_main_chain;
        } else {
            ++report.per_miner[owner].blocks_on_main_chain;
        }
    }
    report.adversary.blocks_orphaned =
        report.adversary.blocks_mined - report.adversary.blocks_on_main_chain;

    if (report.deadlocked) {
        report.elapsed_model_time = std::numeric_limits<double>::infinity();
        report.state_occupancy = {0.0, 1.0, 0.0};
    } else {
        report.elapsed_model_time = elapsed;
        for (int s = 0; s < 3; ++s) {
            report.state_occupancy[s] = elapsed > 0.0 ? occupancy_time[s] / elapsed : 0.0;
        }
    }
    report.relative_throughput =
        static_cast<double>(arena[adversary_tip].height) /
        (report.elapsed_model_time * lambda);

    for (std::size_t i = 0; i < n; ++i) {
        MinerStats& stats = report.per_miner[i];
        stats.blocks_orphaned = stats.blocks_mined - stats.blocks_on_main_chain;
        stats.revenue = params.block_reward * static_cast<double>(stats.blocks_on_main_chain);
        stats.utility_estimate = (stats.revenue - stats.cost) /
                                 (report.elapsed_model_time * params.miners[i].alpha);
    }
    return report;
}

std::vector<double> estimate_utilities(const SimReport& report, const GameParams& params)
{
    if (report.per_miner.size() != params.miners.size()) {
        throw std::invalid_argument("report does not match the miner list");
    }
    std::vector<double> utilities(report.per_miner.size());
    for (std::size_t i = 0; i < utilities.size(); ++i) {
        const MinerStats& stats = report.per_miner[i];
        utilities[i] = (stats.revenue - stats.cost) /
                       (report.elapsed_model_time * params.miners[i].alpha);
    }
    return utilities;
}

void write_report_csv(const SimReport& report, const SimConfig& config, std::ostream& out)
{
    out << "row,label,alpha,strategy,revenue,cost,blocks_mined,"
           "blocks_on_main_chain,blocks_orphaned,utility_estimate,"
           "occupancy_inactive,occupancy_withheld,occupancy_race,"
           "relative_throughput,elapsed_model_time,adversary_blocks_mined,"
           "adversary_blocks_on_main_chain,adversary_blocks_orphaned,"
           "adversary_active_fraction,rounds_executed,deadlocked,seed\n";
    for (std::size_t i = 0; i < report.per_miner.size(); ++i) {
        const MinerStats& m = report.per_miner[i];
        out << "miner,miner_" << i << ',' << csv::format(config.params.miners[i].alpha)
            << ',' << to_string(config.strategy_table[i]) << ','
            << csv::format(m.revenue) << ',' << csv::format(m.cost) << ','
            << m.blocks_mined << ',' << m.blocks_on_main_chain << ','
            << m.blocks_orphaned << ',' << csv::format(m.utility_estimate)
            << ",,,,,,,,,,,,\n";
    }
    double active_fraction = report.deadlocked
                                 ? 0.0
                                 : report.adversary.active_time / report.elapsed_model_time;
    out << "summary,summary," << csv::format(config.params.alpha_a) << ",,,,,,,,"
        << csv::format(report.state_occupancy[0]) << ','
        << csv::format(report.state_occupancy[1]) << ','
        << csv::format(report.state_occupancy[2]) << ','
        << csv::format(report.relative_throughput) << ','
        << csv::format(report.elapsed_model_time) << ','
        << report.adversary.blocks_mined << ','
        << report.adversary.blocks_on_main_chain << ','
        << report.adversary.blocks_orphaned << ','
        << csv::format(active_fraction) << ','
        << report.rounds_executed << ','
        << (report.deadlocked ? 1 : 0) << ','
        << report.seed << '\n';
}

}  // namespace bdos
