#ifndef BDOS_ECON_HPP
#define BDOS_ECON_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdos {

/** ISO-8601 calendar date; intra-day variation is out of scope. */
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;
    auto operator<=>(const Date&) const = default;
};

Date parse_date(const std::string& iso);
std::string to_string(const Date& date);

/** Dated market snapshot driving the profitability estimate. */
struct MarketRecord {
    Date date;
    double difficulty = 0.0;
    double coin_price = 0.0;    //!< fiat per coin
    double block_reward = 0.0;  //!< coins per block
    std::optional<double> network_hashrate;  //!< hashes per second
};

/** Mining rig catalog entry. Hashrate in hashes per second, power in watts. */
struct HardwareSpec {
    std::string name;
    double hashrate = 0.0;
    double power = 0.0;
    double unit_price = 0.0;
    Date available_from;
};

struct CostModel {
    double electricity_price = 0.0;  //!< fiat per kWh
    double opex_overhead = 1.0;      //!< multiplicative factor >= 1
};

//! Expected hashes to find one block per unit of difficulty (the Bitcoin
//! convention); other coins would supply their own scale.
inline constexpr double DIFFICULTY_SCALE = 4294967296.0;  // 2^32

inline constexpr double JOULES_PER_KWH = 3.6e6;

struct RigUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoRigAvailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** Honest-mining return per unit cost for this rig at this market snapshot.
 *  Independent of miner size. Throws RigUnavailable before available_from. */
double profitability(const MarketRecord& record, const HardwareSpec& rig,
                     const CostModel& cost, double difficulty_scale = DIFFICULTY_SCALE);

/** Network hashrate from the record, falling back to difficulty-implied. */
double network_hashrate(const MarketRecord& record, double lambda,
                        double difficulty_scale = DIFFICULTY_SCALE);

/** Smallest adversary power fraction that makes stopping dominant for the
 *  largest rational miner (share of non-adversarial power, scaled by both
 *  (1 - eta) and the entrant factor (1 - alpha_a)); altruists keep mining.
 *  Near-zero when any positive power suffices; nullopt when no power does.
 *  Requires omega_b > 1. */
std::optional<double> attack_threshold(double omega_b, double gamma,
                                       double largest_rational_share, double eta);

struct ProfitabilityPoint {
    Date date;
    double omega_b = 0.0;
    std::string rig;  //!< most profitable rig available on that date
};

/** Best-rig profitability per dated record. Throws NoRigAvailable when a
 *  record predates every rig. */
std::vector<ProfitabilityPoint> profitability_series(
    const std::vector<MarketRecord>& records, const std::vector<HardwareSpec>& rigs,
    const CostModel& cost);

struct ThresholdPoint {
    Date date;
    double eta = 0.0;
    std::optional<double> alpha_a_min;
};

/** Resource-threshold time series: per date, the best available rig's
 *  profitability inverted into the minimal attacker size, per eta. */
std::vector<ThresholdPoint> threshold_series(const std::vector<MarketRecord>& records,
                                             const std::vector<HardwareSpec>& rigs,
                                             const CostModel& cost, double gamma,
                                             double largest_rational_share,
                                             const std::vector<double>& eta_list);

/** Attacker's daily OPEX in fiat. The attacker enters on top of the observed
 *  network, mines with the given rig, and pays only for the fraction of time
 *  she is active: (1 - p1) with sigma = eta. */
double attack_daily_cost(const MarketRecord& record, const HardwareSpec& rig,
                         const CostModel& cost, double alpha_a, double eta,
                         double lambda);

struct MajorityAttackCost {
    std::int64_t units = 0;
    double capex = 0.0;
    double daily_opex = 0.0;
};

/** Rigs, capital outlay and daily electricity bill needed to match the
 *  observed network hashrate one-for-one. */
MajorityAttackCost majority_attack_cost(double network_hashrate,
                                        const HardwareSpec& rig, const CostModel& cost);

//! market.csv: date,difficulty,coin_price,block_reward[,network_hashrate]
std::vector<MarketRecord> load_market_csv(std::istream& in);
//! hardware.csv: name,hashrate_ths,power_kw,unit_price,available_from
std::vector<HardwareSpec> load_hardware_csv(std::istream& in);

}  // namespace bdos

#endif
