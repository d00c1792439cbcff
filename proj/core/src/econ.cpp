#include "bdos/econ.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>

#include "bdos/csv.hpp"
#include "bdos/markov.hpp"

namespace bdos {

namespace {

constexpr double HOURS_PER_DAY = 24.0;
constexpr double WATTS_PER_KW = 1000.0;

/** Stop bound for the largest rational miner when the adversary holds
 *  alpha_a: her effective power is share*(1-eta)*(1-alpha_a) and the
 *  altruistic power eta*(1-alpha_a) keeps mining. */
double bound_at(double alpha_a, double gamma, double share, double eta)
{
    double alpha_i = share * (1.0 - eta) * (1.0 - alpha_a);
    double bstar = eta * (1.0 - alpha_a);
    return stop_bound(make_threshold_context(alpha_a, gamma, alpha_i, bstar));
}

double daily_opex_for_kw(double kw, const CostModel& cost)
{
    return kw * HOURS_PER_DAY * cost.electricity_price * cost.opex_overhead;
}

}  // namespace

Date parse_date(const std::string& iso)
{
    Date d;
    char extra = 0;
    if (std::sscanf(iso.c_str(), "%d-%d-%d%c", &d.year, &d.month, &d.day, &extra) != 3 ||
        d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) {
        throw std::invalid_argument("bad ISO date: " + iso);
    }
    return d;
}

std::string to_string(const Date& date)
{
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", date.year, date.month, date.day);
    return buf;
}

double profitability(const MarketRecord& record, const HardwareSpec& rig,
                     const CostModel& cost, double difficulty_scale)
{
    if (record.date < rig.available_from) {
        throw RigUnavailable(rig.name + " not available on " + to_string(record.date));
    }
    double hashes_per_block = record.difficulty * difficulty_scale;
    double joules_per_block = hashes_per_block / rig.hashrate * rig.power;
    double cost_per_block = joules_per_block / JOULES_PER_KWH *
                            cost.electricity_price * cost.opex_overhead;
    double revenue_per_block = record.block_reward * record.coin_price;
    return revenue_per_block / cost_per_block;
}

double network_hashrate(const MarketRecord& record, double lambda,
                        double difficulty_scale)
{
    if (record.network_hashrate) {
        return *record.network_hashrate;
    }
    return record.difficulty * difficulty_scale * lambda;
}

std::optional<double> attack_threshold(double omega_b, double gamma,
                                       double largest_rational_share, double eta)
{
    if (!(omega_b > 1.0)) {
        throw std::invalid_argument("attack_threshold requires omega_b > 1");
    }
    if (largest_rational_share <= 0.0 || largest_rational_share > 1.0 ||
        eta < 0.0 || eta > 1.0) {
        throw std::invalid_argument("share or eta out of range");
    }

    // The attack succeeds at alpha_a iff omega_b < bound(alpha_a).
    auto succeeds = [&](double a) {
        return omega_b < bound_at(a, gamma, largest_rational_share, eta);
    };

    constexpr double LO = 1e-9;
    constexpr double HI = 1.0 - 1e-9;
    if (succeeds(LO)) {
        return 0.0;  // any positive power suffices
    }
    if (!succeeds(HI)) {
        return std::nullopt;  // no power level makes stopping dominant
    }

    // The bound is monotone in alpha_a across the realistic range; guard it
    // with a coarse scan and fall back to a fine scan for the smallest
    // crossing if it ever is not.
    int crossings = 0;
    bool prev = false;
    for (int i = 0; i <= 100; ++i) {
        bool s = succeeds(LO + (HI - LO) * i / 100.0);
        if (i > 0 && s != prev) ++crossings;
        prev = s;
    }
    if (crossings > 1) {
        std::fprintf(stderr,
                     "bdos: non-monotone attack threshold (omega_b=%g); using grid scan\n",
                     omega_b);
        for (double a = 1e-4; a < 1.0; a += 1e-4) {
            if (succeeds(a)) return a;
        }
        return std::nullopt;
    }

    double lo = LO, hi = HI;
    while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        (succeeds(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<ProfitabilityPoint> profitability_series(
    const std::vector<MarketRecord>& records, const std::vector<HardwareSpec>& rigs,
    const CostModel& cost)
{
    if (records.empty() || rigs.empty()) {
        throw std::invalid_argument("empty market or hardware input");
    }
    std::vector<ProfitabilityPoint> series;
    series.reserve(records.size());
    for (const MarketRecord& record : records) {
        const HardwareSpec* best = nullptr;
        double best_omega = -std::numeric_limits<double>::infinity();
        for (const HardwareSpec& rig : rigs) {
            if (record.date < rig.available_from) continue;
            double omega = profitability(record, rig, cost);
            if (omega > best_omega) {
                best_omega = omega;
                best = &rig;
            }
        }
        if (!best) {
            throw NoRigAvailable("no rig available on " + to_string(record.date));
        }
        series.push_back({record.date, best_omega, best->name});
    }
    return series;
}

std::vector<ThresholdPoint> threshold_series(const std::vector<MarketRecord>& records,
                                             const std::vector<HardwareSpec>& rigs,
                                             const CostModel& cost, double gamma,
                                             double largest_rational_share,
                                             const std::vector<double>& eta_list)
{
    std::vector<ThresholdPoint> table;
    for (const ProfitabilityPoint& point : profitability_series(records, rigs, cost)) {
        for (double eta : eta_list) {
            ThresholdPoint row;
            row.date = point.date;
            row.eta = eta;
            if (point.omega_b > 1.0) {
                row.alpha_a_min =
                    attack_threshold(point.omega_b, gamma, largest_rational_share, eta);
            } else {
                row.alpha_a_min = 0.0;  // mining already unprofitable
            }
            table.push_back(row);
        }
    }
    return table;
}

double attack_daily_cost(const MarketRecord& record, const HardwareSpec& rig,
                         const CostModel& cost, double alpha_a, double eta,
                         double lambda)
{
    if (alpha_a < 0.0 || alpha_a >= 1.0) {
        throw std::invalid_argument("alpha_a out of range");
    }
    if (alpha_a == 0.0) {
        return 0.0;
    }
    // Entrant normalization: the attacker's hashes are additive on top of
    // the observed network, so her rate is observed * alpha_a / (1-alpha_a).
    double attacker_hashrate =
        network_hashrate(record, lambda) * alpha_a / (1.0 - alpha_a);
    double kw = attacker_hashrate / rig.hashrate * rig.power / WATTS_PER_KW;
    double active_fraction = partial_shutdown(alpha_a, eta).second;
    return daily_opex_for_kw(kw, cost) * active_fraction;
}

MajorityAttackCost majority_attack_cost(double network_hashrate,
                                        const HardwareSpec& rig, const CostModel& cost)
{
    if (!(network_hashrate > 0.0) || !(rig.hashrate > 0.0)) {
        throw std::invalid_argument("hashrates must be positive");
    }
    MajorityAttackCost result;
    result.units = static_cast<std::int64_t>(std::ceil(network_hashrate / rig.hashrate));
    result.capex = static_cast<double>(result.units) * rig.unit_price;
    double kw = static_cast<double>(result.units) * rig.power / WATTS_PER_KW;
    result.daily_opex = daily_opex_for_kw(kw, cost);
    return result;
}

std::vector<MarketRecord> load_market_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("empty market csv");
    }
    auto header = csv::split_line(line);
    bool with_hashrate = header.size() == 5 && header[4] == "network_hashrate";
    if (!(header.size() == 4 || with_hashrate) || header[0] != "date" ||
        header[1] != "difficulty" || header[2] != "coin_price" ||
        header[3] != "block_reward") {
        throw std::invalid_argument("bad market csv header: " + line);
    }
    std::vector<MarketRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = csv::split_line(line);
        if (fields.size() != header.size()) {
            throw std::invalid_argument("bad market csv row: " + line);
        }
        MarketRecord r;
        r.date = parse_date(fields[0]);
        r.difficulty = csv::parse_double(fields[1]);
        r.coin_price = csv::parse_double(fields[2]);
        r.block_reward = csv::parse_double(fields[3]);
        if (with_hashrate && !fields[4].empty()) {
            r.network_hashrate = csv::parse_double(fields[4]);
        }
        if (!(r.difficulty > 0.0) || !(r.coin_price > 0.0) || !(r.block_reward > 0.0)) {
            throw std::invalid_argument("non-positive market value: " + line);
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<HardwareSpec> load_hardware_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("empty hardware csv");
    }
    if (csv::split_line(line) !=
        std::vector<std::string>{"name", "hashrate_ths", "power_kw", "unit_price",
                                 "available_from"}) {
        throw std::invalid_argument("bad hardware csv header: " + line);
    }
    std::vector<HardwareSpec> rigs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = csv::split_line(line);
        if (fields.size() != 5) {
            throw std::invalid_argument("bad hardware csv row: " + line);
        }
        HardwareSpec rig;
        rig.name = fields[0];
        rig.hashrate = csv::parse_double(fields[1]) * 1e12;       // TH/s -> H/s
        rig.power = csv::parse_double(fields[2]) * WATTS_PER_KW;  // kW -> W
        rig.unit_price = csv::parse_double(fields[3]);
        rig.available_from = parse_date(fields[4]);
        if (!(rig.hashrate > 0.0) || !(rig.power > 0.0)) {
            throw std::invalid_argument("non-positive hardware value: " + line);
        }
        rigs.push_back(std::move(rig));
    }
    return rigs;
}

}  // namespace bdos
