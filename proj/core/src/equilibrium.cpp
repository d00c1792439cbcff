#include "bdos/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bdos/markov.hpp"

namespace bdos {

namespace {

struct Embedded {
    std::vector<std::string> labels;   // canonical order: power desc, label asc
    std::vector<double> power;         // effective absolute power per miner
    double altruist = 0.0;
    double alpha_a = 0.0;
    double gamma = 0.0;
};

Embedded embed(const PowerDistribution& dist, double alpha_a, double gamma)
{
    if (!(alpha_a >= 0.0) || alpha_a >= 1.0) {
        throw std::invalid_argument("alpha_a out of range");
    }
    if (dist.eta < 0.0 || dist.eta > 1.0) {
        throw std::invalid_argument("eta out of range");
    }
    if (dist.rational.empty()) {
        throw std::invalid_argument("no rational miners");
    }
    // Canonical order makes every downstream float sum independent of the
    // caller's list order.
    auto sorted = dist.rational;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    double total_weight = 0.0;
    for (const auto& [label, weight] : sorted) {
        if (!(weight > 0.0)) throw std::invalid_argument("rational power must be positive");
        total_weight += weight;
    }

    Embedded e;
    e.alpha_a = alpha_a;
    e.gamma = gamma;
    e.altruist = dist.eta * (1.0 - alpha_a);
    double scale = (1.0 - dist.eta) * (1.0 - alpha_a) / total_weight;
    for (const auto& [label, weight] : sorted) {
        e.labels.push_back(label);
        e.power.push_back(weight * scale);
    }
    return e;
}

/** Best response of miner i against the given active set: mine iff omega_b
 *  is at least the stop bound with alpha_bstar = altruists + other active
 *  rational power. */
bool mines(const Embedded& e, const std::vector<char>& active, std::size_t i,
           double omega_b)
{
    double bstar = e.altruist;
    for (std::size_t j = 0; j < e.power.size(); ++j) {
        if (j != i && active[j]) bstar += e.power[j];
    }
    AnalysisContext ctx =
        make_threshold_context(e.alpha_a, e.gamma, e.power[i], bstar);
    return omega_b >= stop_bound(ctx);
}

}  // namespace

EquilibriumResult best_response_fixed_point(const PowerDistribution& dist,
                                            double alpha_a, double gamma,
                                            double omega_b)
{
    Embedded e = embed(dist, alpha_a, gamma);
    const std::size_t n = e.power.size();

    std::vector<char> active(n, 1);
    std::vector<char> previous(n, 1);
    int sweeps = 0;
    bool converged = false;

    // Synchronous sweeps; a two-cycle shows up as next == previous.
    for (std::size_t sweep = 0; sweep <= n + 1; ++sweep) {
        std::vector<char> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = mines(e, active, i, omega_b) ? 1 : 0;
        }
        ++sweeps;
        if (next == active) {
            converged = true;
            break;
        }
        if (sweep > 0 && next == previous) {
            break;  // cycle; settle it sequentially below
        }
        previous = active;
        active = next;
    }

    if (!converged) {
        // Restart from everyone active and update one miner at a time,
        // smallest first: the miners most eager to stop settle first, the
        // rest respond to the thinned field. Deterministic and independent
        // of the caller's ordering.
        std::fill(active.begin(), active.end(), 1);
        const std::size_t pass_limit = 50 * n + 10;
        for (std::size_t pass = 0; pass < pass_limit && !converged; ++pass) {
            bool changed = false;
            for (std::size_t k = n; k-- > 0;) {  // ascending power
                char want = mines(e, active, k, omega_b) ? 1 : 0;
                if (want != active[k]) {
                    active[k] = want;
                    changed = true;
                }
            }
            ++sweeps;
            if (!changed) converged = true;
        }
        if (!converged) {
            throw NoConvergence("best-response iteration did not settle");
        }
    }

    // Post-hoc fixed-point check on every result.
    for (std::size_t i = 0; i < n; ++i) {
        if ((mines(e, active, i, omega_b) ? 1 : 0) != active[i]) {
            throw std::logic_error("returned state is not a best-response fixed point");
        }
    }

    EquilibriumResult result;
    result.iterations = sweeps;
    result.active_power = e.altruist;
    for (std::size_t i = 0; i < n; ++i) {
        if (active[i]) {
            result.active_power += e.power[i];
        } else {
            result.stopped.push_back(e.labels[i]);
        }
    }
    AnalysisContext throughput_ctx =
        make_threshold_context(alpha_a, gamma, 0.0, result.active_power);
    result.relative_throughput =
        1.0 - state_distribution(throughput_ctx, Strategy::Stop).p1;
    return result;
}

std::vector<std::pair<double, EquilibriumResult>> throughput_curve(
    const PowerDistribution& dist, double gamma, double omega_b,
    std::span<const double> alpha_a_grid)
{
    std::vector<std::pair<double, EquilibriumResult>> curve;
    curve.reserve(alpha_a_grid.size());
    for (double alpha_a : alpha_a_grid) {
        try {
            curve.emplace_back(alpha_a,
                               best_response_fixed_point(dist, alpha_a, gamma, omega_b));
        } catch (const NoConvergence&) {
            throw NoConvergence("no convergence at alpha_a = " + std::to_string(alpha_a));
        }
    }
    return curve;
}

}  // namespace bdos
