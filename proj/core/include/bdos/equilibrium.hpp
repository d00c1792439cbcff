#ifndef BDOS_EQUILIBRIUM_HPP
#define BDOS_EQUILIBRIUM_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bdos {

/** Non-adversarial mining power: named rational miners (relative weights,
 *  normalized by the embedding) plus the altruistic fraction eta of
 *  non-adversarial power that mines no matter what. */
struct PowerDistribution {
    std::vector<std::pair<std::string, double>> rational;
    double eta = 0.0;
};

struct EquilibriumResult {
    std::vector<std::string> stopped;  //!< labels of miners choosing stop
    double active_power = 0.0;   //!< altruists + active rationals, absolute
    double relative_throughput = 0.0;  //!< 1 - p1 at the fixed point
    int iterations = 0;          //!< sweeps until the fixed point
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** Iterated best response over the rational miners, starting from everyone
 *  active. The adversary enters on top of the observed distribution: each
 *  rational power becomes share * (1 - eta) * (1 - alpha_a) and the
 *  altruistic block eta * (1 - alpha_a). A miner mines iff omega_b is at
 *  least her stop bound given the other active miners (ties mine).
 *
 *  Sweeps are synchronous, so the result is independent of the input order.
 *  When synchronous sweeps cycle (possible: the bound rises with the others'
 *  active power, so best responses are strategic substitutes), the search
 *  restarts from everyone active and updates miners one at a time in
 *  ascending power order, which also never depends on the input order.
 *  Every returned result is re-verified to be a fixed point. */
EquilibriumResult best_response_fixed_point(const PowerDistribution& dist,
                                            double alpha_a, double gamma,
                                            double omega_b);

/** best_response_fixed_point mapped across an alpha_a grid; one throughput
 *  curve for a fixed (omega_b, eta). */
std::vector<std::pair<double, EquilibriumResult>> throughput_curve(
    const PowerDistribution& dist, double gamma, double omega_b,
    std::span<const double> alpha_a_grid);

}  // namespace bdos

#endif
