#ifndef BDOS_TOOLS_SCENARIO_HPP
#define BDOS_TOOLS_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "bdos/equilibrium.hpp"
#include "bdos/sim.hpp"

namespace bdos::tools {

/** Declarative inputs for `bdos simulate`. */
struct SimulateScenario {
    SimConfig config;
    std::optional<std::string> out;
};

/** Declarative inputs for `bdos equilibrium`. */
struct EquilibriumScenario {
    PowerDistribution miners;  //!< eta filled per eta_list entry
    double gamma = 0.5;
    std::vector<double> omega_b;
    std::vector<double> eta;
    std::vector<double> alpha_a;
    std::optional<std::string> out;
};

/** Declarative inputs for `bdos empirical`. */
struct EmpiricalScenario {
    std::string market_path;
    std::string hardware_path;
    double electricity_price = 0.0;
    double opex_overhead = 1.0;
    double gamma = 0.5;
    double largest_rational_share = 0.0;
    std::vector<double> eta;
    double lambda = 1.0 / 600.0;
    std::optional<std::string> out_prefix;
};

//! Parsers reject unknown keys and report missing required ones.
SimulateScenario load_simulate_scenario(const std::string& path);
EquilibriumScenario load_equilibrium_scenario(const std::string& path);
EmpiricalScenario load_empirical_scenario(const std::string& path);

}  // namespace bdos::tools

#endif
