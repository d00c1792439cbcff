#ifndef BDOS_MODEL_HPP
#define BDOS_MODEL_HPP

#include <optional>
#include <string_view>
#include <vector>

namespace bdos {

//! Mining power of all participants is normalized to 1; floating-point inputs
//! are accepted as normalized when they sum to 1 within this tolerance.
inline constexpr double POWER_TOLERANCE = 1e-9;

//! Owner id of the adversary in block records. Rational miners use their
//! index into GameParams::miners.
inline constexpr int ADVERSARY_ID = -1;

//! Owner id of the genesis block, which belongs to nobody.
inline constexpr int NOBODY_ID = -2;

/** One rational miner: her power fraction and normalized cost per second. */
struct MinerSpec {
    double alpha = 0.0;
    double cost = 0.0;
};

/** Full parameterization of one attack scenario. */
struct GameParams {
    double alpha_a = 0.0;       //!< adversary power fraction, in [0, 1)
    double gamma = 0.0;         //!< rushing factor, in [0, 1]
    double lambda = 0.0;        //!< round rate constant, rounds per second
    double block_reward = 0.0;  //!< real value of one block reward (K)
    std::vector<MinerSpec> miners;
};

enum class ParamError {
    PowerNotNormalized,
    NonPositiveParameter,
    GammaOutOfRange,
};

std::string_view to_string(ParamError err);

/** Returns the first violated invariant, or nullopt when params are valid. */
std::optional<ParamError> validate(const GameParams& params);

/** The strategies available to a rational miner; they differ only by her
 *  action while the adversary withholds a block. Spv is legal only in
 *  analyses that enable the petty-compliant extension. */
enum class Strategy { Mine, Stop, Spv };

std::string_view to_string(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view name);

enum class Action { Mine, Stop };

/** Per-state action table for the generalized-strategy utility. */
struct ActionProfile {
    Action in_state0 = Action::Mine;
    Action in_state1 = Action::Mine;
    Action in_state2 = Action::Mine;
};

}  // namespace bdos

#endif
