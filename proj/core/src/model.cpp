#include "bdos/model.hpp"

#include <cmath>

namespace bdos {

std::string_view to_string(ParamError err)
{
    switch (err) {
    case ParamError::PowerNotNormalized: return "PowerNotNormalized";
    case ParamError::NonPositiveParameter: return "NonPositiveParameter";
    case ParamError::GammaOutOfRange: return "GammaOutOfRange";
    }
    return "UnknownError";
}

std::string_view to_string(Strategy s)
{
    switch (s) {
    case Strategy::Mine: return "mine";
    case Strategy::Stop: return "stop";
    case Strategy::Spv: return "spv";
    }
    return "unknown";
}

std::optional<Strategy> strategy_from_string(std::string_view name)
{
    if (name == "mine") return Strategy::Mine;
    if (name == "stop") return Strategy::Stop;
    if (name == "spv") return Strategy::Spv;
    return std::nullopt;
}

std::optional<ParamError> validate(const GameParams& params)
{
    if (params.gamma < 0.0 || params.gamma > 1.0 || !std::isfinite(params.gamma)) {
        return ParamError::GammaOutOfRange;
    }
    if (!(params.alpha_a >= 0.0) || params.alpha_a >= 1.0) {
        return ParamError::NonPositiveParameter;
    }
    if (!(params.lambda > 0.0) || !(params.block_reward > 0.0)) {
        return ParamError::NonPositiveParameter;
    }
    double total = params.alpha_a;
    for (const MinerSpec& m : params.miners) {
        if (!(m.alpha > 0.0) || !(m.cost > 0.0)) {
            return ParamError::NonPositiveParameter;
        }
        total += m.alpha;
    }
    if (std::abs(total - 1.0) > POWER_TOLERANCE) {
        return ParamError::PowerNotNormalized;
    }
    return std::nullopt;
}

}  // namespace bdos
