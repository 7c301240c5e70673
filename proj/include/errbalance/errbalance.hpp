#pragma once

#include "errbalance/composite.hpp"
#include "errbalance/cost_models.hpp"
#include "errbalance/errors.hpp"
#include "errbalance/historical_control.hpp"
#include "errbalance/mc_oracle.hpp"
#include "errbalance/numerics.hpp"
#include "errbalance/simple_bayes.hpp"
#include "errbalance/simple_freq.hpp"
#include "errbalance/types.hpp"

namespace errbalance {
inline constexpr const char* kVersion = "0.1.0";
}
