#pragma once

#include <json.hpp>

#include "fsens/input_model.hpp"

namespace fsens {

// Input-law JSON schema shared by run configs and surrogate files:
// either an array of marginal objects
//   {"kind":"gaussian","mean":..,"std":..}
//   {"kind":"uniform","lower":..,"upper":..}
//   {"kind":"lognormal", <"log_mean"/"log_std" | "mean"/"std" |
//                         "mean"/"error_factor">}
// or {"kind":"correlated_gaussian","mean":[..],"cov":[[..]]}.
nlohmann::json input_model_to_json(const InputModel& model);
InputModel input_model_from_json(const nlohmann::json& spec);
MarginalDistribution marginal_from_json(const nlohmann::json& spec);

}  // namespace fsens
