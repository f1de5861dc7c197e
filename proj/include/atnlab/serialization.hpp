#pragma once

#include "json.hpp"

#include "atnlab/atn_solver.hpp"
#include "atnlab/entropy.hpp"
#include "atnlab/furstenberg.hpp"
#include "atnlab/witness.hpp"

// JSON views of the report-like types. Funny words travel in their text
// form, supports as index arrays, symbols 1-based.
namespace atnlab {

void to_json(nlohmann::json& j, const BallEstimate& b);
void to_json(nlohmann::json& j, const EntropyRow& row);
void to_json(nlohmann::json& j, const EntropyProfile& profile);
void to_json(nlohmann::json& j, const TorusPoint& z);
void to_json(nlohmann::json& j, const CharacterSum& s);
void to_json(nlohmann::json& j, const PairCorrelationCell& cell);
void to_json(nlohmann::json& j, const PairCorrelationReport& report);
void to_json(nlohmann::json& j, const CharSumMomentReport& report);
void to_json(nlohmann::json& j, const MarkovTailReport& report);
void to_json(nlohmann::json& j, const Ineq3Report& report);
void to_json(nlohmann::json& j, const Theorem21Instance& instance);
void to_json(nlohmann::json& j, const WitnessReport& report);
void to_json(nlohmann::json& j, const StepFunction& f);
void to_json(nlohmann::json& j, const AtnWitness& witness);

} // namespace atnlab
