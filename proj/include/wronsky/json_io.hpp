#pragma once

#include "json.hpp"
#include "wronsky/darboux.hpp"
#include "wronsky/invariants.hpp"
#include "wronsky/verify.hpp"

namespace wronsky {

using Json = nlohmann::ordered_json;

/// {"terms":[{"dx":i,"dy":j,"coeff":"<canonical string>"}]}
Json to_json(const LPDO& op);
/// The bare terms array of the above.
Json terms_json(const LPDO& op);

Json to_json(const HyperbolicL& l);
Json to_json(const FirstOrderM& m);
/// {"L":{...},"M":[terms],"N":[terms],"L1":{...},"residuals":["0","0"]}
Json to_json(const DarbouxWitness& w);
Json to_json(const GaugeInvariants& g);
Json to_json(const EvolutionInvariants& e);
Json to_json(const VerifyReport& r);

}  // namespace wronsky
