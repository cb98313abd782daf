// JSON report envelope and serializers for the check results. Reports are
// deterministic for a fixed config and seed; timing is opt-in so the default
// output is byte-identical across runs.
#pragma once

#include "psidocalc/calculus.hpp"
#include "psidocalc/oscint.hpp"
#include "psidocalc/weak.hpp"

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

namespace psido {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

json to_json(const ClassEstimate& e);
json to_json(const WeightCheckReport& r);
json to_json(const HypoCertificate& c);
json to_json(const WeakEqReport& r);
json to_json(const OscIntResult& r);
json to_json(const RegularityReport& r);
json to_json(const Parametrix& p);
json to_json(const NetVerdict& v);
json to_json(const ExponentEstimate& e);

// envelope: command echo, config hash, seed, results, optional timing
json report_envelope(const std::string& command, const json& config, uint64_t seed,
                     json results, std::optional<double> wall_ms = {});

}  // namespace psido
