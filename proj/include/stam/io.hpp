#pragma once

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <string>

#include "stam/density1d.hpp"
#include "stam/explorer.hpp"
#include "stam/fractional_partition.hpp"
#include "stam/gaussian.hpp"
#include "stam/piecewise.hpp"
#include "stam/set_function.hpp"

namespace stam {

using json = nlohmann::json;

// {"n": 3, "values": {"1": 1.0, ..., "1,2,3": 2.6}}; all 2^n - 1 keys required.
json set_function_to_json(const SetFunction& v);
SetFunction set_function_from_json(const json& j);

// {"n": 3, "weights": {"1,2": "1/2", ...}} — rational strings in exact mode,
// decimal numbers in float mode.
json partition_to_json(const FractionalPartition& beta);
FractionalPartition partition_from_json(const json& j);

// {"d": 2, "matrices": [[[2,0],[0,0.5]], ...]}
json ensemble_to_json(const GaussianEnsemble& ens);
GaussianEnsemble ensemble_from_json(const json& j);

// {"x0": -12.0, "dx": 0.001, "pdf": [...]}
json density_to_json(const GridDensity& f);
GridDensity density_from_json(const json& j);

// {"intervals": [{"left": 2, "width": 0.5, "weight": 0.5}, ...]}
json mixture_to_json(const IntervalMixture& m);
IntervalMixture mixture_from_json(const json& j);

json report_to_json(const PropertyReport& rep);
json stam_point_to_json(const StamPoint& p);

// Serializes with every floating-point number printed to 17 significant
// digits, so written artifacts re-parse to identical doubles.
std::string dump_json(const json& j, int indent = 2);

// Stable content digest for run reports (FNV-1a 64).
std::uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(const std::string& bytes);

}  // namespace stam
