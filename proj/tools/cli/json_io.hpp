#pragma once

#include "ef1po/instance.hpp"
#include "ef1po/solve.hpp"

#include <json.hpp>

#include <string>

namespace ef1po::cli {

using Json = nlohmann::ordered_json;

/// Integers that fit in 64 bits become JSON numbers; everything else a
/// "p/q" string.
Json rat_to_json(const Rat& value);
/// Accepts JSON integers and "p" / "p/q" strings; floats are rejected.
Rat rat_from_json(const Json& value);

/// Parses an instance object {n, m, costs, entitlements?}. Negative costs
/// are always rejected, zero costs unless `allow_zero` is set.
Instance parse_instance(const Json& doc, bool allow_zero = false);
Json instance_to_json(const Instance& inst);

/// Reads "bundles" (1-based chore indices) into an allocation.
Allocation parse_bundles(const Json& doc, std::size_t agents, std::size_t chores);
Json bundles_to_json(const Allocation& x);

Json witness_to_json(const Witness& witness);
Json report_to_json(const CheckReport& report);

Json certificate_to_json(const Certificate& cert);
Json result_to_json(const SolveResult& result);

Json read_json_file(const std::string& path);

}  // namespace ef1po::cli
