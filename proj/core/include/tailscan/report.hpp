#pragma once

#include <string>

#include <json.hpp>

#include "tailscan/harness.hpp"
#include "tailscan/scan.hpp"

namespace tailscan {

// All machine output carries this schema tag.
inline constexpr const char* kSchema = "tailscan/1";

// Serializations are byte-stable for fixed inputs: ordered keys, no
// timestamps or timings.
nlohmann::ordered_json to_json(const ScanResult& res);
nlohmann::ordered_json to_json(const McReport& rep);
nlohmann::ordered_json to_json(const SuiteSummary& summary);

// Flat per-interval projection of a scan result.
std::string to_csv(const ScanResult& res);

}  // namespace tailscan
