#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>

namespace saola::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Everything needed to replay a run. Written at the top of every output file.
struct RunManifest {
    std::string command;
    nlohmann::ordered_json flags = nlohmann::ordered_json::object();
    nlohmann::ordered_json seeds = nlohmann::ordered_json::object();
    nlohmann::ordered_json fingerprints = nlohmann::ordered_json::object(); // path -> fnv1a64 hex

    nlohmann::ordered_json to_json() const;
    /// Single comment line for CSV outputs: "# manifest {...}".
    std::string csv_comment() const;
};

std::string hex64(std::uint64_t value);

} // namespace saola::cli
