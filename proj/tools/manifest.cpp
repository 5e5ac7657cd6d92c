#include "manifest.hpp"

#include <cstdio>

namespace saola::cli {

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["flags"] = flags;
    j["seeds"] = seeds;
    j["dataset_fingerprint"] = fingerprints;
    return j;
}

std::string RunManifest::csv_comment() const { return "# manifest " + to_json().dump(); }

} // namespace saola::cli
