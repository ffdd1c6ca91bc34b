#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "triplesim/similarity.hpp"

namespace triplesim {

inline constexpr const char* kToolVersion = "0.1.0";

/// Provenance record written next to every output set: re-running a
/// command whose manifest matches reproduces the outputs bit-exactly.
struct RunManifest {
    std::string command;
    SimilarityConfig config;
    std::map<std::string, std::string> input_digests;  // path -> sha256
    std::optional<std::uint64_t> seed;
    std::string tool_version = kToolVersion;
    double runtime_seconds = 0.0;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);

/// Serializes the manifest as pretty-printed JSON at `path`.
void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace triplesim
