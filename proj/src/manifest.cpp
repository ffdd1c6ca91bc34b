#include "triplesim/manifest.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "triplesim/errors.hpp"

namespace triplesim {

nlohmann::json manifest_to_json(const RunManifest& manifest) {
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [path, digest] : manifest.input_digests) inputs[path] = digest;
    nlohmann::json out{
        {"command", manifest.command},
        {"config", config_to_json(manifest.config)},
        {"input_digests", inputs},
        {"runtime_seconds", manifest.runtime_seconds},
        {"tool_version", manifest.tool_version},
    };
    if (manifest.seed) out["seed"] = *manifest.seed;
    return out;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write manifest: " + path);
    out << manifest_to_json(manifest).dump(2) << '\n';
}

}  // namespace triplesim
