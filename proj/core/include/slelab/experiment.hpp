#ifndef SLELAB_EXPERIMENT_HPP
#define SLELAB_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace slelab {

/// A parsed experiment description. Raw JSON is kept alongside so the
/// manifest can echo the config byte-exactly.
struct ExperimentConfig {
    std::string kind;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir;
    std::optional<std::size_t> max_traces;
    std::optional<std::size_t> max_squares;
    std::optional<double> max_seconds;
    std::string raw_json;

    static ExperimentConfig parse(const std::string& json_text);
    static ExperimentConfig load(const std::filesystem::path& file);
};

struct Diagnostic {
    bool is_error = false;
    std::string message;
};

/// Range checks every parameter against the owning operation's
/// preconditions without running anything. Unknown keys are errors.
std::vector<Diagnostic> validate(const ExperimentConfig& config);

struct RunOverrides {
    std::optional<std::filesystem::path> output_dir;
    std::optional<std::uint64_t> seed;
    std::size_t threads = 0;
};

struct ManifestEntry {
    std::string file;
    std::string digest; // fnv1a64 of the bytes
};

struct RunManifest {
    std::string kind;
    std::string version;
    double wall_seconds = 0.0;
    bool truncated = false;
    std::vector<ManifestEntry> outputs;
    std::filesystem::path manifest_path;

    std::string to_json(const std::string& config_echo) const;
};

/// Runs the experiment, writes its CSV/JSON outputs (and an SVG log-log
/// plot for regression experiments) plus manifest.json into output_dir.
/// Re-running an identical, un-truncated config writes byte-identical
/// outputs; the manifest itself carries the wall time and is excluded
/// from that guarantee.
RunManifest run(const ExperimentConfig& config, const RunOverrides& overrides = {});

} // namespace slelab

#endif
