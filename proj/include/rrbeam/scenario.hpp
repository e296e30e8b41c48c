#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rrbeam {

/// Uniform linear array. `spacing_ratio` is element spacing over carrier wavelength.
struct ArrayGeometry {
    int num_sensors = 0;
    double spacing_ratio = 0.5;
};

/// One narrowband plane-wave source.
///
/// For the signal of interest `power_db` is its SNR against unit noise; for
/// interferers it is relative to the signal of interest.
struct SourceSpec {
    double doa_degrees = 90.0;
    double power_db = 0.0;
    bool is_soi = false;
};

enum class Algorithm {
    MvdrSmi,
    MvdrSg,
    MvdrRls,
    RcbFullRank,
    KrylovRls,
    RcbKrylovRls,
    MvdrMjioSg,
    MvdrMjioRls,
    RcbMjioSg,
    RcbMjioRls,
};

std::string_view to_string(Algorithm algorithm);
/// Throws InvalidArgument for identifiers outside the registry.
Algorithm parse_algorithm(std::string_view name);
const std::vector<Algorithm>& all_algorithms();

struct ScenarioConfig {
    ArrayGeometry geometry;
    std::vector<SourceSpec> sources;
    double snr_db = 10.0;
    double mismatch_max_degrees = 0.0;
    int rank = 2;
    int snapshots = 120;
    int runs = 100;
    std::uint64_t seed = 1;
    double forgetting = 0.998;
    double delta = 0.0;  // 0 until defaults are applied: 100 / M
    double epsilon = 0.0;
    double mu_w = 0.005;
    double mu_s = 0.005;
    double mu_a = 0.01;
    double perturbation_degrees = 1.0;
    bool gram_schmidt = false;
    std::vector<Algorithm> algorithms;

    const SourceSpec& soi() const;
    /// Linear power of source k (noise power is 1).
    double source_power(std::size_t k) const;
    double soi_power() const;
};

/// Fills omitted hyperparameters (delta, epsilon) with their documented defaults.
void apply_defaults(ScenarioConfig& config);

/// Throws InvalidArgument naming the first violated invariant.
void validate(const ScenarioConfig& config);

/// Parses the key-value scenario format. Throws ScenarioParseError on
/// syntax problems and InvalidArgument on invariant violations.
ScenarioConfig parse_scenario(std::string_view text, std::string_view origin = "<string>");

/// Loads a scenario file, or a bundled scenario when `name_or_path` names one.
ScenarioConfig load_scenario(const std::filesystem::path& name_or_path);

/// Serializes a config back into the scenario format (round-trips through parse_scenario).
std::string format_scenario(const ScenarioConfig& config);

/// FNV-1a hash of the canonical serialization.
std::uint64_t scenario_hash(const ScenarioConfig& config);

struct BundledScenario {
    std::string_view name;
    std::string_view description;
    std::string_view text;
};
const std::vector<BundledScenario>& bundled_scenarios();

class ScenarioParseError : public std::runtime_error {
public:
    ScenarioParseError(std::string origin, int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace rrbeam
