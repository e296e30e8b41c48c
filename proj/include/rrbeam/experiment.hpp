#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrbeam/array_model.hpp"
#include "rrbeam/scenario.hpp"

namespace rrbeam {

/// Common stepping interface over every registered algorithm.
class Beamformer {
public:
    virtual ~Beamformer() = default;
    virtual void step(const CVector& x) = 0;
    /// Full-dimension weights scored against the analytic covariances
    /// (S_D w for reduced-rank methods, recomputed on each call).
    virtual CVector full_weights() const = 0;
};

/// Builds the named algorithm around a presumed SoI direction.
std::unique_ptr<Beamformer> make_beamformer(Algorithm algorithm, const ScenarioConfig& config,
                                            double assumed_doa_degrees);

/// splitmix64-based derivation of independent stream seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial, std::uint64_t stream);

/// Presumed-DoA error drawn uniformly from [-max, +max].
double apply_mismatch(const ScenarioConfig& config, Rng& rng);

/// Error raised by run_trial, tagged with the trial and snapshot index.
class TrialError : public std::runtime_error {
public:
    TrialError(int trial, int snapshot, const std::string& message);
    int trial() const { return trial_; }
    int snapshot() const { return snapshot_; }

private:
    int trial_;
    int snapshot_;
};

/// One seeded trial; returns the per-snapshot output SINR in dB.
/// Snapshot data and the mismatch draw depend only on (seed, trial_index),
/// so every algorithm sees the same realization.
std::vector<double> run_trial(const ScenarioConfig& config, Algorithm algorithm, int trial_index);

struct SinrTrace {
    Algorithm algorithm{};
    std::vector<double> per_snapshot_sinr_db;  // mean over successful runs
    std::vector<double> per_snapshot_std_db;
    int runs = 0;       // successful runs
    int failures = 0;
    std::uint64_t scenario_hash = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> failure_messages;
};

/// All runs of one algorithm, trials in index order (failed trials omitted).
struct TrialSet {
    std::vector<int> trial_indices;
    std::vector<std::vector<double>> sinr_db;
    std::vector<std::string> failures;
};

struct MonteCarloOptions {
    unsigned threads = 0;  // 0: hardware concurrency
};

TrialSet run_trials(const ScenarioConfig& config, Algorithm algorithm,
                    const MonteCarloOptions& options = {});

/// Mean/std over trials. Throws std::runtime_error when more than 1% of trials failed.
SinrTrace summarize(const ScenarioConfig& config, Algorithm algorithm, const TrialSet& trials);

std::vector<SinrTrace> run_monte_carlo(const ScenarioConfig& config,
                                       const MonteCarloOptions& options = {});

}  // namespace rrbeam
