#include "rrbeam/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <optional>
#include <thread>

#include "rrbeam/baselines.hpp"
#include "rrbeam/mjio.hpp"
#include "rrbeam/rcb_mjio.hpp"

namespace rrbeam {

namespace {

constexpr std::uint64_t kMismatchStream = 1;
constexpr std::uint64_t kSnapshotStream = 2;

class SmiBeamformer final : public Beamformer {
public:
    SmiBeamformer(const ScenarioConfig& c, CVector assumed)
        : assumed_(std::move(assumed)), tracker_(assumed_.size(), c.forgetting, c.delta) {
        weights_ = assumed_ / assumed_.squaredNorm();
    }
    void step(const CVector& x) override {
        tracker_.update(x);
        const Eigen::LLT<CMatrix> llt(tracker_.r_hat());
        if (llt.info() != Eigen::Success) throw NumericalError("mvdr-smi: covariance not positive definite");
        const CVector ra = llt.solve(assumed_);
        weights_ = ra / assumed_.dot(ra).real();
    }
    CVector full_weights() const override { return weights_; }

private:
    CVector assumed_;
    CovarianceTracker tracker_;
    CVector weights_;
};

class FullRankBeamformer final : public Beamformer {
public:
    FullRankBeamformer(const ScenarioConfig& c, const CVector& assumed, bool rls)
        : state_(make_fullrank_state(assumed, c.forgetting, c.delta, c.mu_w)), rls_(rls) {}
    void step(const CVector& x) override {
        if (rls_) fullrank_rls_step(state_, x);
        else fullrank_sg_step(state_, x);
    }
    CVector full_weights() const override { return state_.weights; }

private:
    FullRankState state_;
    bool rls_;
};

class RcbFullRankBeamformer final : public Beamformer {
public:
    RcbFullRankBeamformer(const ScenarioConfig& c, CVector assumed)
        : assumed_(std::move(assumed)),
          tracker_(assumed_.size(), c.forgetting, c.delta),
          epsilon_(c.epsilon) {
        weights_ = assumed_ / assumed_.squaredNorm();
    }
    void step(const CVector& x) override {
        tracker_.update(x);
        weights_ = rcb_fullrank(tracker_.r_hat(), assumed_, epsilon_);
    }
    CVector full_weights() const override { return weights_; }

private:
    CVector assumed_;
    CovarianceTracker tracker_;
    double epsilon_;
    CVector weights_;
};

/// Krylov rank reduction with the reduced MVDR RLS update.
class KrylovBeamformer final : public Beamformer {
public:
    KrylovBeamformer(const ScenarioConfig& c, CVector assumed)
        : assumed_(std::move(assumed)),
          rank_(c.rank),
          tracker_(assumed_.size(), c.forgetting, c.delta),
          reduced_(c.rank, c.forgetting, c.delta),
          s_matrix_(CMatrix::Identity(assumed_.size(), c.rank)) {
        const CVector a_red = reduced_steering(s_matrix_, assumed_);
        weights_ = a_red / a_red.squaredNorm();
    }
    void step(const CVector& x) override {
        tracker_.update(x);
        s_matrix_ = krylov_projection(tracker_.r_hat(), assumed_, rank_);
        reduced_.update(CVector(s_matrix_.adjoint() * x));
        weights_ = reduced_mvdr_weights(reduced_.r_inv(), reduced_steering(s_matrix_, assumed_));
    }
    CVector full_weights() const override { return s_matrix_ * weights_; }

private:
    CVector assumed_;
    int rank_;
    CovarianceTracker tracker_;
    CovarianceTracker reduced_;
    CMatrix s_matrix_;
    CVector weights_;
};

/// Krylov rank reduction paired with the robust reduced steering update.
class RcbKrylovBeamformer final : public Beamformer {
public:
    RcbKrylovBeamformer(const ScenarioConfig& c, const SteeringBank& bank)
        : rank_(c.rank),
          tracker_(bank.assumed.size(), c.forgetting, c.delta),
          state_(make_rcb_mjio_state(bank, c.forgetting, c.delta, c.mu_w, c.mu_s, c.mu_a,
                                     c.epsilon, false)) {}
    void step(const CVector& x) override {
        tracker_.update(x);
        rcb_fixed_projection_rls_step(
            state_, krylov_projection(tracker_.r_hat(), state_.bank.assumed, rank_), x);
    }
    CVector full_weights() const override { return state_.base.full_weights(); }

private:
    int rank_;
    CovarianceTracker tracker_;
    RcbMjioState state_;
};

class MjioBeamformer final : public Beamformer {
public:
    MjioBeamformer(const ScenarioConfig& c, SteeringBank bank, bool rls)
        : bank_(std::move(bank)),
          state_(make_mjio_state(bank_, c.forgetting, c.delta, c.mu_w, c.mu_s)),
          rls_(rls) {}
    void step(const CVector& x) override {
        if (rls_) mjio_rls_step(state_, bank_, x);
        else mjio_sg_step(state_, bank_, x);
    }
    CVector full_weights() const override { return state_.full_weights(); }

private:
    SteeringBank bank_;
    MjioState state_;
    bool rls_;
};

class RcbMjioBeamformer final : public Beamformer {
public:
    RcbMjioBeamformer(const ScenarioConfig& c, const SteeringBank& bank, bool rls)
        : state_(make_rcb_mjio_state(bank, c.forgetting, c.delta, c.mu_w, c.mu_s, c.mu_a,
                                     c.epsilon, c.gram_schmidt)),
          rls_(rls) {}
    void step(const CVector& x) override {
        if (rls_) rcb_mjio_rls_step(state_, x);
        else rcb_mjio_sg_step(state_, x);
    }
    CVector full_weights() const override { return state_.base.full_weights(); }

private:
    RcbMjioState state_;
    bool rls_;
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

std::unique_ptr<Beamformer> make_beamformer(Algorithm algorithm, const ScenarioConfig& config,
                                            double assumed_doa_degrees) {
    const CVector assumed = steering_vector(config.geometry, assumed_doa_degrees);
    auto bank = [&] {
        return build_steering_bank(assumed_doa_degrees, config.geometry, config.rank,
                                   config.perturbation_degrees);
    };
    switch (algorithm) {
        case Algorithm::MvdrSmi: return std::make_unique<SmiBeamformer>(config, assumed);
        case Algorithm::MvdrSg: return std::make_unique<FullRankBeamformer>(config, assumed, false);
        case Algorithm::MvdrRls: return std::make_unique<FullRankBeamformer>(config, assumed, true);
        case Algorithm::RcbFullRank: return std::make_unique<RcbFullRankBeamformer>(config, assumed);
        case Algorithm::KrylovRls: return std::make_unique<KrylovBeamformer>(config, assumed);
        case Algorithm::RcbKrylovRls: return std::make_unique<RcbKrylovBeamformer>(config, bank());
        case Algorithm::MvdrMjioSg: return std::make_unique<MjioBeamformer>(config, bank(), false);
        case Algorithm::MvdrMjioRls: return std::make_unique<MjioBeamformer>(config, bank(), true);
        case Algorithm::RcbMjioSg: return std::make_unique<RcbMjioBeamformer>(config, bank(), false);
        case Algorithm::RcbMjioRls: return std::make_unique<RcbMjioBeamformer>(config, bank(), true);
    }
    throw InvalidArgument("make_beamformer: unknown algorithm");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial, std::uint64_t stream) {
    return splitmix64(splitmix64(splitmix64(base) ^ trial) ^ stream);
}

double apply_mismatch(const ScenarioConfig& config, Rng& rng) {
    if (config.mismatch_max_degrees == 0.0) return 0.0;
    std::uniform_real_distribution<double> uniform(-config.mismatch_max_degrees,
                                                   config.mismatch_max_degrees);
    return uniform(rng);
}

TrialError::TrialError(int trial, int snapshot, const std::string& message)
    : std::runtime_error("trial " + std::to_string(trial) + ", snapshot " +
                         std::to_string(snapshot) + ": " + message),
      trial_(trial),
      snapshot_(snapshot) {}

std::vector<double> run_trial(const ScenarioConfig& config, Algorithm algorithm, int trial_index) {
    const auto trial = static_cast<std::uint64_t>(trial_index);
    Rng mismatch_rng(derive_seed(config.seed, trial, kMismatchStream));
    Rng snapshot_rng(derive_seed(config.seed, trial, kSnapshotStream));

    const double assumed_doa = config.soi().doa_degrees + apply_mismatch(config, mismatch_rng);
    const SnapshotSource source(config);
    const SinrEvaluator evaluator(config);

    std::vector<double> sinr;
    sinr.reserve(static_cast<std::size_t>(config.snapshots));
    int snapshot = 0;
    try {
        auto beamformer = make_beamformer(algorithm, config, assumed_doa);
        for (snapshot = 1; snapshot <= config.snapshots; ++snapshot) {
            const Snapshot x = source.next(snapshot_rng);
            beamformer->step(x.data);
            const CVector w = beamformer->full_weights();
            if (!w.allFinite()) throw NumericalError("non-finite weights");
            sinr.push_back(evaluator.output_sinr_db(w));
        }
    } catch (const NumericalError& e) {
        throw TrialError(trial_index, snapshot, e.what());
    } catch (const InvalidArgument& e) {
        throw TrialError(trial_index, snapshot, e.what());
    }
    return sinr;
}

TrialSet run_trials(const ScenarioConfig& config, Algorithm algorithm,
                    const MonteCarloOptions& options) {
    const auto runs = static_cast<std::size_t>(config.runs);
    std::vector<std::optional<std::vector<double>>> results(runs);
    std::vector<std::string> errors(runs);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < runs; t = next++) {
            try {
                results[t] = run_trial(config, algorithm, static_cast<int>(t));
            } catch (const TrialError& e) {
                errors[t] = e.what();
            }
        }
    };
    unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(runs, 1)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    TrialSet set;
    for (std::size_t t = 0; t < runs; ++t) {
        if (results[t]) {
            set.trial_indices.push_back(static_cast<int>(t));
            set.sinr_db.push_back(std::move(*results[t]));
        } else {
            set.failures.push_back(std::string(to_string(algorithm)) + ": " + errors[t]);
        }
    }
    return set;
}

SinrTrace summarize(const ScenarioConfig& config, Algorithm algorithm, const TrialSet& trials) {
    const auto n = static_cast<std::size_t>(config.snapshots);
    const int failures = static_cast<int>(trials.failures.size());
    if (failures * 100 > config.runs) {
        std::string message = std::string(to_string(algorithm)) + ": " + std::to_string(failures) +
                              " of " + std::to_string(config.runs) + " trials failed";
        if (!trials.failures.empty()) message += " (first: " + trials.failures.front() + ")";
        throw std::runtime_error(message);
    }
    SinrTrace trace;
    trace.algorithm = algorithm;
    trace.runs = static_cast<int>(trials.sinr_db.size());
    trace.failures = failures;
    trace.failure_messages = trials.failures;
    trace.scenario_hash = scenario_hash(config);
    trace.seed = config.seed;
    trace.per_snapshot_sinr_db.assign(n, 0.0);
    trace.per_snapshot_std_db.assign(n, 0.0);
    const double count = static_cast<double>(trace.runs);
    // Fixed trial-index order keeps the sums bitwise reproducible.
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (const auto& run : trials.sinr_db) sum += run[i];
        const double mean = sum / count;
        double sq = 0.0;
        for (const auto& run : trials.sinr_db) sq += (run[i] - mean) * (run[i] - mean);
        trace.per_snapshot_sinr_db[i] = mean;
        trace.per_snapshot_std_db[i] = trace.runs > 1 ? std::sqrt(sq / (count - 1.0)) : 0.0;
    }
    return trace;
}

std::vector<SinrTrace> run_monte_carlo(const ScenarioConfig& config, const MonteCarloOptions& options) {
    validate(config);
    std::vector<SinrTrace> traces;
    for (const Algorithm algorithm : config.algorithms) {
        traces.push_back(summarize(config, algorithm, run_trials(config, algorithm, options)));
    }
    return traces;
}

}  // namespace rrbeam
