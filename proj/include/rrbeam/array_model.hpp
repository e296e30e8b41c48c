#pragma once

#include <cstdint>
#include <random>

#include "rrbeam/scenario.hpp"
#include "rrbeam/types.hpp"

namespace rrbeam {

using Rng = std::mt19937_64;

/// One received array sample x[i].
struct Snapshot {
    CVector data;
};

/// Element m is exp(-2*pi*j * m * spacing_ratio * cos(theta)).
CVector steering_vector(const ArrayGeometry& geometry, double doa_degrees);

/// Zero-mean circular complex Gaussian vector with per-entry variance `variance`.
CVector complex_gaussian(Rng& rng, Eigen::Index size, double variance);

/// Draws snapshots x = sum_k a(theta_k) s_k + n for a fixed set of true DoAs.
class SnapshotSource {
public:
    explicit SnapshotSource(const ScenarioConfig& config, double noise_power = 1.0);

    Snapshot next(Rng& rng) const;
    /// Deterministic composition from given source symbols and noise.
    Snapshot compose(const CVector& symbols, const CVector& noise) const;

    const CMatrix& steering_matrix() const { return steering_; }
    Eigen::Index num_sources() const { return steering_.cols(); }

private:
    CMatrix steering_;
    Eigen::VectorXd source_power_;
    double noise_power_;
};

/// Single draw of generate_snapshot; prefer SnapshotSource inside loops.
Snapshot generate_snapshot(const ScenarioConfig& config, Rng& rng);

/// Exponentially weighted sample covariance with a rank-one tracked inverse.
///
/// r_hat starts at I / delta so that r_inv == r_hat^-1 holds for every
/// forgetting factor, not only alpha = 1.
class CovarianceTracker {
public:
    CovarianceTracker(Eigen::Index dimension, double forgetting, double delta);

    /// Throws NumericalError if the gain denominator falls below 1e-14 in magnitude.
    void update(const CVector& x);
    void update(const Snapshot& x) { update(x.data); }

    const CMatrix& r_hat() const { return r_hat_; }
    const CMatrix& r_inv() const { return r_inv_; }
    std::uint64_t count() const { return count_; }
    double forgetting() const { return forgetting_; }
    double delta() const { return delta_; }
    Eigen::Index dimension() const { return r_hat_.rows(); }

private:
    CMatrix r_hat_;
    CMatrix r_inv_;
    std::uint64_t count_ = 0;
    double forgetting_;
    double delta_;
};

/// Exponentially weighted mean of ||x||^2, used to normalize SG step sizes.
class PowerTracker {
public:
    explicit PowerTracker(double forgetting = 0.998) : forgetting_(forgetting) {}

    void update(const CVector& x);
    /// Zero before the first update.
    double value() const { return value_; }

private:
    double forgetting_;
    double value_ = 0.0;
    double weight_ = 0.0;
};

/// R_k = sigma_s^2 a_s a_s^H for the true SoI direction.
CMatrix soi_covariance(const ScenarioConfig& config);
/// R_{i+n} = sum over interferers sigma_k^2 a_k a_k^H + I.
CMatrix interference_noise_covariance(const ScenarioConfig& config);

/// Scores beamformers against the analytic covariances of one scenario.
class SinrEvaluator {
public:
    explicit SinrEvaluator(const ScenarioConfig& config);

    /// Returns kSinrFloorDb for a vanishing signal term; throws
    /// NumericalError when w^H R_{i+n} w vanishes.
    double output_sinr_db(const CVector& weights) const;
    double optimal_sinr_db() const;
    /// R_{i+n}^-1 a_s, the unnormalized optimum.
    CVector optimal_weights() const;

    const CVector& soi_steering() const { return soi_steering_; }
    const CMatrix& interference_noise() const { return interference_noise_; }

private:
    CVector soi_steering_;
    double soi_power_;
    CMatrix interference_noise_;
    Eigen::LLT<CMatrix> factor_;
};

double output_sinr(const CVector& weights, const ScenarioConfig& config);
double optimal_sinr(const ScenarioConfig& config);

}  // namespace rrbeam
