#include "rrbeam/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rrbeam {

CVector steering_vector(const ArrayGeometry& geometry, double doa_degrees) {
    const double theta = doa_degrees * std::numbers::pi / 180.0;
    const double phase_step = -2.0 * std::numbers::pi * geometry.spacing_ratio * std::cos(theta);
    CVector a(geometry.num_sensors);
    for (Eigen::Index m = 0; m < a.size(); ++m) {
        a(m) = std::polar(1.0, phase_step * static_cast<double>(m));
    }
    return a;
}

CVector complex_gaussian(Rng& rng, Eigen::Index size, double variance) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = std::sqrt(variance / 2.0);
    CVector v(size);
    for (Eigen::Index i = 0; i < size; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        v(i) = Complex(re, im) * scale;
    }
    return v;
}

SnapshotSource::SnapshotSource(const ScenarioConfig& config, double noise_power)
    : steering_(config.geometry.num_sensors, static_cast<Eigen::Index>(config.sources.size())),
      source_power_(static_cast<Eigen::Index>(config.sources.size())),
      noise_power_(noise_power) {
    for (std::size_t k = 0; k < config.sources.size(); ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        steering_.col(col) = steering_vector(config.geometry, config.sources[k].doa_degrees);
        source_power_(col) = config.source_power(k);
    }
}

Snapshot SnapshotSource::next(Rng& rng) const {
    CVector symbols(num_sources());
    for (Eigen::Index k = 0; k < num_sources(); ++k) {
        symbols(k) = complex_gaussian(rng, 1, source_power_(k))(0);
    }
    CVector noise = complex_gaussian(rng, steering_.rows(), noise_power_);
    return compose(symbols, noise);
}

Snapshot SnapshotSource::compose(const CVector& symbols, const CVector& noise) const {
    return Snapshot{steering_ * symbols + noise};
}

Snapshot generate_snapshot(const ScenarioConfig& config, Rng& rng) {
    return SnapshotSource(config).next(rng);
}

CovarianceTracker::CovarianceTracker(Eigen::Index dimension, double forgetting, double delta)
    : r_hat_(CMatrix::Identity(dimension, dimension) / delta),
      r_inv_(CMatrix::Identity(dimension, dimension) * delta),
      forgetting_(forgetting),
      delta_(delta) {
    if (dimension < 1) throw InvalidArgument("covariance dimension must be positive");
    if (!(forgetting > 0.0 && forgetting <= 1.0)) throw InvalidArgument("forgetting factor must lie in (0, 1]");
    if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
}

void CovarianceTracker::update(const CVector& x) {
    const double inv_alpha = 1.0 / forgetting_;
    const CVector px = r_inv_ * x;
    const Complex denom = 1.0 + inv_alpha * x.dot(px);
    if (std::abs(denom) < 1e-14) {
        throw NumericalError("covariance update: gain denominator vanished");
    }
    const CVector gain = (inv_alpha / denom) * px;
    // x^H P is (P x)^H because P is Hermitian.
    r_inv_ = inv_alpha * r_inv_ - inv_alpha * gain * px.adjoint();
    r_inv_ = hermitian_part(r_inv_);
    r_hat_ = forgetting_ * r_hat_ + x * x.adjoint();
    ++count_;
}

void PowerTracker::update(const CVector& x) {
    weight_ = forgetting_ * weight_ + 1.0;
    value_ += (x.squaredNorm() - value_) / weight_;
}

CMatrix soi_covariance(const ScenarioConfig& config) {
    const CVector a = steering_vector(config.geometry, config.soi().doa_degrees);
    return config.soi_power() * a * a.adjoint();
}

CMatrix interference_noise_covariance(const ScenarioConfig& config) {
    const auto m = config.geometry.num_sensors;
    CMatrix r = CMatrix::Identity(m, m);
    for (std::size_t k = 0; k < config.sources.size(); ++k) {
        if (config.sources[k].is_soi) continue;
        const CVector a = steering_vector(config.geometry, config.sources[k].doa_degrees);
        r.noalias() += config.source_power(k) * a * a.adjoint();
    }
    return r;
}

SinrEvaluator::SinrEvaluator(const ScenarioConfig& config)
    : soi_steering_(steering_vector(config.geometry, config.soi().doa_degrees)),
      soi_power_(config.soi_power()),
      interference_noise_(interference_noise_covariance(config)),
      factor_(interference_noise_) {}

double SinrEvaluator::output_sinr_db(const CVector& weights) const {
    const double signal = soi_power_ * std::norm(weights.dot(soi_steering_));
    const double disturbance = weights.dot(interference_noise_ * weights).real();
    if (!(disturbance > 0.0)) {
        throw NumericalError("output SINR: interference-plus-noise power vanished");
    }
    if (!(signal > 0.0)) return kSinrFloorDb;
    return std::max(kSinrFloorDb, 10.0 * std::log10(signal / disturbance));
}

CVector SinrEvaluator::optimal_weights() const { return factor_.solve(soi_steering_); }

double SinrEvaluator::optimal_sinr_db() const {
    const double gain = soi_steering_.dot(optimal_weights()).real();
    return 10.0 * std::log10(soi_power_ * gain);
}

double output_sinr(const CVector& weights, const ScenarioConfig& config) {
    return SinrEvaluator(config).output_sinr_db(weights);
}

double optimal_sinr(const ScenarioConfig& config) { return SinrEvaluator(config).optimal_sinr_db(); }

}  // namespace rrbeam
