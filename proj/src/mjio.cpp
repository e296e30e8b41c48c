#include "rrbeam/mjio.hpp"

#include <cmath>

#include "rrbeam/baselines.hpp"

namespace rrbeam {

SteeringBank build_steering_bank(double assumed_doa_degrees, const ArrayGeometry& geometry, int d,
                                 double delta_degrees) {
    if (d < 1) throw InvalidArgument("steering bank: rank must be at least 1");
    if (d > geometry.num_sensors) throw InvalidArgument("steering bank: rank exceeds sensor count");
    SteeringBank bank;
    bank.perturbation_degrees = delta_degrees;
    bank.assumed = steering_vector(geometry, assumed_doa_degrees);
    for (int k = 0; k < d; ++k) {
        const double offset = std::ceil(k / 2.0) * delta_degrees;
        const double doa = assumed_doa_degrees + (k % 2 == 1 ? offset : -offset);
        if (!(doa > 0.0 && doa < 180.0)) {
            throw InvalidArgument("steering bank: candidate DoA " + std::to_string(doa) +
                                  " leaves (0, 180)");
        }
        bank.candidate_doas.push_back(doa);
        bank.candidates.push_back(k == 0 ? bank.assumed : steering_vector(geometry, doa));
    }
    return bank;
}

CVector reduced_steering(const CMatrix& s_matrix, const CVector& a) { return s_matrix.adjoint() * a; }

CMatrix constraint_projector(const CVector& v) {
    const double n2 = v.squaredNorm();
    if (!(n2 > 0.0)) throw InvalidArgument("constraint_projector: zero vector");
    return CMatrix::Identity(v.size(), v.size()) - v * v.adjoint() / n2;
}

CVector project_out(const CVector& u, const CVector& v) {
    const double n2 = v.squaredNorm();
    if (!(n2 > 0.0)) throw InvalidArgument("project_out: zero vector");
    return u - v * (v.dot(u) / n2);
}

MjioState make_mjio_state(const SteeringBank& bank, double forgetting, double delta, double mu_w,
                          double mu_s) {
    const auto m = bank.assumed.size();
    const auto d = static_cast<Eigen::Index>(bank.rank());
    CMatrix s = CMatrix::Identity(m, d);
    const CVector a_d = reduced_steering(s, bank.assumed);
    return MjioState{
        .s_matrix = s,
        .weights = a_d / a_d.squaredNorm(),
        .tracker = CovarianceTracker(m, forgetting, delta),
        .reduced = CovarianceTracker(d, forgetting, delta),
        .power = PowerTracker(forgetting),
        .mu_w = mu_w,
        .mu_s = mu_s,
    };
}

MjioGradient mvdr_mjio_gradient(const CMatrix& s_matrix, const CVector& weights, const CVector& x) {
    const CVector x_tilde = s_matrix.adjoint() * x;
    const Complex z_conj = x_tilde.dot(weights);  // x^H S w
    return MjioGradient{
        .weights = x_tilde * z_conj,
        .s_matrix = (x * z_conj) * weights.adjoint(),
    };
}

void mjio_sg_step(MjioState& state, const SteeringBank& bank, const CVector& x) {
    state.power.update(x);
    const double p = state.power.value();
    if (!(p > 0.0)) return;
    const double mu_w = state.mu_w / p;
    const double mu_s = state.mu_s / p;

    const CVector a_red = reduced_steering(state.s_matrix, bank.assumed);
    const MjioGradient grad = mvdr_mjio_gradient(state.s_matrix, state.weights, x);

    state.weights -= mu_w * project_out(grad.weights, a_red);
    for (Eigen::Index d = 0; d < state.s_matrix.cols(); ++d) {
        state.s_matrix.col(d) -= mu_s * project_out(grad.s_matrix.col(d), bank.assumed);
    }

    // Both projections keep w^H a_D fixed; remove accumulated round-off.
    const CVector a_new = reduced_steering(state.s_matrix, bank.assumed);
    const Complex residual = 1.0 - state.weights.dot(a_new);
    state.weights += a_new * (std::conj(residual) / a_new.squaredNorm());
}

CVector reduced_mvdr_weights(const CMatrix& reduced_inv, const CVector& a_reduced) {
    const CVector ra = reduced_inv * a_reduced;
    const double denom = a_reduced.dot(ra).real();
    if (!(std::abs(denom) > 1e-300) || !std::isfinite(denom)) {
        throw NumericalError("reduced MVDR: a_D^H R_D^-1 a_D is singular");
    }
    return ra / denom;
}

void mjio_rls_step(MjioState& state, const SteeringBank& bank, const CVector& x) {
    const auto cols = state.s_matrix.cols();

    state.reduced.update(CVector(state.s_matrix.adjoint() * x));
    state.tracker.update(x);

    const CMatrix& r_inv = state.tracker.r_inv();
    const CVector combined = state.s_matrix * state.weights;
    CMatrix next = state.s_matrix;
    for (Eigen::Index d = 0; d < cols; ++d) {
        const Complex w_d = state.weights(d);
        if (std::abs(w_d) < 1e-12) {
            ++state.skipped_columns;
            continue;
        }
        const CVector& a_d = bank.candidates[static_cast<std::size_t>(d)];
        // beta_d: full combination minus the combination without column d.
        const CVector others = combined - state.s_matrix.col(d) * w_d;
        const CVector beta = combined - others;
        const CVector r_inv_a = r_inv * a_d;
        const Complex denom = a_d.dot(r_inv_a) * w_d;
        if (!(std::abs(denom) > 1e-300)) {
            throw NumericalError("mjio_rls_step: a_d^H R^-1 a_d w_d vanished");
        }
        next.col(d) = r_inv_a * (a_d.dot(beta) / denom);
    }
    state.s_matrix = std::move(next);

    state.weights =
        reduced_mvdr_weights(state.reduced.r_inv(), reduced_steering(state.s_matrix, bank.assumed));
}

double smallest_singular_value(const CMatrix& m) {
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& sv = svd.singularValues();
    return sv(sv.size() - 1);
}

}  // namespace rrbeam
