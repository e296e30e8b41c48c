#include "rrbeam/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace rrbeam {

CVector mvdr_weights(const CMatrix& r_inv, const CVector& a) {
    const CVector ra = r_inv * a;
    const Complex denom = a.dot(ra);
    if (!(std::abs(denom) > 1e-300) || !std::isfinite(denom.real())) {
        throw NumericalError("mvdr_weights: a^H R^-1 a is singular");
    }
    return ra / denom.real();
}

FullRankState make_fullrank_state(const CVector& assumed, double forgetting, double delta,
                                  double step_size) {
    return FullRankState{
        .weights = assumed / assumed.squaredNorm(),
        .assumed = assumed,
        .tracker = CovarianceTracker(assumed.size(), forgetting, delta),
        .power = PowerTracker(forgetting),
        .step_size = step_size,
    };
}

void fullrank_sg_step(FullRankState& state, const CVector& x) {
    state.power.update(x);
    if (state.step_size == 0.0 || state.power.value() <= 0.0) return;
    const double mu = state.step_size / state.power.value();
    const CVector& a = state.assumed;
    const double a_norm2 = a.squaredNorm();

    const Complex y = state.weights.dot(x);
    const CVector projected = x - a * (a.dot(x) / a_norm2);
    state.weights -= mu * projected * std::conj(y);

    // Restore w^H a = 1 after round-off drift.
    const Complex residual = 1.0 - state.weights.dot(a);
    state.weights += a * (std::conj(residual) / a_norm2);
}

void fullrank_rls_step(FullRankState& state, const CVector& x) {
    state.tracker.update(x);
    state.weights = mvdr_weights(state.tracker.r_inv(), state.assumed);
}

RcbSolution solve_robust_capon(const CMatrix& r_hat, const CVector& a_bar, double epsilon) {
    const double a_norm2 = a_bar.squaredNorm();
    if (!(epsilon > 0.0)) throw InvalidArgument("rcb: epsilon must be positive");
    if (epsilon >= a_norm2) {
        throw InvalidArgument("rcb: epsilon must be below ||a_bar||^2 = " + std::to_string(a_norm2));
    }

    Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(r_hat));
    if (eig.info() != Eigen::Success) throw NumericalError("rcb: eigendecomposition failed");
    const Eigen::VectorXd& gamma = eig.eigenvalues();
    if (!(gamma(0) > 0.0)) throw InvalidArgument("rcb: covariance must be positive definite");
    const CVector z = eig.eigenvectors().adjoint() * a_bar;
    const Eigen::VectorXd z2 = z.cwiseAbs2();

    // g(lambda) = sum |z|^2 / (1 + lambda gamma)^2 decreases from ||a_bar||^2 to 0.
    auto g = [&](double lambda) {
        return (z2.array() / (1.0 + lambda * gamma.array()).square()).sum();
    };
    auto dg = [&](double lambda) {
        return (-2.0 * z2.array() * gamma.array() / (1.0 + lambda * gamma.array()).cube()).sum();
    };

    const double root = std::sqrt(a_norm2) - std::sqrt(epsilon);
    double lo = root / (gamma(gamma.size() - 1) * std::sqrt(epsilon));
    double hi = root / (gamma(0) * std::sqrt(epsilon));
    double lambda = 0.5 * (lo + hi);
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
        const double residual = g(lambda) - epsilon;
        if (std::abs(residual) <= 1e-10 * epsilon) {
            converged = true;
            break;
        }
        if (residual > 0.0) lo = lambda; else hi = lambda;
        double next = lambda - residual / dg(lambda);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        lambda = next;
        if (hi - lo <= 1e-15 * hi) {
            converged = std::abs(g(lambda) - epsilon) <= 1e-6 * epsilon;
            break;
        }
    }
    if (!converged) throw NumericalError("rcb: multiplier search did not converge");

    const CVector shrink = (z.array() / (1.0 + lambda * gamma.array()).cast<Complex>()).matrix();
    const CVector steering = a_bar - eig.eigenvectors() * shrink;
    const CVector r_inv_a =
        eig.eigenvectors() * ((eig.eigenvectors().adjoint() * steering).array() /
                              gamma.array().cast<Complex>()).matrix();
    const double denom = steering.dot(r_inv_a).real();
    return RcbSolution{.weights = r_inv_a / denom, .steering = steering, .multiplier = lambda};
}

CVector rcb_fullrank(const CMatrix& r_hat, const CVector& a_bar, double epsilon) {
    return solve_robust_capon(r_hat, a_bar, epsilon).weights;
}

CMatrix krylov_projection(const CMatrix& r_hat, const CVector& a, int d) {
    if (d < 1 || d > a.size()) throw InvalidArgument("krylov_projection: need 1 <= D <= M");
    const double a_norm = a.norm();
    if (!(a_norm > 0.0)) throw InvalidArgument("krylov_projection: zero steering vector");

    CMatrix basis(a.size(), d);
    basis.col(0) = a / a_norm;
    for (int k = 1; k < d; ++k) {
        const CVector next = r_hat * basis.col(k - 1);
        const double n = next.norm();
        if (!(n > 0.0)) throw NumericalError("krylov_projection: Krylov sequence vanished");
        basis.col(k) = next / n;
    }
    if (d > 1) {
        Eigen::JacobiSVD<CMatrix> svd(basis);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) < 1e-10 * sv(0)) {
            throw NumericalError("krylov_projection: rank-deficient Krylov basis");
        }
    }
    return basis;
}

}  // namespace rrbeam
